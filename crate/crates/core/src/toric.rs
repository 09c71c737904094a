//! Toric h-vectors: the defining recursion, the action of `c` and `d` as
//! operators on coefficient vectors, sweeps, and the extended toric h-vector.

use std::collections::BTreeMap;

use num_traits::Num;
use thiserror::Error;

use crate::exactnum::{format_rational, rat, ratio, Rational};
use crate::flagvec::{cd_words, Cd, CdPoly, CdWord};
use crate::polytope::{dual, FaceLattice, Polytope};
use crate::sweep::{build_qv, build_rv, SweepDirection, SweepError, SweepResult};

/// `(h_0, ..., h_d)`. Intermediate vectors need not be symmetric.
pub type ToricHVector = Vec<i64>;
/// `(g_0, ..., g_{⌊d/2⌋})`.
pub type GVector = Vec<i64>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ToricError {
    #[error("vector {0} is not in the image of c")]
    NotInImage(String),
    #[error("symmetric toric sweep total is not integral: {0}")]
    NonIntegral(String),
    #[error(transparent)]
    Sweep(#[from] SweepError),
}

fn show<K: std::fmt::Display>(v: &[K]) -> String {
    format!("({})", v.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
}

/// `g_0 = h_0`, `g_i = h_i - h_{i-1}` for `i <= ⌊d/2⌋`.
pub fn g_from_h<K: Num + Clone>(h: &[K]) -> Vec<K> {
    let d = h.len() - 1;
    (0..=d / 2)
        .map(|i| if i == 0 { h[0].clone() } else { h[i].clone() - h[i - 1].clone() })
        .collect()
}

/// `R^{d+1} → R^{d+2}`: `(g_0, ..., g_m, [0,] g_m, ..., g_0)` with the
/// middle zero present for odd `d`.
pub fn op_c<K: Num + Clone>(h: &[K]) -> Vec<K> {
    let d = h.len() - 1;
    let g = g_from_h(h);
    let mut out = g.clone();
    if d % 2 == 1 {
        out.push(K::zero());
    }
    out.extend(g.into_iter().rev());
    out
}

/// `R^{d+1} → R^{d+3}`: zero except `g_{d/2}` at the centre for even `d`.
pub fn op_d<K: Num + Clone>(h: &[K]) -> Vec<K> {
    let d = h.len() - 1;
    let mut out = vec![K::zero(); d + 3];
    if d % 2 == 0 {
        out[d / 2 + 1] = g_from_h(h)[d / 2].clone();
    }
    out
}

pub fn apply_letter<K: Num + Clone>(h: &[K], l: Cd) -> Vec<K> {
    match l {
        Cd::C => op_c(h),
        Cd::D => op_d(h),
    }
}

/// Applies the letters of `w` to `seed`, first letter first.
pub fn act_word<K: Num + Clone>(seed: &[K], w: &CdWord) -> Vec<K> {
    w.letters().iter().fold(seed.to_vec(), |h, &l| apply_letter(&h, l))
}

fn add_into(acc: &mut [i64], x: &[i64], k: i64) {
    for (a, b) in acc.iter_mut().zip(x) {
        *a += k * b;
    }
}

/// `(1)Φ` evaluated for a homogeneous `Φ` of degree `d`.
pub fn act_poly(phi: &CdPoly, d: usize) -> ToricHVector {
    let mut out = vec![0i64; d + 1];
    for (w, &k) in phi.terms() {
        debug_assert_eq!(w.degree(), d);
        add_into(&mut out, &act_word(&[1i64], w), k);
    }
    out
}

/// Toric h-vector of the boundary of a polytope with cd-index `phi`. The zero
/// polynomial is read as degree 0.
pub fn toric_from_cd(phi: &CdPoly) -> ToricHVector {
    act_poly(phi, phi.homogeneous_degree().unwrap_or(0))
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn x_minus_one_pow(n: usize) -> Vec<i64> {
    (0..n).fold(vec![1], |acc, _| poly_mul(&acc, &[-1, 1]))
}

/// `h(∂G, x) = Σ_{F < G proper, F = ∅ allowed} g(∂F, x)(x-1)^{dim G - 1 - dim F}`,
/// evaluated bottom-up over all faces of the lattice.
pub fn toric_def(l: &FaceLattice) -> ToricHVector {
    let n = l.len();
    let mut g: Vec<Vec<i64>> = vec![Vec::new(); n];
    let mut h_top = vec![1i64];
    for f in l.ids() {
        let dim = l.face_dim(f);
        if dim < 0 {
            g[f.index()] = vec![1];
            continue;
        }
        let vf = l.vertices_of(f);
        let mut acc = vec![0i64; dim as usize + 1];
        for sub in l.ids() {
            let ds = l.face_dim(sub);
            if ds >= dim || !l.vertices_of(sub).is_subset(vf) {
                continue;
            }
            let term = poly_mul(&g[sub.index()], &x_minus_one_pow((dim - 1 - ds) as usize));
            add_into(&mut acc, &term, 1);
        }
        // ascending coefficients of x, while h_i multiplies x^{dim - i}
        acc.reverse();
        g[f.index()] = g_from_h(&acc);
        if f == l.top() {
            h_top = acc;
        }
    }
    h_top
}

/// `h(∂P*)` from the lattice of `P`.
pub fn toric_def_dual(l: &FaceLattice) -> ToricHVector {
    toric_def(&dual(l))
}

fn toric_contributions(p: &Polytope, s: &SweepDirection) -> Result<Vec<ToricHVector>, SweepError> {
    let d = p.dim();
    if d == 0 {
        return Ok(vec![vec![1]]);
    }
    (0..p.n_vertices())
        .map(|v| {
            let q = build_qv(p, s, v)?;
            let sub = toric_contributions(q.polytope(), &q.direction)?;
            let mut up = vec![0i64; d];
            for (i, hw) in sub.iter().enumerate() {
                if q.is_up(i) {
                    add_into(&mut up, hw, 1);
                }
            }
            let mut h = op_c(&up);
            if d >= 2 {
                if let Some(r) = build_rv(p, &q)? {
                    add_into(&mut h, &op_d(&toric_def_dual(r.lattice())), 1);
                }
            }
            Ok(h)
        })
        .collect()
}

/// Sweeps `P` to obtain the toric h-vector of the dual `P*`:
/// `h_v = h(∂R_v*)·d + Σ_{w above H_v} h_w(∂Q_v*)·c`.
pub fn toric_sweep(p: &Polytope, s: &SweepDirection) -> Result<SweepResult<ToricHVector>, SweepError> {
    let per_vertex = toric_contributions(p, s)?;
    let mut total = vec![0i64; p.dim() + 1];
    for h in &per_vertex {
        add_into(&mut total, h, 1);
    }
    Ok(SweepResult { order: s.order().to_vec(), per_vertex, total })
}

/// `h_v = ½[h(∂Q_v*)·c + h(∂R_v*)·(2d - c²)]`, exactly.
pub fn toric_symmetric(
    p: &Polytope,
    s: &SweepDirection,
) -> Result<SweepResult<Vec<Rational>, ToricHVector>, ToricError> {
    let d = p.dim();
    let to_q = |h: Vec<i64>| -> Vec<Rational> { h.into_iter().map(rat).collect() };
    let per_vertex: Vec<Vec<Rational>> = if d == 0 {
        vec![vec![rat(1)]]
    } else {
        let half = ratio(1, 2);
        (0..p.n_vertices())
            .map(|v| {
                let q = build_qv(p, s, v)?;
                let mut h = op_c(&to_q(toric_def_dual(&q.polytope().lattice)));
                if d >= 2 {
                    if let Some(r) = build_rv(p, &q)? {
                        let hr = to_q(toric_def_dual(r.lattice()));
                        let two_d = op_d(&hr);
                        let cc = op_c(&op_c(&hr));
                        for i in 0..h.len() {
                            h[i] = &h[i] + rat(2) * &two_d[i] - &cc[i];
                        }
                    }
                }
                Ok(h.into_iter().map(|x| x * &half).collect())
            })
            .collect::<Result<_, SweepError>>()?
    };
    let mut sum = vec![rat(0); d + 1];
    for h in &per_vertex {
        for (a, b) in sum.iter_mut().zip(h) {
            *a += b;
        }
    }
    let total = sum
        .iter()
        .map(|x| x.is_integer().then(|| i64::try_from(x.to_integer()).ok()).flatten())
        .collect::<Option<Vec<i64>>>()
        .ok_or_else(|| ToricError::NonIntegral(show(&sum.iter().map(format_rational).collect::<Vec<_>>())))?;
    Ok(SweepResult { order: s.order().to_vec(), per_vertex, total })
}

/// The words `1` and all words of degree `<= d` that start with `d`.
pub fn w_d_words(d: usize) -> Vec<CdWord> {
    let mut out = vec![CdWord::empty()];
    for k in 2..=d {
        out.extend(cd_words(k - 2).into_iter().map(|w| w.prefixed(Cd::D)));
    }
    out
}

/// `h^w = (1)Φ^w` for `w` in [`w_d_words`], where `Φ^w` collects the terms of
/// `Φ` ending in `w` with that suffix removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedToricH {
    pub d: usize,
    pub entries: BTreeMap<CdWord, ToricHVector>,
}

impl ExtendedToricH {
    pub fn get(&self, w: &CdWord) -> Option<&ToricHVector> {
        self.entries.get(w)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Object(
            self.entries
                .iter()
                .map(|(w, h)| (w.to_string(), serde_json::Value::from(h.clone())))
                .collect(),
        )
    }
}

/// Terms of `phi` ending in `w`, with the suffix removed.
pub fn suffix_part(phi: &CdPoly, w: &CdWord) -> CdPoly {
    let mut out = CdPoly::zero();
    for (u, &k) in phi.terms() {
        if let Some(pre) = u.strip_suffix(w) {
            out.add_term(pre, k);
        }
    }
    out
}

pub fn extended_toric(phi: &CdPoly, d: usize) -> ExtendedToricH {
    let entries = w_d_words(d)
        .into_iter()
        .map(|w| {
            let h = act_poly(&suffix_part(phi, &w), d - w.degree());
            (w, h)
        })
        .collect();
    ExtendedToricH { d, entries }
}

/// The unique `h` with `op_c(h) = s`, reading `g` off the first half of `s`.
pub fn invert_c<K: Num + Clone + std::fmt::Display>(s: &[K]) -> Result<Vec<K>, ToricError> {
    if s.len() < 2 {
        return Err(ToricError::NotInImage(show(s)));
    }
    let d = s.len() - 2;
    let mut h = vec![K::zero(); d + 1];
    let mut run = K::zero();
    for i in 0..=d / 2 {
        run = run + s[i].clone();
        h[i] = run.clone();
        h[d - i] = run.clone();
    }
    if op_c(&h).as_slice() != s {
        return Err(ToricError::NotInImage(show(s)));
    }
    Ok(h)
}

fn sub_vec(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Recovers `Φ` from `ĥ` by climbing degrees with
/// `h^{cw} = (h^w - h^{dw}·d)·c⁻¹`.
pub fn reconstruct_cd(hhat: &ExtendedToricH) -> Result<CdPoly, ToricError> {
    let d = hhat.d;
    let mut known: BTreeMap<CdWord, Vec<i64>> = hhat.entries.clone();
    let missing = |w: &CdWord| ToricError::NotInImage(format!("missing entry for {w}"));
    for k in 1..=d {
        for u in cd_words(k) {
            if u.letters()[0] == Cd::D {
                if !known.contains_key(&u) {
                    return Err(missing(&u));
                }
                continue;
            }
            let rest = CdWord::new(u.letters()[1..].to_vec());
            let base = known.get(&rest).ok_or_else(|| missing(&rest))?.clone();
            let dw = rest.prefixed(Cd::D);
            let s = if dw.degree() <= d {
                let hdw = known.get(&dw).ok_or_else(|| missing(&dw))?;
                sub_vec(&base, &op_d(hdw))
            } else {
                base
            };
            known.insert(u, invert_c(&s)?);
        }
    }
    let mut phi = CdPoly::zero();
    for u in cd_words(d) {
        let h = &known[&u];
        debug_assert_eq!(h.len(), 1);
        phi.add_term(u, h[0]);
    }
    Ok(phi)
}

/// True when `h` is a palindrome.
pub fn is_symmetric<K: PartialEq>(h: &[K]) -> bool {
    h.iter().eq(h.iter().rev())
}

/// Nondecreasing up to the middle.
pub fn is_unimodal(h: &[i64]) -> bool {
    h[..=h.len().saturating_sub(1) / 2].windows(2).all(|w| w[0] <= w[1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flagvec::{cd_index, reverse_words};
    use crate::polytope::{hull_lattice, make_crosspolytope, make_cube, make_polygon, make_simplex, pyramid, VRep};
    use crate::sweep::{choose_direction, simple_h_by_outdegree};
    use proptest::prelude::*;

    fn cd(s: &str) -> CdPoly {
        s.parse().unwrap()
    }

    fn w(s: &str) -> CdWord {
        s.parse().unwrap()
    }

    fn poly(v: VRep) -> Polytope {
        Polytope::new(v).unwrap()
    }

    fn square_pyramid() -> Polytope {
        let pts = ["0,0,0", "1,0,0", "0,1,0", "1,1,0", "1/2,1/2,1"];
        poly(VRep::new(3, pts.iter().map(|s| s.parse().unwrap()).collect()))
    }

    /// `h(x)c = (x-1)h(x) + 2g(x)` on ascending coefficients.
    fn op_c_poly(h: &[i64]) -> Vec<i64> {
        let g = g_from_h(h);
        let mut out = poly_mul(&[-1, 1], h);
        add_into(&mut out, &g, 2);
        out
    }

    /// `h(x)d = (x-1)g(x) + U_{<=m}[(1-x)g(x)]`, `m = ⌊(d+1)/2⌋`.
    fn op_d_poly(h: &[i64]) -> Vec<i64> {
        let d = h.len() - 1;
        let g = g_from_h(h);
        let mut out = vec![0i64; d + 3];
        add_into(&mut out, &poly_mul(&[-1, 1], &g), 1);
        let low = poly_mul(&[1, -1], &g);
        let m = (d + 1) / 2;
        add_into(&mut out, &low[..low.len().min(m + 1)], 1);
        out
    }

    #[test]
    fn g_examples() {
        assert_eq!(g_from_h(&[1i64, 3, 3, 1]), vec![1, 2]);
        assert_eq!(g_from_h(&[1i64]), vec![1]);
        assert_eq!(g_from_h(&[1i64, 3, 1]), vec![1, 2]);
    }

    #[test]
    fn operator_examples() {
        assert_eq!(op_c(&[1i64, 2, 1]), vec![1, 1, 1, 1]);
        assert_eq!(op_c(&[0i64, 2, 0]), vec![0, 2, 2, 0]);
        assert_eq!(op_c(&[1i64, 0, 1]), vec![1, -1, -1, 1]);
        assert_eq!(op_c(&[1i64, 1]), vec![1, 0, 1]);
        assert_eq!(op_d(&[1i64]), vec![0, 1, 0]);
        assert_eq!(op_d(&[1i64, 1]), vec![0, 0, 0, 0]);
        assert_eq!(op_d(&[1i64, 2, 1]), vec![0, 0, 1, 0, 0]);
    }

    #[test]
    fn word_actions() {
        assert_eq!(act_word(&[1i64], &w("c")), vec![1, 1]);
        assert_eq!(act_word(&[1i64], &w("dc")), vec![0, 1, 1, 0]);
        assert_eq!(act_word(&[1i64], &w("cd")), vec![0, 0, 0, 0]);
    }

    #[test]
    fn toric_from_cd_examples() {
        for n in 3..10 {
            let phi = cd(&format!("cc + {}*d", n - 2));
            assert_eq!(toric_from_cd(&phi), vec![1, n - 2, 1]);
        }
        assert_eq!(toric_from_cd(&cd("ccc + 6*dc + 4*cd")), vec![1, 5, 5, 1]);
        assert_eq!(toric_from_cd(&cd("ccc + 6*cd + 4*dc")), vec![1, 3, 3, 1]);
    }

    #[test]
    fn toric_def_examples() {
        let pent = hull_lattice(&make_polygon(5).unwrap()).unwrap();
        assert_eq!(toric_def(&pent), vec![1, 3, 1]);
        let oct = hull_lattice(&make_crosspolytope(3).unwrap()).unwrap();
        assert_eq!(toric_def(&oct), vec![1, 3, 3, 1]);
        let pyr = square_pyramid();
        let h = toric_def(&pyr.lattice);
        assert_eq!(h, toric_from_cd(&cd("ccc + 3*cd + 3*dc")));
        assert_eq!(h, vec![1, 2, 2, 1]);
        assert_eq!(toric_def(&hull_lattice(&make_simplex(0)).unwrap()), vec![1]);
        assert_eq!(toric_def(&hull_lattice(&make_cube(1)).unwrap()), vec![1, 1]);
    }

    #[test]
    fn simplicial_case_matches_outdegree_h() {
        for d in 2..=4 {
            let cross = hull_lattice(&make_crosspolytope(d).unwrap()).unwrap();
            let cube = poly(make_cube(d));
            let s = choose_direction(None, &cube.vrep).unwrap();
            assert_eq!(toric_def(&cross), simple_h_by_outdegree(&cube, &s).unwrap());
        }
    }

    #[test]
    fn toric_sweep_octahedron() {
        let oct = poly(make_crosspolytope(3).unwrap());
        let s = choose_direction(None, &oct.vrep).unwrap();
        let r = toric_sweep(&oct, &s).unwrap();
        let got: Vec<_> = r.in_order().map(|(_, h)| h.clone()).collect();
        let want = vec![vec![1, 1, 1, 1], vec![0, 2, 2, 0], vec![0, 1, 1, 0], vec![0, 1, 1, 0], vec![0; 4], vec![0; 4]];
        assert_eq!(got, want);
        assert_eq!(r.total, vec![1, 5, 5, 1]);
    }

    #[test]
    fn toric_sweep_small() {
        let pent = poly(make_polygon(5).unwrap());
        let s = choose_direction(None, &pent.vrep).unwrap();
        let r = toric_sweep(&pent, &s).unwrap();
        let got: Vec<_> = r.in_order().map(|(_, h)| h.clone()).collect();
        assert_eq!(got, vec![vec![1, 0, 1], vec![0, 1, 0], vec![0, 1, 0], vec![0, 1, 0], vec![0, 0, 0]]);
        assert_eq!(r.total, vec![1, 3, 1]);
        let seg = poly(make_cube(1));
        let s = choose_direction(None, &seg.vrep).unwrap();
        assert_eq!(toric_sweep(&seg, &s).unwrap().total, vec![1, 1]);
    }

    #[test]
    fn toric_symmetric_octahedron() {
        let oct = poly(make_crosspolytope(3).unwrap());
        let s = choose_direction(None, &oct.vrep).unwrap();
        let r = toric_symmetric(&oct, &s).unwrap();
        let got: Vec<Vec<Rational>> = r.in_order().map(|(_, h)| h.clone()).collect();
        let half: Vec<Rational> = vec![ratio(1, 2); 4];
        let mid: Vec<Rational> = [0, 1, 1, 0].map(rat).to_vec();
        assert_eq!(got[0], half);
        assert_eq!(got[5], half);
        assert!(got[1..5].iter().all(|h| *h == mid));
        assert_eq!(r.total, vec![1, 5, 5, 1]);
    }

    #[test]
    fn four_routes_agree() {
        for v in [
            make_polygon(6).unwrap(),
            make_crosspolytope(3).unwrap(),
            make_cube(3),
            make_simplex(4),
            pyramid(&make_cube(3)),
        ] {
            let p = poly(v);
            let phi = cd_index(&p.lattice).unwrap();
            assert_eq!(toric_def(&p.lattice), toric_from_cd(&phi));
            let dual_h = toric_from_cd(&reverse_words(&phi));
            assert_eq!(toric_def_dual(&p.lattice), dual_h);
            let s = choose_direction(None, &p.vrep).unwrap();
            assert_eq!(toric_sweep(&p, &s).unwrap().total, dual_h);
            assert_eq!(toric_symmetric(&p, &s).unwrap().total, dual_h);
        }
    }

    #[test]
    fn extended_examples() {
        let oct = cd("ccc + 6*cd + 4*dc");
        let e = extended_toric(&oct, 3);
        let want: BTreeMap<CdWord, Vec<i64>> =
            [(w("1"), vec![1, 3, 3, 1]), (w("d"), vec![6, 6]), (w("dc"), vec![4])].into_iter().collect();
        assert_eq!(e.entries, want);
        assert_eq!(suffix_part(&oct, &w("c")), cd("cc + 4*d"));
        assert_eq!(act_poly(&suffix_part(&oct, &w("c")), 2), vec![1, 4, 1]);
        assert_eq!(reconstruct_cd(&e).unwrap(), oct);

        let pent = extended_toric(&cd("cc + 3*d"), 2);
        assert_eq!(pent.entries.len(), 2);
        assert_eq!(pent.get(&w("d")), Some(&vec![3]));
        assert_eq!(reconstruct_cd(&pent).unwrap(), cd("cc + 3*d"));

        let pyr = cd("ccc + 3*cd + 3*dc");
        assert_eq!(reconstruct_cd(&extended_toric(&pyr, 3)).unwrap(), pyr);

        for d in 1..=5 {
            let simplex = hull_lattice(&make_simplex(d)).unwrap();
            let e = extended_toric(&cd_index(&simplex).unwrap(), d);
            assert_eq!(e.get(&CdWord::empty()), Some(&vec![1; d + 1]));
            assert_eq!(toric_def(&simplex), vec![1; d + 1]);
        }
    }

    #[test]
    fn w_d_enumeration() {
        let names: Vec<String> = w_d_words(4).iter().map(ToString::to_string).collect();
        assert_eq!(names, ["1", "d", "dc", "dcc", "dd"]);
    }

    #[test]
    fn invert_c_examples() {
        assert_eq!(invert_c(&[1i64, 0, 1]).unwrap(), vec![1, 1]);
        assert_eq!(invert_c(&[1i64, 1, 1, 1]).unwrap(), vec![1, 2, 1]);
        assert_eq!(invert_c(&[1i64, 1]).unwrap(), vec![1]);
        assert!(matches!(invert_c(&[1i64, 2, 1]), Err(ToricError::NotInImage(_))));
        assert!(matches!(invert_c(&[1i64, 2]), Err(ToricError::NotInImage(_))));
    }

    #[test]
    fn reconstruct_rejects_inconsistent_input() {
        let mut e = extended_toric(&cd("ccc + 6*cd + 4*dc"), 3);
        e.entries.insert(w("1"), vec![1, 3, 4, 1]);
        assert!(reconstruct_cd(&e).is_err());
    }

    fn symmetric_vec() -> impl Strategy<Value = Vec<i64>> {
        proptest::collection::vec(-20i64..20, 1..=5).prop_flat_map(|half| {
            prop::bool::ANY.prop_map(move |odd_len| {
                let mut v = half.clone();
                let tail: Vec<i64> = if odd_len { half[..half.len() - 1].iter().rev().copied().collect() } else { half.iter().rev().copied().collect() };
                v.extend(tail);
                v
            })
        })
    }

    proptest! {
        #[test]
        fn op_c_matches_polynomial_form(h in symmetric_vec()) {
            prop_assert_eq!(op_c(&h), op_c_poly(&h));
        }

        #[test]
        fn op_d_matches_polynomial_form(h in symmetric_vec()) {
            prop_assert_eq!(op_d(&h), op_d_poly(&h));
        }

        #[test]
        fn invert_c_inverts(h in symmetric_vec()) {
            prop_assert_eq!(invert_c(&op_c(&h)).unwrap(), h);
        }
    }
}
