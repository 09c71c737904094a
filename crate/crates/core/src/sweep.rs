//! Sweeping a polytope by a generic linear functional: vertex figures `Q_v`,
//! sections `R_v`, and the per-vertex cd-index contributions.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactnum::{rat, ratio, QVector, Rational};
use crate::flagvec::{cd_index, Cd, CdPoly, CdPolyQ, FlagError};
use crate::polytope::{FaceId, FaceLattice, Polytope, PolytopeError, VRep, VertexSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SweepError {
    #[error("direction {0} is not generic: two vertices share a height")]
    NotGeneric(String),
    #[error("direction has length {found}, expected {expected}")]
    DirectionLength { found: usize, expected: usize },
    #[error("polytope is not simple at vertex {0}")]
    NotSimple(usize),
    #[error("no support normal with distinct slopes found at vertex {0}")]
    NoSupportNormal(usize),
    #[error("symmetric sweep total has non-integral coefficients: {0}")]
    NonIntegral(String),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Flag(#[from] FlagError),
}

/// A linear functional `x ↦ p·x` whose values on the vertices are pairwise
/// distinct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepDirection {
    p: QVector,
    heights: Vec<Rational>,
    order: Vec<usize>,
    rank: Vec<usize>,
}

impl SweepDirection {
    pub fn new(p: QVector, v: &VRep) -> Result<Self, SweepError> {
        if p.len() != v.dim {
            return Err(SweepError::DirectionLength { found: p.len(), expected: v.dim });
        }
        let heights: Vec<Rational> = v.vertices.iter().map(|x| p.dot_unchecked(x)).collect();
        let mut order: Vec<usize> = (0..heights.len()).collect();
        order.sort_by(|&i, &j| heights[i].cmp(&heights[j]));
        if order.windows(2).any(|w| heights[w[0]] == heights[w[1]]) {
            return Err(SweepError::NotGeneric(p.to_string()));
        }
        let mut rank = vec![0; order.len()];
        for (r, &i) in order.iter().enumerate() {
            rank[i] = r;
        }
        Ok(SweepDirection { p, heights, order, rank })
    }

    pub fn p(&self) -> &QVector {
        &self.p
    }

    pub fn height(&self, v: usize) -> &Rational {
        &self.heights[v]
    }

    pub fn heights(&self) -> &[Rational] {
        &self.heights
    }

    /// Vertex indices from lowest to highest.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Position of vertex `v` in [`Self::order`].
    pub fn rank(&self, v: usize) -> usize {
        self.rank[v]
    }

    /// Height-minimal vertex of a nonempty vertex set.
    pub fn min_of(&self, s: VertexSet) -> usize {
        s.iter().min_by_key(|&i| self.rank[i]).expect("nonempty vertex set")
    }

    pub fn max_of(&self, s: VertexSet) -> usize {
        s.iter().max_by_key(|&i| self.rank[i]).expect("nonempty vertex set")
    }
}

/// The deterministic fallback `(1, t, t², ...)`.
pub fn ladder_direction(d: usize, t: i64) -> QVector {
    (0..d).map(|i| rat(t.pow(i as u32))).collect()
}

/// Accepts `p0` when generic; without `p0`, walks the ladder
/// `(1, t, ..., t^{d-1})` for `t = 2, 3, ...`.
pub fn choose_direction(p0: Option<&QVector>, v: &VRep) -> Result<SweepDirection, SweepError> {
    if let Some(p) = p0 {
        return SweepDirection::new(p.clone(), v);
    }
    // Each pair of vertices rules out at most d-1 values of t.
    let limit = 2 + (v.dim as i64) * (v.vertices.len() as i64).pow(2);
    for t in 2..=limit {
        if let Ok(s) = SweepDirection::new(ladder_direction(v.dim, t), v) {
            return Ok(s);
        }
    }
    Err(SweepError::NotGeneric("ladder exhausted".into()))
}

fn up_degree(p: &Polytope, s: &SweepDirection, v: usize) -> usize {
    p.lattice.neighbors(v).iter().filter(|(w, _)| s.height(*w) > s.height(v)).count()
}

fn check_simple(p: &Polytope) -> Result<(), SweepError> {
    for v in 0..p.n_vertices() {
        if p.lattice.neighbors(v).len() != p.dim() {
            return Err(SweepError::NotSimple(v));
        }
    }
    Ok(())
}

/// For a simple polytope, `h_i` = number of vertices with `i` upward edges.
pub fn simple_h_by_outdegree(p: &Polytope, s: &SweepDirection) -> Result<Vec<i64>, SweepError> {
    check_simple(p)?;
    let mut h = vec![0i64; p.dim() + 1];
    for v in 0..p.n_vertices() {
        h[up_degree(p, s, v)] += 1;
    }
    Ok(h)
}

/// Assigns every nonempty face to its lowest vertex. Indexed by vertex.
pub fn min_vertex_partition(p: &Polytope, s: &SweepDirection) -> Result<Vec<Vec<FaceId>>, SweepError> {
    check_simple(p)?;
    let mut blocks = vec![Vec::new(); p.n_vertices()];
    for f in p.lattice.ids().skip(1) {
        blocks[s.min_of(p.lattice.vertices_of(f))].push(f);
    }
    Ok(blocks)
}

/// A vector `a` with `a·w < a·v` for all vertices `w ≠ v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportNormal {
    pub v: usize,
    pub a: QVector,
}

impl SupportNormal {
    /// Rate at which `p` grows along the edge `vw` per unit of depth below
    /// the supporting plane.
    pub fn slope(&self, p: &Polytope, s: &SweepDirection, w: usize) -> Rational {
        let u = p.vertex(w) - p.vertex(self.v);
        s.p().dot_unchecked(&u) / -self.a.dot_unchecked(&u)
    }
}

/// Sum of the outward facet normals at `vi`, reweighted by `1, t, t², ...`
/// when two edges at `vi` would get the same slope.
pub fn support_normal(p: &Polytope, s: &SweepDirection, vi: usize) -> Result<SupportNormal, SweepError> {
    let normals: Vec<&QVector> = p.facet_planes_at(vi).into_iter().map(|h| h.normal()).collect();
    let nbrs = p.lattice.neighbors(vi);
    for t in 1..=64i64 {
        let mut a = QVector::zeros(p.dim());
        let mut w = Rational::one();
        for n in &normals {
            a = a.add(&n.scaled(&w));
            w *= rat(t);
        }
        let sn = SupportNormal { v: vi, a };
        let mut slopes: Vec<Rational> = nbrs.iter().map(|(w, _)| sn.slope(p, s, *w)).collect();
        slopes.sort();
        if slopes.windows(2).all(|x| x[0] != x[1]) {
            debug_assert!((0..p.n_vertices())
                .filter(|&w| w != vi)
                .all(|w| sn.a.dot_unchecked(p.vertex(w)) < sn.a.dot_unchecked(p.vertex(vi))));
            return Ok(sn);
        }
    }
    Err(SweepError::NoSupportNormal(vi))
}

/// A lower-dimensional polytope attached to a face of a parent, with the map
/// from its faces to faces of the parent.
#[derive(Clone, Debug)]
pub struct SubPolytope {
    pub polytope: Polytope,
    /// Indexed by sub-polytope face id.
    pub face_map: Vec<FaceId>,
}

impl SubPolytope {
    pub fn lattice(&self) -> &FaceLattice {
        &self.polytope.lattice
    }

    pub fn map(&self, f: FaceId) -> FaceId {
        self.face_map[f.index()]
    }
}

/// The facet `Q_v` created by cutting off vertex `v`, in its own
/// coordinates, with the direction induced by the sweep.
#[derive(Clone, Debug)]
pub struct VertexFigure {
    pub v: usize,
    pub normal: SupportNormal,
    /// `Q_v`, with the empty face mapped to `{v}` and the full figure to `P`.
    pub sub: SubPolytope,
    /// Q-vertex `i` lies on the edge from `v` to `edges[i].0`.
    pub edges: Vec<(usize, FaceId)>,
    /// Restriction of the sweep functional, up to an additive constant.
    pub direction: SweepDirection,
    /// Height of the sweep hyperplane through `v` in the induced direction.
    pub pivot: Rational,
}

impl VertexFigure {
    /// Whether Q-vertex `i` lies above the hyperplane through `v`.
    pub fn is_up(&self, i: usize) -> bool {
        *self.direction.height(i) > self.pivot
    }

    pub fn polytope(&self) -> &Polytope {
        &self.sub.polytope
    }
}

/// Smallest face of `l` containing `s`.
pub(crate) fn smallest_face_containing(l: &FaceLattice, s: VertexSet) -> FaceId {
    l.ids()
        .filter(|&f| s.is_subset(l.vertices_of(f)))
        .min_by_key(|&f| l.vertices_of(f).len())
        .expect("the top face contains everything")
}

fn first_nonzero(x: &QVector) -> usize {
    x.iter().position(|c| !c.is_zero()).expect("nonzero vector")
}

pub fn build_qv(p: &Polytope, s: &SweepDirection, vi: usize) -> Result<VertexFigure, SweepError> {
    let normal = support_normal(p, s, vi)?;
    build_qv_with(p, s, vi, normal)
}

pub fn build_qv_with(
    p: &Polytope,
    s: &SweepDirection,
    vi: usize,
    normal: SupportNormal,
) -> Result<VertexFigure, SweepError> {
    let d = p.dim();
    assert!(d >= 1, "vertex figures need d >= 1");
    let a = &normal.a;
    let v = p.vertex(vi);
    let edges = p.lattice.neighbors(vi);
    let k = first_nonzero(a);

    let points: Vec<QVector> = edges
        .iter()
        .map(|&(w, _)| {
            let u = p.vertex(w) - v;
            let depth = -a.dot_unchecked(&u);
            v.add(&u.scaled(&depth.recip())).without(k)
        })
        .collect();
    let qpoly = Polytope::new(VRep::new(d - 1, points))?;

    let face_map = qpoly
        .lattice
        .faces()
        .iter()
        .map(|f| {
            let mut set = VertexSet::singleton(vi);
            for i in f.vertices.iter() {
                set.insert(edges[i].0);
            }
            smallest_face_containing(&p.lattice, set)
        })
        .collect();

    // On the plane a·x = a·v - 1, x_k is determined by the other
    // coordinates y, and p·x = p'·y + kappa.
    let pk_over_ak = &s.p()[k] / &a[k];
    let p_induced: QVector = s
        .p()
        .without(k)
        .iter()
        .zip(a.without(k).iter())
        .map(|(pj, aj)| pj - &pk_over_ak * aj)
        .collect();
    let kappa = &pk_over_ak * (a.dot_unchecked(v) - Rational::one());
    let pivot = s.height(vi) - kappa;
    let direction = SweepDirection::new(p_induced, &qpoly.vrep)?;

    Ok(VertexFigure {
        v: vi,
        normal,
        sub: SubPolytope { polytope: qpoly, face_map },
        edges,
        direction,
        pivot,
    })
}

/// Up / middle / lower status of a face through a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FaceClass {
    Upper,
    Middle,
    Lower,
}

pub fn classify_faces_at_v(p: &Polytope, s: &SweepDirection, vi: usize, f: FaceId) -> FaceClass {
    let verts = p.lattice.vertices_of(f);
    debug_assert!(verts.contains(vi) && verts.len() >= 2);
    if s.min_of(verts) == vi {
        FaceClass::Upper
    } else if s.max_of(verts) == vi {
        FaceClass::Lower
    } else {
        FaceClass::Middle
    }
}

/// The section `R_v = Q_v ∩ H_v`, or `None` at the global minimum and
/// maximum. Faces map to faces of `P`; the empty face maps to `{v}`.
pub fn build_rv(p: &Polytope, q: &VertexFigure) -> Result<Option<SubPolytope>, SweepError> {
    let qp = q.polytope();
    let ql = &qp.lattice;
    if qp.dim() == 0 {
        return Ok(None);
    }
    let crossing: Vec<(FaceId, QVector)> = ql
        .faces_of_dim(1)
        .iter()
        .filter_map(|&e| {
            let ends = ql.vertices_of(e).to_vec();
            let (lo, hi) = if q.direction.height(ends[0]) < q.direction.height(ends[1]) {
                (ends[0], ends[1])
            } else {
                (ends[1], ends[0])
            };
            let (hl, hh) = (q.direction.height(lo), q.direction.height(hi));
            if !(hl < &q.pivot && &q.pivot < hh) {
                return None;
            }
            let t = (&q.pivot - hl) / (hh - hl);
            let (yl, yh) = (qp.vertex(lo), qp.vertex(hi));
            Some((e, yl.add(&(yh - yl).scaled(&t))))
        })
        .collect();
    if crossing.is_empty() {
        return Ok(None);
    }
    let k = first_nonzero(q.direction.p());
    let points = crossing.iter().map(|(_, y)| y.without(k)).collect();
    let rpoly = Polytope::new(VRep::new(qp.dim() - 1, points))?;
    let face_map = rpoly
        .lattice
        .faces()
        .iter()
        .map(|f| {
            let ends = f
                .vertices
                .iter()
                .fold(VertexSet::EMPTY, |acc, i| acc.union(ql.vertices_of(crossing[i].0)));
            q.sub.map(smallest_face_containing(ql, ends))
        })
        .collect();
    debug_assert!(p.lattice.vertices_of(q.sub.map(ql.bottom())) == VertexSet::singleton(q.v));
    Ok(Some(SubPolytope { polytope: rpoly, face_map }))
}

/// Per-vertex values of a sweep, indexed by vertex, plus their sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepResult<T, U = T> {
    pub order: Vec<usize>,
    pub per_vertex: Vec<T>,
    pub total: U,
}

impl<T, U> SweepResult<T, U> {
    /// `(vertex, value)` pairs from the lowest vertex to the highest.
    pub fn in_order(&self) -> impl Iterator<Item = (usize, &T)> {
        self.order.iter().map(|&v| (v, &self.per_vertex[v]))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SweepOptions {
    /// Compute `Φ(R_v)` by a recursive sweep in a fresh direction instead of
    /// the flag route.
    pub deep: bool,
}

fn section_cd(r: &SubPolytope, opts: SweepOptions) -> Result<CdPoly, SweepError> {
    if opts.deep {
        let s = choose_direction(None, &r.polytope.vrep)?;
        Ok(cd_contributions(&r.polytope, &s, opts)?.into_iter().sum())
    } else {
        Ok(cd_index(r.lattice())?)
    }
}

fn cd_contributions(p: &Polytope, s: &SweepDirection, opts: SweepOptions) -> Result<Vec<CdPoly>, SweepError> {
    if p.dim() == 0 {
        return Ok(vec![CdPoly::one()]);
    }
    (0..p.n_vertices())
        .map(|v| {
            let q = build_qv(p, s, v)?;
            let sub = cd_contributions(q.polytope(), &q.direction, opts)?;
            let up: CdPoly = (0..sub.len()).filter(|&i| q.is_up(i)).map(|i| sub[i].clone()).sum();
            let mut phi = up.prefixed(Cd::C);
            if p.dim() >= 2 {
                if let Some(r) = build_rv(p, &q)? {
                    phi += &section_cd(&r, opts)?.prefixed(Cd::D);
                }
            }
            Ok(phi)
        })
        .collect()
}

/// `Φ_v = d·Φ(R_v) + Σ_{w above H_v} c·Φ_w(Q_v)`.
pub fn cd_sweep(p: &Polytope, s: &SweepDirection, opts: SweepOptions) -> Result<SweepResult<CdPoly>, SweepError> {
    let per_vertex = cd_contributions(p, s, opts)?;
    let total = per_vertex.iter().cloned().sum();
    Ok(SweepResult { order: s.order().to_vec(), per_vertex, total })
}

/// `Φ_v = ½[c·Φ(Q_v) + (2d - c²)·Φ(R_v)]`, with exact half-integers.
pub fn cd_symmetric(p: &Polytope, s: &SweepDirection) -> Result<SweepResult<CdPolyQ, CdPoly>, SweepError> {
    let half = ratio(1, 2);
    let per_vertex: Vec<CdPolyQ> = if p.dim() == 0 {
        vec![CdPolyQ::one()]
    } else {
        (0..p.n_vertices())
            .map(|v| {
                let q = build_qv(p, s, v)?;
                let mut phi = cd_index(&q.polytope().lattice)?.prefixed(Cd::C).to_rational();
                if p.dim() >= 2 {
                    if let Some(r) = build_rv(p, &q)? {
                        let phr = cd_index(r.lattice())?.to_rational();
                        phi += &phr.prefixed(Cd::D).scale(&rat(2));
                        phi = &phi - &phr.prefixed(Cd::C).prefixed(Cd::C);
                    }
                }
                Ok(phi.scale(&half))
            })
            .collect::<Result<_, SweepError>>()?
    };
    let sum: CdPolyQ = per_vertex.iter().cloned().sum();
    let total = sum.to_integer().ok_or_else(|| SweepError::NonIntegral(sum.to_string()))?;
    Ok(SweepResult { order: s.order().to_vec(), per_vertex, total })
}

/// Whether every coefficient is a nonnegative multiple of ½.
pub fn is_nonneg_half_integral(phi: &CdPolyQ) -> bool {
    phi.terms().all(|(_, c)| !c.is_negative() && (c * rat(2)).is_integer())
}
