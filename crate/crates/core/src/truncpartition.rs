//! The partition of the complete truncation `T(P)` into blocks, one cd-word
//! per block.
//!
//! Faces of `T(P)` are chains of proper nonempty faces of `P`; the empty
//! chain is `T(P)` itself and a chain `C` has dimension `d - |C|`. Blocks
//! are built from pre-blocks `{C, τ(C), β(C)}` and merged along recursive
//! partitions of the vertex figures `Q_v` and sections `R_v`.

use std::collections::HashMap;

use thiserror::Error;

use crate::flagvec::{ab_from_cd, ab_index, cd_index, flag_h, Cd, CdPoly, CdWord, FlagVector, SubsetS};
use crate::polytope::{FaceId, FaceLattice, Polytope};
use crate::sweep::{build_qv, build_rv, choose_direction, SubPolytope, SweepDirection, SweepError, VertexFigure};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error(transparent)]
    Sweep(#[from] SweepError),
    #[error("partition construction failed: {0}")]
    Inconsistent(String),
}

/// A face of `T(P)`: a strictly increasing chain of proper nonempty faces.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChainFace {
    pub chain: Vec<FaceId>,
    pub sigma: SubsetS,
}

impl ChainFace {
    pub fn new(l: &FaceLattice, chain: Vec<FaceId>) -> Self {
        let sigma = SubsetS(chain.iter().fold(0, |m, &f| m | 1 << l.face_dim(f)));
        ChainFace { chain, sigma }
    }

    /// Dimension as a face of `T(P)`.
    pub fn dim(&self, d: usize) -> usize {
        d - self.chain.len()
    }

    pub fn to_json(&self, l: &FaceLattice) -> serde_json::Value {
        self.chain.iter().map(|&f| l.vertices_of(f).to_vec()).collect::<Vec<_>>().into()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub faces: Vec<ChainFace>,
    pub word: CdWord,
    pub owner: usize,
}

impl Block {
    /// `3^{#c} · 4^{#d}`.
    pub fn expected_size(word: &CdWord) -> usize {
        3usize.pow(word.count(Cd::C) as u32) * 4usize.pow(word.count(Cd::D) as u32)
    }

    pub fn to_json(&self, l: &FaceLattice) -> serde_json::Value {
        serde_json::json!({
            "word": self.word.to_string(),
            "owner": self.owner,
            "faces": self.faces.iter().map(|f| f.to_json(l)).collect::<Vec<_>>(),
        })
    }
}

/// All chains of proper nonempty faces, the empty chain first.
pub fn enumerate_chains(l: &FaceLattice) -> Vec<ChainFace> {
    let proper: Vec<FaceId> = l.ids().filter(|&f| f != l.bottom() && f != l.top()).collect();
    let mut out = vec![ChainFace::new(l, Vec::new())];
    let mut stack: Vec<Vec<FaceId>> = proper.iter().map(|&f| vec![f]).collect();
    while let Some(chain) = stack.pop() {
        let last = *chain.last().expect("nonempty");
        let (vl, dl) = (l.vertices_of(last), l.face_dim(last));
        for &g in &proper {
            if l.face_dim(g) > dl && vl.is_subset(l.vertices_of(g)) {
                let mut next = chain.clone();
                next.push(g);
                stack.push(next);
            }
        }
        out.push(ChainFace::new(l, chain));
    }
    out
}

fn first_face(l: &FaceLattice, chain: &[FaceId]) -> FaceId {
    chain.first().copied().unwrap_or_else(|| l.top())
}

/// `τ(C)`: prepends the highest vertex of the chain's smallest face. Only
/// meaningful for chains without a vertex.
pub fn top_face(l: &FaceLattice, s: &SweepDirection, c: &ChainFace) -> ChainFace {
    let v = s.max_of(l.vertices_of(first_face(l, &c.chain)));
    prepend(l, l.vertex_face(v), &c.chain)
}

/// `β(C)`: prepends the lowest vertex of the chain's smallest face.
pub fn bottom_face(l: &FaceLattice, s: &SweepDirection, c: &ChainFace) -> ChainFace {
    let v = s.min_of(l.vertices_of(first_face(l, &c.chain)));
    prepend(l, l.vertex_face(v), &c.chain)
}

fn prepend(l: &FaceLattice, f: FaceId, chain: &[FaceId]) -> ChainFace {
    let mut v = Vec::with_capacity(chain.len() + 1);
    v.push(f);
    v.extend_from_slice(chain);
    ChainFace::new(l, v)
}

/// Maps a chain of a sub-polytope to the chain of `P` through vertex `v`.
fn lift(l: &FaceLattice, v: usize, sub: &SubPolytope, chain: &ChainFace) -> ChainFace {
    prepend(l, l.vertex_face(v), &chain.chain.iter().map(|&f| sub.map(f)).collect::<Vec<_>>())
}

struct Builder {
    pre: Vec<Vec<ChainFace>>,
    home: HashMap<Vec<FaceId>, usize>,
    merged_into: Vec<Option<usize>>,
    blocks: Vec<Block>,
}

impl Builder {
    fn insert(&mut self, pb: usize, f: ChainFace) {
        self.home.insert(f.chain.clone(), pb);
        self.pre[pb].push(f);
    }

    fn merge(&mut self, chains: impl Iterator<Item = ChainFace>, word: CdWord, owner: usize) -> Result<(), PartitionError> {
        let id = self.blocks.len();
        let mut faces = Vec::new();
        for c in chains {
            let &pb = self.home.get(&c.chain).ok_or_else(|| {
                PartitionError::Inconsistent(format!("chain {:?} has no pre-block", c.chain))
            })?;
            match self.merged_into[pb] {
                Some(b) if b == id => {}
                Some(b) => {
                    return Err(PartitionError::Inconsistent(format!(
                        "pre-block {pb} merged twice (blocks {b} and {id})"
                    )))
                }
                None => {
                    self.merged_into[pb] = Some(id);
                    faces.extend(self.pre[pb].iter().cloned());
                }
            }
        }
        faces.sort();
        self.blocks.push(Block { faces, word, owner });
        Ok(())
    }
}

/// The partition of `T(P)` for the sweep `s`. Blocks are listed by owner in
/// sweep order; at each owner the `c`-blocks come before the `d`-blocks.
pub fn build_partition(p: &Polytope, s: &SweepDirection) -> Result<Vec<Block>, PartitionError> {
    let l = &p.lattice;
    let d = p.dim();
    if d == 0 {
        return Ok(vec![Block { faces: vec![ChainFace::new(l, Vec::new())], word: CdWord::empty(), owner: 0 }]);
    }
    let chains = enumerate_chains(l);
    let mut b = Builder { pre: Vec::new(), home: HashMap::new(), merged_into: Vec::new(), blocks: Vec::new() };

    // Step 1: pre-blocks {C, τ(C), β(C)} for chains without a vertex.
    for c in chains.iter().filter(|c| !c.sigma.contains(0)) {
        let pb = b.pre.len();
        b.pre.push(Vec::new());
        b.merged_into.push(None);
        b.insert(pb, c.clone());
        b.insert(pb, top_face(l, s, c));
        b.insert(pb, bottom_face(l, s, c));
    }

    let figures: Vec<VertexFigure> = (0..p.n_vertices()).map(|v| build_qv(p, s, v)).collect::<Result<_, _>>()?;

    // Step 2: a middle chain [v, F, ...] joins the pre-block of its top face
    // [v, e, F, ...], where e is the steepest edge of F at v.
    for c in chains.iter().filter(|c| c.sigma.contains(0)) {
        let v = l.vertices_of(c.chain[0]).iter().next().expect("vertex");
        let f = c.chain.get(1).copied().unwrap_or_else(|| l.top());
        let vf = l.vertices_of(f);
        if s.min_of(vf) == v || s.max_of(vf) == v {
            continue;
        }
        let q = &figures[v];
        let steepest = (0..q.edges.len())
            .filter(|&i| vf.contains(q.edges[i].0))
            .max_by(|&i, &j| q.direction.height(i).cmp(q.direction.height(j)))
            .expect("a middle face has edges at v");
        let (w, e) = q.edges[steepest];
        if s.height(w) < s.height(v) {
            return Err(PartitionError::Inconsistent(format!("steepest edge at {v} in {vf:?} descends")));
        }
        let mut tau = c.chain.clone();
        tau.insert(1, e);
        let &pb = b.home.get(&tau).ok_or_else(|| PartitionError::Inconsistent(format!("no pre-block for {tau:?}")))?;
        b.insert(pb, c.clone());
    }

    // Steps 3 and 4, vertex by vertex.
    for &v in s.order() {
        let q = &figures[v];
        for qb in build_partition(q.polytope(), &q.direction)? {
            if q.is_up(qb.owner) {
                let lifted: Vec<ChainFace> = qb.faces.iter().map(|c| lift(l, v, &q.sub, c)).collect();
                b.merge(lifted.into_iter(), qb.word.prefixed(Cd::C), v)?;
            }
        }
        if d >= 2 {
            if let Some(r) = build_rv(p, q)? {
                let rs = choose_direction(None, &r.polytope.vrep)?;
                for rb in build_partition(&r.polytope, &rs)? {
                    let lifted: Vec<ChainFace> = rb.faces.iter().map(|c| lift(l, v, &r, c)).collect();
                    b.merge(lifted.into_iter(), rb.word.prefixed(Cd::D), v)?;
                }
            }
        }
    }

    if let Some(pb) = b.merged_into.iter().position(Option::is_none) {
        return Err(PartitionError::Inconsistent(format!("pre-block {pb} ({:?}) never merged", b.pre[pb][0].chain)));
    }
    Ok(b.blocks)
}

/// Outcome of the four partition checks.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PartitionReport {
    pub cover_disjoint: bool,
    pub size_law: bool,
    pub word_sum: bool,
    pub flag_test: bool,
    pub failures: Vec<String>,
}

impl PartitionReport {
    pub fn passed(&self) -> bool {
        self.cover_disjoint && self.size_law && self.word_sum && self.flag_test
    }
}

/// Checks disjoint cover, block sizes `3^{#c}4^{#d}`, that the block words
/// sum to the flag-route cd-index, and that each block's own flag h-vector
/// expands to its word.
pub fn verify_partition(l: &FaceLattice, blocks: &[Block], chains: &[ChainFace]) -> PartitionReport {
    let mut r = PartitionReport { cover_disjoint: true, size_law: true, word_sum: true, flag_test: true, failures: Vec::new() };
    let d = l.dim();

    let mut seen: HashMap<&ChainFace, usize> = HashMap::new();
    for (i, blk) in blocks.iter().enumerate() {
        for f in &blk.faces {
            if let Some(j) = seen.insert(f, i) {
                r.cover_disjoint = false;
                r.failures.push(format!("chain {:?} in blocks {j} and {i}", f.chain));
            }
        }
    }
    if seen.len() != chains.len() || chains.iter().any(|c| !seen.contains_key(c)) {
        r.cover_disjoint = false;
        r.failures.push(format!("blocks hold {} distinct chains, expected {}", seen.len(), chains.len()));
    }

    for (i, blk) in blocks.iter().enumerate() {
        if blk.faces.len() != Block::expected_size(&blk.word) {
            r.size_law = false;
            r.failures.push(format!("block {i} ({}) has {} faces", blk.word, blk.faces.len()));
        }
    }

    let mut sum = CdPoly::zero();
    for blk in blocks {
        sum.add_term(blk.word.clone(), 1);
    }
    match cd_index(l) {
        Ok(phi) if phi == sum => {}
        Ok(phi) => {
            r.word_sum = false;
            r.failures.push(format!("block words sum to {sum}, cd-index is {phi}"));
        }
        Err(e) => {
            r.word_sum = false;
            r.failures.push(e.to_string());
        }
    }

    for (i, blk) in blocks.iter().enumerate() {
        let mut f = vec![0i64; 1 << d];
        for c in &blk.faces {
            f[c.sigma.0 as usize] += 1;
        }
        let h = flag_h(&FlagVector::new(d, f));
        let got = ab_index(&h);
        let want = ab_from_cd(&CdPoly::monomial(blk.word.clone(), 1));
        if got != want {
            r.flag_test = false;
            r.failures.push(format!("block {i} ({}) has flag ab-polynomial {got}", blk.word));
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::QVector;
    use crate::polytope::{make_crosspolytope, make_cube, make_polygon, make_simplex, prism, VRep};
    use crate::sweep::{cd_sweep, ladder_direction, SweepOptions};

    fn poly(v: VRep) -> Polytope {
        Polytope::new(v).unwrap()
    }

    fn qv(s: &str) -> QVector {
        s.parse().unwrap()
    }

    fn square_pyramid() -> Polytope {
        let pts = ["0,0,0", "1,0,0", "0,1,0", "1,1,0", "1/2,1/2,1"];
        poly(VRep::new(3, pts.iter().map(|s| qv(s)).collect()))
    }

    fn words(blocks: &[Block]) -> Vec<String> {
        blocks.iter().map(|b| b.word.to_string()).collect()
    }

    #[test]
    fn chain_counts() {
        let pent = poly(make_polygon(5).unwrap());
        assert_eq!(enumerate_chains(&pent.lattice).len(), 21);
        assert_eq!(enumerate_chains(&square_pyramid().lattice).len(), 99);
        assert_eq!(enumerate_chains(&poly(make_cube(1)).lattice).len(), 3);
    }

    #[test]
    fn top_and_bottom_faces() {
        let pent = poly(make_polygon(5).unwrap());
        let l = &pent.lattice;
        let s = choose_direction(None, &pent.vrep).unwrap();
        let empty = ChainFace::new(l, Vec::new());
        let (lo, hi) = (s.order()[0], s.order()[4]);
        assert_eq!(top_face(l, &s, &empty).chain, vec![l.vertex_face(hi)]);
        assert_eq!(bottom_face(l, &s, &empty).chain, vec![l.vertex_face(lo)]);
        let e = l.edges()[0];
        let edge = ChainFace::new(l, vec![e]);
        let top = top_face(l, &s, &edge);
        assert_eq!(top.chain, vec![l.vertex_face(s.max_of(l.vertices_of(e))), e]);
    }

    #[test]
    fn segment_partition() {
        let seg = poly(make_cube(1));
        let s = choose_direction(None, &seg.vrep).unwrap();
        let blocks = build_partition(&seg, &s).unwrap();
        assert_eq!(words(&blocks), ["c"]);
        assert_eq!(blocks[0].faces.len(), 3);
    }

    #[test]
    fn pentagon_partition() {
        let pent = poly(make_polygon(5).unwrap());
        let s = choose_direction(None, &pent.vrep).unwrap();
        let blocks = build_partition(&pent, &s).unwrap();
        assert_eq!(words(&blocks), ["cc", "d", "d", "d"]);
        assert_eq!(blocks.iter().map(|b| b.faces.len()).collect::<Vec<_>>(), [9, 4, 4, 4]);
        assert_eq!(blocks.iter().map(|b| b.owner).collect::<Vec<_>>(), s.order()[..4].to_vec());
        let report = verify_partition(&pent.lattice, &blocks, &enumerate_chains(&pent.lattice));
        assert!(report.passed(), "{:?}", report.failures);
    }

    #[test]
    fn square_pyramid_partition() {
        let pyr = square_pyramid();
        let s = SweepDirection::new(qv("1,2,0"), &pyr.vrep).unwrap();
        let blocks = build_partition(&pyr, &s).unwrap();
        assert_eq!(words(&blocks), ["ccc", "cd", "cd", "dc", "cd", "dc", "dc"]);
        let chains = enumerate_chains(&pyr.lattice);
        let report = verify_partition(&pyr.lattice, &blocks, &chains);
        assert!(report.passed(), "{:?}", report.failures);
        assert_eq!(blocks.iter().map(|b| b.faces.len()).sum::<usize>(), 99);
    }

    #[test]
    fn owner_sums_match_sweep() {
        for v in [make_crosspolytope(3).unwrap(), make_cube(3), prism(&make_simplex(2)), make_simplex(4), make_crosspolytope(4).unwrap()] {
            let p = poly(v);
            let s = choose_direction(None, &p.vrep).unwrap();
            let blocks = build_partition(&p, &s).unwrap();
            let sweep = cd_sweep(&p, &s, SweepOptions::default()).unwrap();
            for u in 0..p.n_vertices() {
                let mut phi = CdPoly::zero();
                for b in blocks.iter().filter(|b| b.owner == u) {
                    phi.add_term(b.word.clone(), 1);
                }
                assert_eq!(phi, sweep.per_vertex[u]);
            }
        }
    }

    #[test]
    fn partitions_verify_in_several_directions() {
        for v in [make_crosspolytope(3).unwrap(), make_cube(3), make_simplex(3), prism(&make_polygon(5).unwrap())] {
            let p = poly(v);
            let chains = enumerate_chains(&p.lattice);
            for t in [3, 5, 11] {
                let s = choose_direction(Some(&ladder_direction(3, t)), &p.vrep).unwrap();
                let blocks = build_partition(&p, &s).unwrap();
                let report = verify_partition(&p.lattice, &blocks, &chains);
                assert!(report.passed(), "{:?}", report.failures);
                assert_eq!(blocks.len() as i64, cd_index(&p.lattice).unwrap().terms().map(|(_, c)| c).sum::<i64>());
                // faces owned by v start at or above v
                for b in &blocks {
                    for c in b.faces.iter().filter(|c| !c.chain.is_empty()) {
                        let lowest = s.min_of(p.lattice.vertices_of(c.chain[0]));
                        assert!(s.height(lowest) >= s.height(b.owner));
                    }
                }
            }
        }
    }

    #[test]
    fn vertexless_chains_share_block_with_top_face() {
        let p = square_pyramid();
        let s = SweepDirection::new(qv("1,2,0"), &p.vrep).unwrap();
        let blocks = build_partition(&p, &s).unwrap();
        let block_of: HashMap<&ChainFace, usize> =
            blocks.iter().enumerate().flat_map(|(i, b)| b.faces.iter().map(move |f| (f, i))).collect();
        for c in enumerate_chains(&p.lattice).iter().filter(|c| !c.sigma.contains(0)) {
            assert_eq!(block_of[c], block_of[&top_face(&p.lattice, &s, c)]);
        }
    }

    #[test]
    fn verification_catches_a_moved_face() {
        let pent = poly(make_polygon(5).unwrap());
        let s = choose_direction(None, &pent.vrep).unwrap();
        let mut blocks = build_partition(&pent, &s).unwrap();
        let chains = enumerate_chains(&pent.lattice);
        // move a two-element chain out of the c² block into a d block
        let i = blocks[0].faces.iter().position(|f| f.chain.len() == 2).unwrap();
        let moved = blocks[0].faces.remove(i);
        blocks[1].faces.push(moved);
        let report = verify_partition(&pent.lattice, &blocks, &chains);
        assert!(!report.flag_test);
        assert!(!report.size_law);
        assert!(report.cover_disjoint);
        assert!(!report.passed());

        let mut dup = build_partition(&pent, &s).unwrap();
        let extra = dup[0].faces[0].clone();
        dup[1].faces.push(extra);
        assert!(!verify_partition(&pent.lattice, &dup, &chains).cover_disjoint);
    }
}
