//! Face lattices of convex polytopes given by exact vertex coordinates.
//!
//! The hull is found by brute force: every `d`-subset of points that spans a
//! hyperplane is tested as a facet candidate, and the remaining faces are the
//! intersections of facet vertex sets. This is exponential but exact, and is
//! comfortable up to roughly 24 vertices in dimension 6.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{affine_rank, hyperplane_through, ratio, Hyperplane, QVector, Rational};

/// Hard ceiling on the number of points (or facets, for duals) in one lattice.
pub const MAX_VERTICES: usize = 128;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("points do not span R^{0}")]
    NotFullDimensional(usize),
    #[error("point {0} is not a vertex of the convex hull")]
    NonVertexPoint(usize),
    #[error("points {0} and {1} coincide")]
    DuplicatePoint(usize, usize),
    #[error("point {index} has {found} coordinates, expected {expected}")]
    WrongLength { index: usize, found: usize, expected: usize },
    #[error("no points given")]
    Empty,
    #[error("too many points: {0} (limit {MAX_VERTICES})")]
    TooLarge(usize),
    #[error("invalid size: {0}")]
    InvalidSize(String),
    #[error("unknown polytope `{0}`")]
    UnknownBuiltin(String),
}

/// A set of vertex indices, stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexSet(u128);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn full(n: usize) -> Self {
        if n >= 128 {
            VertexSet(u128::MAX)
        } else {
            VertexSet((1u128 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        VertexSet(1u128 << i)
    }

    pub fn bits(self) -> u128 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < 128 && self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1u128 << i;
    }

    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersection(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & other.0)
    }

    pub fn union(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 | other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut s = VertexSet::EMPTY;
        for i in iter {
            s.insert(i);
        }
        s
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Index of a face inside its [`FaceLattice`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FaceId(pub usize);

impl FaceId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub vertices: VertexSet,
    pub dim: i32,
}

/// Vertex description of a polytope. This is also the on-disk polytope
/// format: `{"dim": d, "vertices": [["0","1/2"], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VRep {
    pub dim: usize,
    pub vertices: Vec<QVector>,
}

impl VRep {
    pub fn new(dim: usize, vertices: Vec<QVector>) -> Self {
        VRep { dim, vertices }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn barycenter(&self) -> QVector {
        let n = ratio(1, self.vertices.len() as i64);
        self.vertices
            .iter()
            .fold(QVector::zeros(self.dim), |acc, v| acc.add(v))
            .scaled(&n)
    }
}

/// The face poset of a polytope. Faces are identified by their vertex sets
/// and sorted by `(dim, vertex set)`, so face 0 is always the empty face and
/// the last face is the polytope itself.
#[derive(Clone, Debug)]
pub struct FaceLattice {
    dim: usize,
    n_vertices: usize,
    faces: Vec<Face>,
    index: HashMap<VertexSet, FaceId>,
    by_dim: Vec<Vec<FaceId>>,
}

impl PartialEq for FaceLattice {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.n_vertices == other.n_vertices && self.faces == other.faces
    }
}

impl FaceLattice {
    /// Builds a lattice from explicit faces. No validation beyond sorting.
    pub fn from_faces(dim: usize, n_vertices: usize, mut faces: Vec<Face>) -> Self {
        faces.sort_by_key(|f| (f.dim, f.vertices.to_vec()));
        faces.dedup();
        let index = faces
            .iter()
            .enumerate()
            .map(|(i, f)| (f.vertices, FaceId(i)))
            .collect();
        let mut by_dim = vec![Vec::new(); dim + 2];
        for (i, f) in faces.iter().enumerate() {
            by_dim[(f.dim + 1) as usize].push(FaceId(i));
        }
        FaceLattice { dim, n_vertices, faces, index, by_dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, id: FaceId) -> &Face {
        &self.faces[id.0]
    }

    pub fn face_dim(&self, id: FaceId) -> i32 {
        self.faces[id.0].dim
    }

    pub fn vertices_of(&self, id: FaceId) -> VertexSet {
        self.faces[id.0].vertices
    }

    pub fn ids(&self) -> impl Iterator<Item = FaceId> {
        (0..self.faces.len()).map(FaceId)
    }

    pub fn id_of(&self, vertices: VertexSet) -> Option<FaceId> {
        self.index.get(&vertices).copied()
    }

    pub fn bottom(&self) -> FaceId {
        FaceId(0)
    }

    pub fn top(&self) -> FaceId {
        FaceId(self.faces.len() - 1)
    }

    /// Faces of dimension `k`, for `k` in `-1..=d`.
    pub fn faces_of_dim(&self, k: i32) -> &[FaceId] {
        let i = k + 1;
        if i < 0 || i as usize >= self.by_dim.len() {
            &[]
        } else {
            &self.by_dim[i as usize]
        }
    }

    pub fn vertex_face(&self, v: usize) -> FaceId {
        self.index[&VertexSet::singleton(v)]
    }

    pub fn edges(&self) -> &[FaceId] {
        self.faces_of_dim(1)
    }

    pub fn facets(&self) -> &[FaceId] {
        self.faces_of_dim(self.dim as i32 - 1)
    }

    pub fn leq(&self, a: FaceId, b: FaceId) -> bool {
        self.faces[a.0].vertices.is_subset(self.faces[b.0].vertices)
    }

    /// `(f_{-1}, f_0, ..., f_d)`.
    pub fn f_vector(&self) -> Vec<usize> {
        self.by_dim.iter().map(Vec::len).collect()
    }

    /// Neighbors of vertex `v` along edges, paired with the edge.
    pub fn neighbors(&self, v: usize) -> Vec<(usize, FaceId)> {
        self.edges()
            .iter()
            .filter(|&&e| self.faces[e.0].vertices.contains(v))
            .map(|&e| {
                let w = self.faces[e.0].vertices.iter().find(|&w| w != v).expect("edge has two ends");
                (w, e)
            })
            .collect()
    }

    /// Faces properly between `a` and `b`, plus the endpoints.
    pub fn interval(&self, a: FaceId, b: FaceId) -> Vec<FaceId> {
        let (va, vb) = (self.vertices_of(a), self.vertices_of(b));
        self.ids()
            .filter(|&f| {
                let vf = self.vertices_of(f);
                va.is_subset(vf) && vf.is_subset(vb)
            })
            .collect()
    }

    /// Hasse diagram with dimensions as node weights.
    pub fn hasse_graph(&self) -> DiGraph<i32, ()> {
        let mut g = DiGraph::new();
        let nodes: Vec<_> = self.faces.iter().map(|f| g.add_node(f.dim)).collect();
        for (i, f) in self.faces.iter().enumerate() {
            for &j in self.faces_of_dim(f.dim + 1) {
                if f.vertices.is_subset(self.faces[j.0].vertices) {
                    g.add_edge(nodes[i], nodes[j.0], ());
                }
            }
        }
        g
    }

    /// Export format: faces as sorted vertex-index arrays grouped by
    /// dimension, `faces[k]` holding the faces of dimension `k - 1`.
    pub fn to_json(&self) -> serde_json::Value {
        let groups: Vec<Vec<Vec<usize>>> = self
            .by_dim
            .iter()
            .map(|ids| ids.iter().map(|&i| self.faces[i.0].vertices.to_vec()).collect())
            .collect();
        serde_json::json!({ "dim": self.dim, "faces": groups })
    }
}

/// A V-polytope together with its face lattice and outward facet planes.
#[derive(Clone, Debug)]
pub struct Polytope {
    pub vrep: VRep,
    pub lattice: FaceLattice,
    /// Outward facet hyperplanes (`normal·x <= offset` on the polytope),
    /// in the order of [`FaceLattice::facets`].
    pub facet_planes: Vec<Hyperplane>,
}

impl Polytope {
    pub fn new(vrep: VRep) -> Result<Self, PolytopeError> {
        let (lattice, facet_planes) = hull(&vrep)?;
        Ok(Polytope { vrep, lattice, facet_planes })
    }

    pub fn dim(&self) -> usize {
        self.vrep.dim
    }

    pub fn n_vertices(&self) -> usize {
        self.vrep.vertices.len()
    }

    pub fn vertex(&self, i: usize) -> &QVector {
        &self.vrep.vertices[i]
    }

    /// Facet planes containing vertex `v`.
    pub fn facet_planes_at(&self, v: usize) -> Vec<&Hyperplane> {
        self.lattice
            .facets()
            .iter()
            .zip(&self.facet_planes)
            .filter(|(f, _)| self.lattice.vertices_of(**f).contains(v))
            .map(|(_, h)| h)
            .collect()
    }
}

fn validate(v: &VRep) -> Result<(), PolytopeError> {
    if v.vertices.is_empty() {
        return Err(PolytopeError::Empty);
    }
    if v.vertices.len() > MAX_VERTICES {
        return Err(PolytopeError::TooLarge(v.vertices.len()));
    }
    for (i, p) in v.vertices.iter().enumerate() {
        if p.len() != v.dim {
            return Err(PolytopeError::WrongLength { index: i, found: p.len(), expected: v.dim });
        }
    }
    let mut seen: HashMap<&QVector, usize> = HashMap::new();
    for (i, p) in v.vertices.iter().enumerate() {
        if let Some(&j) = seen.get(p) {
            return Err(PolytopeError::DuplicatePoint(j, i));
        }
        seen.insert(p, i);
    }
    if affine_rank(&v.vertices) != v.dim {
        return Err(PolytopeError::NotFullDimensional(v.dim));
    }
    Ok(())
}

fn hull(v: &VRep) -> Result<(FaceLattice, Vec<Hyperplane>), PolytopeError> {
    validate(v)?;
    let d = v.dim;
    let n = v.vertices.len();
    if d == 0 {
        let faces = vec![
            Face { vertices: VertexSet::EMPTY, dim: -1 },
            Face { vertices: VertexSet::singleton(0), dim: 0 },
        ];
        return Ok((FaceLattice::from_faces(0, 1, faces), Vec::new()));
    }

    let mut facets: Vec<(VertexSet, Hyperplane)> = Vec::new();
    for combo in (0..n).combinations(d) {
        let subset: VertexSet = combo.iter().copied().collect();
        if facets.iter().any(|(s, _)| subset.is_subset(*s)) {
            continue;
        }
        let pts: Vec<QVector> = combo.iter().map(|&i| v.vertices[i].clone()).collect();
        let Ok(plane) = hyperplane_through(&pts, d) else {
            continue;
        };
        let mut on = VertexSet::EMPTY;
        let (mut pos, mut neg) = (false, false);
        for (i, p) in v.vertices.iter().enumerate() {
            let s = plane.eval(p);
            if s.is_zero() {
                on.insert(i);
            } else if s.is_positive() {
                pos = true;
            } else {
                neg = true;
            }
        }
        if pos && neg {
            continue;
        }
        let outward = if pos { plane.flipped() } else { plane };
        facets.push((on, outward));
    }

    let mut seen: HashSet<VertexSet> = HashSet::new();
    let full = VertexSet::full(n);
    seen.insert(full);
    let mut queue = VecDeque::from([full]);
    while let Some(f) = queue.pop_front() {
        for (s, _) in &facets {
            let g = f.intersection(*s);
            if g != f && seen.insert(g) {
                queue.push_back(g);
            }
        }
    }
    for i in 0..n {
        if !seen.contains(&VertexSet::singleton(i)) {
            return Err(PolytopeError::NonVertexPoint(i));
        }
    }
    let faces: Vec<Face> = seen
        .into_iter()
        .map(|s| {
            let dim = if s.is_empty() {
                -1
            } else {
                let pts: Vec<QVector> = s.iter().map(|i| v.vertices[i].clone()).collect();
                affine_rank(&pts) as i32
            };
            Face { vertices: s, dim }
        })
        .collect();
    let lattice = FaceLattice::from_faces(d, n, faces);
    let plane_of: HashMap<VertexSet, Hyperplane> = facets.into_iter().collect();
    let planes = lattice
        .facets()
        .iter()
        .map(|&f| plane_of[&lattice.vertices_of(f)].clone())
        .collect();
    Ok((lattice, planes))
}

/// Face lattice of the convex hull of `v`. Every point must be a vertex.
pub fn hull_lattice(v: &VRep) -> Result<FaceLattice, PolytopeError> {
    hull(v).map(|(l, _)| l)
}

/// Origin plus the standard basis of R^d.
pub fn make_simplex(d: usize) -> VRep {
    let mut vs = vec![QVector::zeros(d)];
    vs.extend((0..d).map(|i| QVector::unit(d, i)));
    VRep::new(d, vs)
}

/// `{0,1}^d`.
pub fn make_cube(d: usize) -> VRep {
    let vs = (0..1usize << d)
        .map(|m| QVector::from_ints(&(0..d).map(|i| (m >> i & 1) as i64).collect::<Vec<_>>()))
        .collect();
    VRep::new(d, vs)
}

/// `±e_i`.
pub fn make_crosspolytope(d: usize) -> Result<VRep, PolytopeError> {
    if d == 0 {
        return Err(PolytopeError::InvalidSize("cross-polytope needs d >= 1".into()));
    }
    let vs = (0..d)
        .flat_map(|i| {
            let e = QVector::unit(d, i);
            let m = e.scaled(&-Rational::one());
            [e, m]
        })
        .collect();
    Ok(VRep::new(d, vs))
}

/// A convex `n`-gon whose vertices lie exactly on the unit circle, taken
/// from the rational parametrisation `((1 - t²)/(1 + t²), 2t/(1 + t²))`
/// with `t` a three-decimal rounding of `tan(θ/2)`.
pub fn make_polygon(n: usize) -> Result<VRep, PolytopeError> {
    if n < 3 {
        return Err(PolytopeError::InvalidSize(format!("polygon needs n >= 3, got {n}")));
    }
    let vs = (0..n)
        .map(|k| {
            let theta = -std::f64::consts::PI + 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / n as f64;
            let t = ratio(((theta / 2.0).tan() * 1000.0).round() as i64, 1000);
            let t2 = &t * &t;
            let den = Rational::one() + &t2;
            QVector::new(vec![(Rational::one() - &t2) / &den, (&t + &t) / &den])
        })
        .collect();
    Ok(VRep::new(2, vs))
}

/// Embeds `p` at height 0 and adds an apex above its barycenter.
pub fn pyramid(p: &VRep) -> VRep {
    let zero = QVector::zeros(1);
    let mut vs: Vec<QVector> = p.vertices.iter().map(|v| v.concat(&zero)).collect();
    vs.push(p.barycenter().concat(&QVector::from_ints(&[1])));
    VRep::new(p.dim + 1, vs)
}

pub fn product(p: &VRep, q: &VRep) -> VRep {
    let vs = p
        .vertices
        .iter()
        .cartesian_product(&q.vertices)
        .map(|(a, b)| a.concat(b))
        .collect();
    VRep::new(p.dim + q.dim, vs)
}

pub fn prism(p: &VRep) -> VRep {
    product(p, &make_cube(1))
}

/// Polar dual about the vertex barycenter. Dual vertex `i` corresponds to
/// facet `i` of `p` (in [`FaceLattice::facets`] order).
pub fn polar_dual(p: &Polytope) -> VRep {
    let c = p.vrep.barycenter();
    let vs = p
        .facet_planes
        .iter()
        .map(|h| {
            let beta = h.offset() - h.normal().dot_unchecked(&c);
            h.normal().scaled(&beta.recip())
        })
        .collect();
    VRep::new(p.dim(), vs)
}

/// Order-reversed lattice. Vertex sets of the dual are facet-index sets.
pub fn dual(l: &FaceLattice) -> FaceLattice {
    let d = l.dim() as i32;
    let facets: Vec<VertexSet> = l.facets().iter().map(|&f| l.vertices_of(f)).collect();
    if l.dim() == 0 {
        return l.clone();
    }
    let faces = l
        .faces()
        .iter()
        .map(|f| Face {
            vertices: facets
                .iter()
                .enumerate()
                .filter(|(_, s)| f.vertices.is_subset(**s))
                .map(|(i, _)| i)
                .collect(),
            dim: d - 1 - f.dim,
        })
        .collect();
    FaceLattice::from_faces(l.dim(), facets.len(), faces)
}

/// True iff every interval of positive rank has as many elements of even
/// rank as of odd rank.
pub fn is_eulerian(l: &FaceLattice) -> bool {
    let faces = l.faces();
    for a in faces {
        for b in faces {
            if b.dim <= a.dim || !a.vertices.is_subset(b.vertices) {
                continue;
            }
            let mut balance = 0i64;
            for c in faces {
                if a.vertices.is_subset(c.vertices) && c.vertices.is_subset(b.vertices) {
                    balance += if c.dim.rem_euclid(2) == 0 { 1 } else { -1 };
                }
            }
            if balance != 0 {
                return false;
            }
        }
    }
    true
}

/// Lattice isomorphism (dimension-preserving isomorphism of Hasse diagrams).
pub fn is_isomorphic(a: &FaceLattice, b: &FaceLattice) -> bool {
    a.dim() == b.dim()
        && a.f_vector() == b.f_vector()
        && petgraph::algo::is_isomorphic_matching(&a.hasse_graph(), &b.hasse_graph(), |x, y| x == y, |_, _| true)
}

/// Parses builtin polytope names:
/// `point`, `segment`, `simplex:d`, `cube:d`, `cross:d`, `polygon:n`,
/// `pyramid:<name>`, `prism:<name>`, `product:<name>+<name>`.
pub fn builtin(name: &str) -> Result<VRep, PolytopeError> {
    let unknown = || PolytopeError::UnknownBuiltin(name.to_string());
    let size = |s: &str| s.trim().parse::<usize>().map_err(|_| unknown());
    let (head, rest) = match name.trim().split_once(':') {
        Some((h, r)) => (h, Some(r)),
        None => (name.trim(), None),
    };
    match (head, rest) {
        ("point", None) => Ok(make_simplex(0)),
        ("segment", None) => Ok(make_cube(1)),
        ("octahedron", None) => make_crosspolytope(3),
        ("simplex", Some(r)) => Ok(make_simplex(size(r)?)),
        ("cube", Some(r)) => Ok(make_cube(size(r)?)),
        ("cross", Some(r)) | ("crosspolytope", Some(r)) => make_crosspolytope(size(r)?),
        ("polygon", Some(r)) => make_polygon(size(r)?),
        ("pyramid", Some(r)) => Ok(pyramid(&builtin(r)?)),
        ("prism", Some(r)) => Ok(prism(&builtin(r)?)),
        ("product", Some(r)) => {
            let (a, b) = r.split_once('+').ok_or_else(unknown)?;
            Ok(product(&builtin(a)?, &builtin(b)?))
        }
        _ => Err(unknown()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f_vec(v: &VRep) -> Vec<usize> {
        hull_lattice(v).unwrap().f_vector()
    }

    /// Facet count by the definition: hyperplanes through affinely
    /// independent d-subsets with every point on one closed side, counted
    /// once per distinct hyperplane.
    fn facet_count_oracle(v: &VRep) -> usize {
        let mut planes = HashSet::new();
        for combo in (0..v.len()).combinations(v.dim) {
            let pts: Vec<QVector> = combo.iter().map(|&i| v.vertices[i].clone()).collect();
            if let Ok(h) = hyperplane_through(&pts, v.dim) {
                let signs: HashSet<_> = v.vertices.iter().map(|p| h.side(p)).collect();
                if !(signs.contains(&crate::exactnum::Side::Positive)
                    && signs.contains(&crate::exactnum::Side::Negative))
                {
                    planes.insert(h);
                }
            }
        }
        planes.len()
    }

    #[test]
    fn hull_examples() {
        assert_eq!(f_vec(&make_cube(2)), vec![1, 4, 4, 1]);
        assert_eq!(f_vec(&make_cube(3)), vec![1, 8, 12, 6, 1]);
        assert_eq!(facet_count_oracle(&make_cube(3)), 6);
        let sq_pyr = pyramid(&make_cube(2));
        assert_eq!(f_vec(&sq_pyr), vec![1, 5, 8, 5, 1]);
        assert_eq!(facet_count_oracle(&sq_pyr), 5);
    }

    #[test]
    fn constructor_examples() {
        assert_eq!(f_vec(&make_polygon(5).unwrap()), vec![1, 5, 5, 1]);
        assert_eq!(f_vec(&make_crosspolytope(3).unwrap()), vec![1, 6, 12, 8, 1]);
        assert_eq!(f_vec(&make_cube(1)), vec![1, 2, 1]);
        assert_eq!(f_vec(&make_simplex(0)), vec![1, 1]);
        assert_eq!(f_vec(&pyramid(&make_polygon(4).unwrap())), vec![1, 5, 8, 5, 1]);
        let tri_prism = prism(&make_polygon(3).unwrap());
        assert_eq!(f_vec(&tri_prism), vec![1, 6, 9, 5, 1]);
        assert_eq!(facet_count_oracle(&tri_prism), 5);
        let sq = product(&make_cube(1), &make_cube(1));
        assert!(is_isomorphic(&hull_lattice(&sq).unwrap(), &hull_lattice(&make_cube(2)).unwrap()));
        assert!(make_polygon(2).is_err());
        assert!(make_crosspolytope(0).is_err());
    }

    #[test]
    fn polygon_points_are_on_the_unit_circle() {
        for n in 3..12 {
            let p = make_polygon(n).unwrap();
            for v in &p.vertices {
                assert_eq!(v.dot_unchecked(v), Rational::one());
            }
            assert_eq!(f_vec(&p), vec![1, n, n, 1]);
        }
    }

    #[test]
    fn non_vertex_points_are_rejected() {
        let mut v = make_cube(2);
        v.vertices.push(QVector::new(vec![ratio(1, 2), ratio(1, 2)]));
        assert_eq!(hull_lattice(&v), Err(PolytopeError::NonVertexPoint(4)));
        let mut v = make_cube(2);
        v.vertices.push(QVector::new(vec![ratio(1, 2), ratio(0, 1)]));
        assert_eq!(hull_lattice(&v), Err(PolytopeError::NonVertexPoint(4)));
        let flat = VRep::new(3, make_cube(2).vertices.iter().map(|p| p.concat(&QVector::zeros(1))).collect());
        assert_eq!(hull_lattice(&flat), Err(PolytopeError::NotFullDimensional(3)));
        let mut dup = make_cube(2);
        dup.vertices.push(dup.vertices[1].clone());
        assert_eq!(hull_lattice(&dup), Err(PolytopeError::DuplicatePoint(1, 4)));
    }

    #[test]
    fn duality() {
        let cube = hull_lattice(&make_cube(3)).unwrap();
        let oct = hull_lattice(&make_crosspolytope(3).unwrap()).unwrap();
        assert!(is_isomorphic(&dual(&cube), &oct));
        assert!(!is_isomorphic(&cube, &oct));
        for d in 1..5 {
            let s = hull_lattice(&make_simplex(d)).unwrap();
            assert!(is_isomorphic(&dual(&s), &s));
        }
        let pyr = hull_lattice(&pyramid(&make_polygon(5).unwrap())).unwrap();
        assert!(is_isomorphic(&dual(&dual(&pyr)), &pyr));
        assert!(is_isomorphic(&dual(&pyr), &pyr));
    }

    #[test]
    fn eulerian() {
        assert!(is_eulerian(&hull_lattice(&make_cube(3)).unwrap()));
        assert!(is_eulerian(&hull_lattice(&make_polygon(5).unwrap()).unwrap()));
        let cube = hull_lattice(&make_cube(3)).unwrap();
        let gone = cube.vertices_of(cube.facets()[0]);
        let faces = cube.faces().iter().filter(|f| f.vertices != gone).cloned().collect();
        let broken = FaceLattice::from_faces(3, 8, faces);
        assert!(!is_eulerian(&broken));
    }

    #[test]
    fn polar_dual_of_cube_is_octahedral() {
        let cube = Polytope::new(make_cube(3)).unwrap();
        let oct = Polytope::new(polar_dual(&cube)).unwrap();
        assert_eq!(oct.lattice.f_vector(), vec![1, 6, 12, 8, 1]);
        assert!(is_isomorphic(&oct.lattice, &dual(&cube.lattice)));
    }

    #[test]
    fn facet_planes_are_outward() {
        let p = Polytope::new(pyramid(&make_polygon(4).unwrap())).unwrap();
        for (f, h) in p.lattice.facets().iter().zip(&p.facet_planes) {
            for (i, v) in p.vrep.vertices.iter().enumerate() {
                let s = h.eval(v);
                assert!(!s.is_positive());
                assert_eq!(s.is_zero(), p.lattice.vertices_of(*f).contains(i));
            }
        }
    }

    #[test]
    fn builtins_parse() {
        assert_eq!(builtin("cube:3").unwrap(), make_cube(3));
        assert_eq!(builtin("pyramid:polygon:4").unwrap().len(), 5);
        assert_eq!(builtin("product:cube:1+polygon:5").unwrap().len(), 10);
        assert_eq!(builtin("prism:simplex:2").unwrap().len(), 6);
        assert!(builtin("dodecahedron").is_err());
    }

    #[test]
    fn polytope_json_roundtrip() {
        let v = pyramid(&make_cube(2));
        let s = serde_json::to_string(&v).unwrap();
        assert!(s.contains("\"1/2\""));
        let back: VRep = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
        let l = hull_lattice(&make_cube(1)).unwrap().to_json();
        assert_eq!(l["faces"], serde_json::json!([[[]], [[0], [1]], [[0, 1]]]));
    }
}
