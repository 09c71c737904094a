//! Flag vectors, cd-indices and toric h-vectors of convex polytopes given by
//! exact rational vertex coordinates.
//!
//! Every quantity can be computed along more than one route (flag counting,
//! sweeping by a linear functional, the symmetric sweep, the toric
//! recursion), which the test suites cross-check against each other.

pub mod exactnum;
pub mod flagvec;
pub mod polytope;
pub mod sweep;
pub mod toric;
pub mod truncpartition;

pub use exactnum::{QVector, Rational};
pub use flagvec::{Ab, AbPoly, Cd, CdPoly, CdPolyQ, CdWord, FlagVector, NcPoly, SubsetS, Word};
pub use polytope::{FaceId, FaceLattice, Polytope, PolytopeError, VRep, VertexSet};
pub use sweep::{SweepDirection, SweepError, SweepOptions, SweepResult};
pub use toric::{ExtendedToricH, GVector, ToricError, ToricHVector};
pub use truncpartition::{Block, ChainFace, PartitionError, PartitionReport};
