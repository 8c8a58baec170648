//! Finite-dimensional algebras with two simple modules built from families of
//! subspaces, together with independent checks of their structure.
//!
//! Paths and words are written right to left: in `x·y` the factor `y` is
//! traversed first, and the product is nonzero only when `source(x) = target(y)`.
//! Vertices are zero-based internally and one-based in every report.

pub mod algebra;
pub mod curve;
pub mod dcat;
pub mod error;
pub mod exactla;
pub mod family;
pub mod homology;
pub mod quiverpath;
pub mod ralgebra;
pub mod twist;

pub use error::{Error, Result};
pub use exactla::{Matrix, Scalar, SparseVec, Subspace};
