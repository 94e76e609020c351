//! Fat points in the projective plane: Hilbert functions, generator counts,
//! minimal free resolutions and the maximal rank property, computed from
//! divisor classes on the blow-up and checked against a finite-field oracle.

pub mod cohomology;
pub mod cones;
pub mod cremona;
pub mod error;
pub mod lattice;
pub mod maxrank;
pub mod oracle;
pub mod resolution;

pub use cohomology::{FatPointScheme, HilbertProfile, PointModel};
pub use error::{Error, Result};
pub use lattice::{DivisorClass, WeylWord};
pub use maxrank::{MaxRankReport, RankStatus};
pub use resolution::{BettiTable, MuDims};
