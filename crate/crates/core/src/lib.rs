//! Exact computational algebra for large-N permutation orbifolds.
//!
//! Fixed-point characters from cycle indices, orbit counting for S_N, Z_N and
//! GL(N, q), structure constants of fixed-point algebras and their large-N
//! limits, and twisted-sector conformal weights.

pub mod error;
pub mod groups;
pub mod orbits;
pub mod rational;
pub mod scalar;
pub mod series;
pub mod structure;
pub mod twisted;

pub use error::{OrbError, Result};
pub use groups::{build_group, cycle_type, CycleIndex, CycleType, GroupKind, PermGroupHandle, Permutation, SubsetK};
pub use scalar::Scalar;
pub use series::TruncatedSeries;
