//! Twisted homology of the spherical building of GL(n, F_q).
//!
//! The crate builds the order complex `X_V` of proper nonzero subspaces of
//! `V = F_q^n`, computes its homology with the exterior powers `∧^k 𝔤` of
//! the local system sending a flag to its smallest subspace, constructs the
//! explicit cycles (apartment cycles, the `c̃_v` basis, the `z_{u,i}` basis
//! and the minimal `γ_u` cycles) and searches cycle spaces for minimum
//! support.

pub mod complexes;
pub mod cycles;
pub mod error;
pub mod exterior;
pub mod field;
pub mod formulas;
pub mod grassmann;
pub mod homology;
pub mod linalg;
pub mod mincycle;
pub mod verify;

pub use error::{Error, Result};
pub use field::{Elem, Field};
pub use grassmann::Subspace;
pub use linalg::Matrix;
