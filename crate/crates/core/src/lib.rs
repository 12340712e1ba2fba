//! Abelian symmetry groups of N-Higgs-doublet scalar potentials, computed
//! with exact integer and rational arithmetic.

pub mod classifier;
pub mod constructions;
pub mod cpext;
pub mod error;
pub mod exactmath;
pub mod groups;
pub mod monomials;
pub mod serde_util;
pub mod torus;

pub use error::{Error, Result};
