//! Exact integer linear algebra.

mod det;
mod hnf;
pub mod lattice;
mod matrix;
mod snf;

pub use det::det;
pub use hnf::{hnf, hnf_contains};
pub use matrix::IntMatrix;
pub use snf::{snf, SnfResult};
