//! Exact computations with admissible modules over the Witt algebra of
//! vector fields on a torus, extended by the functions on it.

mod error;
pub mod derham;
pub mod exact;
pub mod gl;
pub mod harness;
pub mod linalg;
pub mod module;
pub mod ops;
pub mod weighting;

pub use error::{Error, Result};
