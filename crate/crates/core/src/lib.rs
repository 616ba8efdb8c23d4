//! Exact computer algebra for the Lie algebras `Wₙ` and `𝕊ₙ` of vector fields
//! on a torus, Weyl-algebra weight modules, finite-dimensional `𝔤𝔩ₙ`-modules,
//! and the tensor modules `P ⊗ V` built from them.

pub mod error;
pub mod exact_linalg;
pub mod probe;
pub mod slrep;
pub mod tensorrep;
pub mod torusfields;
pub mod weyl;

pub use error::{Error, Result};
pub use exact_linalg::{Rational, SpanBasis, SparseVec};
