//! Exact linear algebra in finite direct sums of matrix algebras.

mod algebra;
pub mod json;
mod lie;
mod sample;
mod subspace;

pub use algebra::{AlgElement, FdAlgebra};
pub use lie::*;
pub use sample::*;
pub use subspace::Subspace;
