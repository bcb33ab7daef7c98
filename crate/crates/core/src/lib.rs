//! Lie ideals in finite-dimensional C*-algebras: noncommutative polynomials,
//! polynomial-identity testing on matrix algebras, exact subspace
//! computations and numeric commutator decompositions.

pub mod decomp;
pub mod error;
pub mod freealg;
pub mod matalg;
pub mod pitest;
pub mod qmatrix;
pub mod rng;
pub mod suite;

pub use error::{Error, Result};
