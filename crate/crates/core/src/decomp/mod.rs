//! Numeric commutator, projection and square-zero decompositions over
//! complex doubles, each returned with a checkable certificate.

mod cert;
mod construct;
pub mod json;
mod linalg;
pub mod sample;

pub use cert::{verify, CertKind, CertTerm, DecompCertificate, TermForm, Verification};
pub use construct::*;
pub use linalg::*;

/// Numeric tolerances.
#[derive(Clone, Debug)]
pub struct NumConfig {
    /// Certificate residual and side-condition tolerance.
    pub tol: f64,
    /// Singular values at most `rank_tol · σ_max` count as zero.
    pub rank_tol: f64,
    /// Negative eigenvalues down to this (relative) size are clamped to zero
    /// before taking square roots.
    pub clamp: f64,
    /// Norm of the rescaled nilpotent part in the idempotent decomposition.
    pub davidson_norm: f64,
}

impl Default for NumConfig {
    fn default() -> Self {
        NumConfig { tol: 1e-8, rank_tol: 1e-10, clamp: 1e-12, davidson_norm: 0.4 }
    }
}

/// Divisibility witnesses `(x_i, d_i)` with `1 = Σ d_i* x_i* x_i d_i`.
pub mod fixtures {
    use super::json::parse_witness;
    use super::CMatrix;

    pub const WITNESS_M2: &str = include_str!("../../fixtures/witness_m2.json");
    pub const WITNESS_M3: &str = include_str!("../../fixtures/witness_m3.json");

    pub fn witness_m2() -> Vec<(CMatrix, CMatrix)> {
        parse_witness(WITNESS_M2).expect("bundled fixture")
    }

    pub fn witness_m3() -> Vec<(CMatrix, CMatrix)> {
        parse_witness(WITNESS_M3).expect("bundled fixture")
    }
}
