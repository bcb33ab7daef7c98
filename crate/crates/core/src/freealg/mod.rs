//! Noncommutative polynomials over the Gaussian rationals.

pub mod eval;
mod gauss;
mod parse;
mod poly;
pub mod sandwich;
mod transform;

pub use eval::{eval_naive, eval_poly, eval_seq, EvalRing};
pub use gauss::GaussRat;
pub use parse::{parse_poly, parse_poly_with};
pub use poly::{nested_commutator_poly, standard_poly, Limits, MultiDegree, NcPoly, Var, Word};
pub use sandwich::{sandwich_terms, verify_sandwich_identity};
pub use transform::{
    cyclic_canonical_form, is_cyclically_zero, linearize_step, multihomogeneous_components,
    multilinearize, Multilinearization,
};
