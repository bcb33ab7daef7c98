//! Predicting the linear span of a polynomial's range on `⊕ M_{n_i}`.

use std::collections::BTreeMap;

use super::{largest_identity_k, MethodChoice, PiConfig};
use crate::error::{Error, Result};
use crate::freealg::{eval_poly, is_cyclically_zero, NcPoly, Var};
use crate::matalg::{ideal_commutator, random_element, saturate, FdAlgebra, SampledSpan, SamplingConfig, Subspace};

#[derive(Clone, Debug)]
pub struct RangeClassification {
    /// Largest `k` with `f` an identity on `M_k`, capped at the largest block.
    pub k: usize,
    /// `[I_k, A]`.
    pub predicted: Subspace,
    /// Span of sampled values of `f`, when requested.
    pub sampled: Option<SampledSpan>,
}

impl RangeClassification {
    /// Whether the sampled span (if any) equals the prediction.
    pub fn agrees(&self) -> Option<bool> {
        self.sampled.as_ref().map(|s| s.subspace == self.predicted)
    }
}

/// Span of `f(a₁, …, a_n)` over random elements, sampled until stable.
pub fn sampled_range_span(f: &NcPoly, algebra: &FdAlgebra, cfg: &SamplingConfig) -> Result<SampledSpan> {
    let vars = f.variables();
    saturate(algebra, cfg, |rng| {
        let values: BTreeMap<Var, _> = vars.iter().map(|&v| (v, random_element(rng, algebra))).collect();
        eval_poly(f, &values).map(Some)
    })
}

/// `Lin(f(A)) = [I_k, A]` with `k` the largest size on which `f` is an
/// identity. Requires `f` to be a sum of commutators in the free algebra.
pub fn classify_range_span(
    f: &NcPoly,
    algebra: &FdAlgebra,
    choice: MethodChoice,
    pi: &PiConfig,
    sampling: Option<&SamplingConfig>,
) -> Result<RangeClassification> {
    if f.is_constant() {
        return Err(Error::ConstantPolynomial);
    }
    if !is_cyclically_zero(f) {
        return Err(Error::Precondition("polynomial is not a sum of commutators".into()));
    }
    let k = largest_identity_k(f, algebra.max_block(), choice, pi)?;
    let predicted = ideal_commutator(algebra, k);
    let sampled = sampling.map(|cfg| sampled_range_span(f, algebra, cfg)).transpose()?;
    Ok(RangeClassification { k, predicted, sampled })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::{nested_commutator_poly, parse_poly, standard_poly};

    fn run(f: &NcPoly, blocks: &[usize]) -> RangeClassification {
        let a = FdAlgebra::new(blocks.to_vec()).unwrap();
        let cfg = SamplingConfig { seed: 4, ..Default::default() };
        classify_range_span(f, &a, MethodChoice::Exact, &PiConfig::default(), Some(&cfg)).unwrap()
    }

    #[test]
    fn examples() {
        let r = run(&standard_poly(4).unwrap(), &[1, 2, 3]);
        assert_eq!((r.k, r.predicted.dim()), (2, 8));
        assert_eq!(r.agrees(), Some(true));
        let r = run(&nested_commutator_poly(2).unwrap(), &[1, 2, 3]);
        assert_eq!((r.k, r.predicted.dim()), (1, 11));
        assert_eq!(r.agrees(), Some(true));
        let r = run(&parse_poly("[x1,x2]").unwrap(), &[1, 1]);
        assert!(r.predicted.is_zero());
        assert_eq!(r.agrees(), Some(true));
    }

    #[test]
    fn precondition() {
        let a = FdAlgebra::matrix(2);
        let f = parse_poly("x1^2").unwrap();
        let err = classify_range_span(&f, &a, MethodChoice::Exact, &PiConfig::default(), None);
        assert!(matches!(err, Err(Error::Precondition(_))));
    }
}
