//! Seeded samplers for nilpotents, projections and Lie ideals, and the
//! sampled property checks built on them.

use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::algebra::{AlgElement, FdAlgebra};
use super::lie::{
    commutator_space, conjugation_preserves, ideal_commutator, ideal_generated, ideal_ik,
    lie_closure,
};
use super::subspace::Subspace;
use crate::error::{Error, Result};
use crate::freealg::GaussRat;
use crate::qmatrix::QMatrix;
use crate::rng::stream_rng;

fn gauss_int<R: Rng>(rng: &mut R, bound: i64) -> GaussRat {
    GaussRat::int(rng.random_range(-bound..=bound), rng.random_range(-bound..=bound))
}

/// Dense random matrix with small Gaussian-integer entries.
pub fn random_matrix<R: Rng>(rng: &mut R, n: usize) -> QMatrix {
    QMatrix::from_vec(n, (0..n * n).map(|_| gauss_int(rng, 3)).collect())
}

pub fn random_element<R: Rng>(rng: &mut R, algebra: &FdAlgebra) -> AlgElement {
    let blocks = algebra.blocks().iter().map(|&n| random_matrix(rng, n)).collect();
    algebra.element(blocks).expect("shape")
}

/// Random matrix over `ℤ[i]` with determinant a unit, and its inverse.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize) -> (QMatrix, QMatrix) {
    let mut t = QMatrix::identity(n);
    if n > 1 {
        for _ in 0..3 * n {
            let i = rng.random_range(0..n);
            let mut j = rng.random_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            let c = gauss_int(rng, 2);
            for col in 0..n {
                let v = t.get(i, col) + &(&c * t.get(j, col));
                t.set(i, col, v);
            }
        }
    }
    let inv = t.inverse().expect("unimodular");
    (t, inv)
}

/// Nilpotent Jordan matrix whose largest block has size exactly `k`.
pub fn jordan_seed<R: Rng>(rng: &mut R, n: usize, k: usize) -> QMatrix {
    assert!(1 <= k && k <= n);
    let mut parts = vec![k];
    let mut left = n - k;
    while left > 0 {
        let p = rng.random_range(1..=left.min(k));
        parts.push(p);
        left -= p;
    }
    let mut j = QMatrix::zeros(n);
    let mut start = 0;
    for p in parts {
        for r in start..start + p - 1 {
            j.set(r, r + 1, GaussRat::ONE);
        }
        start += p;
    }
    j
}

/// `T J T⁻¹` with `J` a Jordan seed: nilpotent of order exactly `k`.
pub fn random_nilpotent<R: Rng>(rng: &mut R, n: usize, k: usize) -> QMatrix {
    let j = jordan_seed(rng, n, k);
    let (t, ti) = random_unimodular(rng, n);
    t.mul(&j).mul(&ti)
}

/// Element of exact nilpotency order `k`: each block of size at least `k` is
/// zero or has order `k`, the others are zero. `None` if no block is large
/// enough.
pub fn random_nilpotent_element<R: Rng>(rng: &mut R, algebra: &FdAlgebra, k: usize) -> Option<AlgElement> {
    let eligible: Vec<usize> = (0..algebra.blocks().len()).filter(|&b| algebra.blocks()[b] >= k).collect();
    let forced = *eligible.choose(rng)?;
    let blocks = algebra
        .blocks()
        .iter()
        .enumerate()
        .map(|(b, &n)| {
            if b == forced || (n >= k && rng.random_bool(0.75)) {
                random_nilpotent(rng, n, k)
            } else {
                QMatrix::zeros(n)
            }
        })
        .collect();
    Some(algebra.element(blocks).expect("shape"))
}

/// Random element with `x² = 0`; zero in commutative algebras.
pub fn random_square_zero<R: Rng>(rng: &mut R, algebra: &FdAlgebra) -> AlgElement {
    random_nilpotent_element(rng, algebra, 2).unwrap_or_else(|| algebra.zero())
}

/// Orthogonal projection onto the span of `r` random columns, computed
/// exactly as `V (V*V)⁻¹ V*`.
pub fn random_projection<R: Rng>(rng: &mut R, n: usize, r: usize) -> QMatrix {
    assert!(r <= n);
    if r == 0 {
        return QMatrix::zeros(n);
    }
    loop {
        let v: Vec<Vec<GaussRat>> = (0..n).map(|_| (0..r).map(|_| gauss_int(rng, 3)).collect()).collect();
        let mut gram = QMatrix::zeros(r);
        for a in 0..r {
            for b in 0..r {
                let mut s = GaussRat::ZERO;
                for row in &v {
                    s += &(&row[a].conj() * &row[b]);
                }
                gram.set(a, b, s);
            }
        }
        let Some(gi) = gram.inverse() else { continue };
        let mut p = QMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut s = GaussRat::ZERO;
                for a in 0..r {
                    for b in 0..r {
                        s += &(&(&v[i][a] * gi.get(a, b)) * &v[j][b].conj());
                    }
                }
                p.set(i, j, s);
            }
        }
        return p;
    }
}

/// Stopping rule for sampled spans.
#[derive(Clone, Debug)]
pub struct SamplingConfig {
    /// Stop after this many consecutive samples without a dimension gain.
    pub patience: usize,
    pub max_samples: usize,
    pub seed: u64,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig { patience: 25, max_samples: 2000, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampledSpan {
    pub subspace: Subspace,
    /// Samples drawn before the span stabilized.
    pub samples: usize,
    /// Whether the patience rule fired before the sample cap.
    pub saturated: bool,
}

/// Spans samples from `draw` until the dimension is stable.
pub fn saturate(
    algebra: &FdAlgebra,
    cfg: &SamplingConfig,
    mut draw: impl FnMut(&mut ChaCha8Rng) -> Result<Option<AlgElement>>,
) -> Result<SampledSpan> {
    let mut rng = stream_rng(cfg.seed, 0);
    let mut span = Subspace::zero(algebra);
    let mut idle = 0;
    let mut samples = 0;
    while samples < cfg.max_samples {
        let Some(x) = draw(&mut rng)? else {
            return Ok(SampledSpan { subspace: span, samples, saturated: true });
        };
        samples += 1;
        if span.insert(&x)? {
            idle = 0;
        } else {
            idle += 1;
            if idle >= cfg.patience {
                return Ok(SampledSpan { subspace: span, samples, saturated: true });
            }
        }
    }
    Ok(SampledSpan { subspace: span, samples, saturated: false })
}

/// Sampled span of elements of exact nilpotency order `k`.
pub fn nilpotent_k_span(algebra: &FdAlgebra, k: usize, cfg: &SamplingConfig) -> Result<SampledSpan> {
    if k < 2 {
        return Err(Error::InvalidArgument("nilpotency order must be at least 2".into()));
    }
    saturate(algebra, cfg, |rng| Ok(random_nilpotent_element(rng, algebra, k)))
}

pub fn square_zero_span(algebra: &FdAlgebra, cfg: &SamplingConfig) -> Result<SampledSpan> {
    nilpotent_k_span(algebra, 2, cfg)
}

/// Sampled nilpotent span together with the predicted `[I_{k−1}, A]`.
pub fn nilpotent_span_matches_prediction(
    algebra: &FdAlgebra,
    k: usize,
    cfg: &SamplingConfig,
) -> Result<(SampledSpan, Subspace)> {
    let sampled = nilpotent_k_span(algebra, k, cfg)?;
    Ok((sampled, ideal_commutator(algebra, k - 1)))
}

/// Tests `(1 + x) U (1 − x) ⊆ U` for `samples` random square-zero `x`.
pub fn similarity_invariance_check(u: &Subspace, samples: usize, seed: u64) -> bool {
    let mut rng = stream_rng(seed, 0);
    (0..samples).all(|_| {
        let x = random_square_zero(&mut rng, u.algebra());
        conjugation_preserves(u, &x)
    })
}

/// A generator drawn from a mix of shapes so that closures cover every kind
/// of Lie ideal: zero, central, nilpotent, single-block, diagonal and dense.
pub fn random_generator<R: Rng>(rng: &mut R, algebra: &FdAlgebra) -> AlgElement {
    match rng.random_range(0..6) {
        0 => algebra.zero(),
        1 => {
            let blocks =
                algebra.blocks().iter().map(|&n| QMatrix::scalar(n, gauss_int(rng, 3))).collect();
            algebra.element(blocks).expect("shape")
        }
        2 => random_square_zero(rng, algebra),
        3 => {
            let b = rng.random_range(0..algebra.blocks().len());
            let mut blocks = algebra.zero().into_blocks();
            blocks[b] = random_matrix(rng, algebra.blocks()[b]);
            algebra.element(blocks).expect("shape")
        }
        4 => {
            let blocks = algebra
                .blocks()
                .iter()
                .map(|&n| {
                    let mut m = QMatrix::zeros(n);
                    for i in 0..n {
                        m.set(i, i, gauss_int(rng, 2));
                    }
                    m
                })
                .collect();
            algebra.element(blocks).expect("shape")
        }
        _ => random_element(rng, algebra),
    }
}

pub fn random_lie_ideal<R: Rng>(rng: &mut R, algebra: &FdAlgebra) -> Result<Subspace> {
    let count = rng.random_range(1..=2);
    let gens: Vec<AlgElement> = (0..count).map(|_| random_generator(rng, algebra)).collect();
    lie_closure(algebra, &gens)
}

/// Outcome of sampled checks of "`[t,[t,L]] = 0` implies `[t,L] = 0`".
#[derive(Clone, Debug, Default)]
pub struct HersteinReport {
    pub trials: usize,
    /// Trials in which the hypothesis held.
    pub hypothesis_held: usize,
    pub counterexample: Option<(AlgElement, Subspace)>,
}

impl HersteinReport {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

pub fn herstein_property_check(algebra: &FdAlgebra, trials: usize, seed: u64) -> Result<HersteinReport> {
    let mut rng = stream_rng(seed, 0);
    let mut report = HersteinReport { trials, ..Default::default() };
    for _ in 0..trials {
        let l = random_lie_ideal(&mut rng, algebra)?;
        let t = random_generator(&mut rng, algebra);
        let basis = l.basis();
        let inner: Vec<AlgElement> = basis.iter().map(|u| t.bracket(u)).collect();
        if inner.iter().all(|c| t.bracket(c).is_zero()) {
            report.hypothesis_held += 1;
            if !inner.iter().all(AlgElement::is_zero) {
                report.counterexample = Some((t, l));
                break;
            }
        }
    }
    Ok(report)
}

/// For sampled projections `P` (nontrivial in every block of size at least
/// 2), checks that the ideal generated by `[P, A]` is `I_1`.
pub fn projection_fullness_check(algebra: &FdAlgebra, samples: usize, seed: u64) -> Result<bool> {
    let mut rng = stream_rng(seed, 0);
    let target = ideal_ik(algebra, 1);
    let full = Subspace::full(algebra);
    for _ in 0..samples {
        let blocks: Vec<QMatrix> = algebra
            .blocks()
            .iter()
            .map(|&n| {
                let r = if n == 1 { rng.random_range(0..=1) } else { rng.random_range(1..n) };
                random_projection(&mut rng, n, r)
            })
            .collect();
        let p = algebra.element(blocks)?;
        if p.mul(&p) != p || p.adjoint() != p {
            return Err(Error::Numeric("sampled projection is not a projection".into()));
        }
        let ps = Subspace::span(algebra, std::slice::from_ref(&p))?;
        let comm = commutator_space(&ps, &full)?;
        if ideal_generated(algebra, &comm.basis())? != target {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matalg::lie::{block_ideal, commutator_subspace, is_lie_ideal};

    fn blocks(b: &[usize]) -> FdAlgebra {
        FdAlgebra::new(b.to_vec()).unwrap()
    }

    #[test]
    fn nilpotents_have_exact_order() {
        let mut rng = stream_rng(3, 0);
        for n in 1..=5 {
            for k in 1..=n {
                let x = random_nilpotent(&mut rng, n, k);
                let a = FdAlgebra::matrix(n);
                let e = a.element(vec![x]).unwrap();
                assert_eq!(e.nilpotency_order(), Some(k));
            }
        }
    }

    #[test]
    fn projections_are_exact() {
        let mut rng = stream_rng(5, 0);
        for n in 1..=4 {
            for r in 0..=n {
                let p = random_projection(&mut rng, n, r);
                assert_eq!(p.mul(&p), p);
                assert_eq!(p.adjoint(), p);
                assert_eq!(p.trace(), GaussRat::from(r as i64));
            }
        }
    }

    #[test]
    fn nilpotent_span_dimensions() {
        let a = blocks(&[1, 2, 3]);
        let cfg = SamplingConfig { seed: 11, ..Default::default() };
        let (s2, p2) = nilpotent_span_matches_prediction(&a, 2, &cfg).unwrap();
        assert_eq!(s2.subspace.dim(), 11);
        assert_eq!(s2.subspace, p2);
        assert_eq!(s2.subspace, commutator_subspace(&a));
        let (s3, p3) = nilpotent_span_matches_prediction(&a, 3, &cfg).unwrap();
        assert_eq!(s3.subspace.dim(), 8);
        assert_eq!(s3.subspace, p3);
        assert!(s3.saturated && s3.samples < 2000);
        let c = blocks(&[1, 1]);
        assert!(square_zero_span(&c, &cfg).unwrap().subspace.is_zero());
        assert!(nilpotent_k_span(&a, 1, &cfg).is_err());
    }

    #[test]
    fn invariance_examples() {
        let m3 = FdAlgebra::matrix(3);
        assert!(similarity_invariance_check(&commutator_subspace(&m3), 20, 1));
        assert!(similarity_invariance_check(&Subspace::full(&m3), 20, 1));
        let m2 = FdAlgebra::matrix(2);
        let u = Subspace::span(&m2, &[m2.unit(0, 0, 1)]).unwrap();
        assert!(!similarity_invariance_check(&u, 20, 1));
    }

    #[test]
    fn herstein_and_projections() {
        for b in [&[2][..], &[3], &[1, 2, 3]] {
            let r = herstein_property_check(&blocks(b), 40, 9).unwrap();
            assert!(r.holds());
            assert!(r.hypothesis_held > 0);
        }
        assert!(projection_fullness_check(&blocks(&[2, 3]), 5, 2).unwrap());
        assert!(projection_fullness_check(&blocks(&[1]), 5, 2).unwrap());
        let a = blocks(&[1, 2]);
        assert!(projection_fullness_check(&a, 5, 2).unwrap());
        assert_eq!(ideal_ik(&a, 1), block_ideal(&a, &[1]));
    }

    #[test]
    fn random_lie_ideals_are_lie_ideals() {
        let mut rng = stream_rng(21, 0);
        let a = blocks(&[1, 2]);
        for _ in 0..20 {
            let l = random_lie_ideal(&mut rng, &a).unwrap();
            assert!(is_lie_ideal(&l));
            assert_eq!(lie_closure(&a, &l.basis()).unwrap(), l);
        }
    }
}
