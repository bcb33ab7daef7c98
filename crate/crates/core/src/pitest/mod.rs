//! Deciding whether a polynomial vanishes identically on `M_k(ℂ)`.
//!
//! Non-identities are certified by a Gaussian-integer witness whose value is
//! nonzero modulo `2^61 − 1` (hence nonzero over `ℚ(i)`). Identities are
//! decided exactly: every multihomogeneous component is multilinearized and
//! checked on all tuples of matrix units.

mod classify;
pub mod modp;
mod units;

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::freealg::{eval_poly, multihomogeneous_components, multilinearize, NcPoly, Var};
use crate::qmatrix::QMatrix;
use crate::rng::{derive_seed, stream_rng};
use modp::ModMatrix;
use units::UnitTrie;

pub use classify::{classify_range_span, sampled_range_span, RangeClassification};

/// Entries of random test matrices are `a + bi` with `a, b` in `[−BOX, BOX]`.
pub const SAMPLE_BOX: i64 = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Randomized,
}

/// Which decision procedure to run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MethodChoice {
    Exact,
    Randomized,
    /// Exact, falling back to randomized when over budget.
    #[default]
    Auto,
}

/// Matrices in `M_k` at which a polynomial does not vanish.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub k: usize,
    pub values: BTreeMap<Var, QMatrix>,
}

impl Witness {
    /// Exact value of `f` at the witness.
    pub fn evaluate(&self, f: &NcPoly) -> Result<QMatrix> {
        eval_poly(f, &self.values)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PiVerdict {
    pub is_identity: bool,
    pub method: Method,
    pub witness: Option<Witness>,
    /// Number of random trials; `None` for exact verdicts.
    pub trials: Option<u32>,
}

impl PiVerdict {
    fn identity(method: Method, trials: Option<u32>) -> Self {
        PiVerdict { is_identity: true, method, witness: None, trials }
    }

    fn refuted(method: Method, witness: Witness, trials: Option<u32>) -> Self {
        PiVerdict { is_identity: false, method, witness: Some(witness), trials }
    }
}

#[derive(Clone, Debug)]
pub struct PiConfig {
    /// Largest number of matrix-unit tuples `k^{2d}` the exact method enumerates.
    pub exact_budget: u128,
    /// Cap on the estimated trie-walk steps of one exact enumeration.
    pub work_cap: f64,
    /// Random trials for the randomized method.
    pub trials: u32,
    pub seed: u64,
    /// Random evaluations tried by the exact method before enumerating.
    pub probes: u32,
}

impl Default for PiConfig {
    fn default() -> Self {
        PiConfig { exact_budget: 2_000_000, work_cap: 1e9, trials: 50, seed: 0, probes: 3 }
    }
}

/// Random `k × k` matrix with entries from the sample box.
pub fn sample_matrix<R: Rng>(rng: &mut R, k: usize) -> QMatrix {
    let data = (0..k * k)
        .map(|_| {
            let a = rng.random_range(-SAMPLE_BOX..=SAMPLE_BOX);
            let b = rng.random_range(-SAMPLE_BOX..=SAMPLE_BOX);
            crate::freealg::GaussRat::int(a, b)
        })
        .collect();
    QMatrix::from_vec(k, data)
}

fn to_mod(values: &BTreeMap<Var, QMatrix>) -> Result<BTreeMap<Var, ModMatrix>> {
    values.iter().map(|(&v, m)| Ok((v, ModMatrix::from_qmatrix(m)?))).collect()
}

fn nonzero_mod_p(f: &NcPoly, values: &BTreeMap<Var, QMatrix>) -> Result<bool> {
    Ok(!eval_poly(f, &to_mod(values)?)?.is_zero())
}

fn sample_assignment(f: &NcPoly, k: usize, seed: u64, stream: u64) -> BTreeMap<Var, QMatrix> {
    let mut rng = stream_rng(seed, stream);
    f.variables().into_iter().map(|v| (v, sample_matrix(&mut rng, k))).collect()
}

/// Witness for a polynomial with nonzero constant term: all zero matrices.
fn constant_witness(f: &NcPoly, k: usize) -> Witness {
    let mut vars = f.variables();
    if vars.is_empty() {
        vars.push(1);
    }
    Witness { k, values: vars.into_iter().map(|v| (v, QMatrix::zeros(k))).collect() }
}

/// Replaces the values of a multilinear `f` one at a time by matrix units,
/// keeping the value nonzero modulo `p`.
fn descend_to_units(f: &NcPoly, values: &mut BTreeMap<Var, QMatrix>, k: usize) -> Result<()> {
    for v in f.variables() {
        let mut found = false;
        'units: for i in 0..k {
            for j in 0..k {
                let old = values.insert(v, QMatrix::unit(k, i, j));
                if nonzero_mod_p(f, values)? {
                    found = true;
                    break 'units;
                }
                values.insert(v, old.expect("variable assigned"));
            }
        }
        if !found {
            return Err(Error::Numeric("matrix-unit descent lost the nonzero value".into()));
        }
    }
    Ok(())
}

/// Turns a nonvanishing tuple for the multilinearization of `comp` into a
/// witness for `f` itself.
fn lift_witness(
    f: &NcPoly,
    comp: &NcPoly,
    origin: &BTreeMap<Var, Var>,
    units: &BTreeMap<Var, QMatrix>,
    k: usize,
    seed: u64,
) -> Result<Witness> {
    // Nonempty subset sums of the copies of each variable (inclusion–exclusion).
    let mut copies: BTreeMap<Var, Vec<&QMatrix>> = BTreeMap::new();
    for (fresh, m) in units {
        copies.entry(origin[fresh]).or_default().push(m);
    }
    let groups: Vec<(Var, Vec<&QMatrix>)> = copies.into_iter().collect();
    let radices: Vec<u64> = groups.iter().map(|(_, c)| (1u64 << c.len()) - 1).collect();
    let total: u64 = radices.iter().product();
    let mut chosen = None;
    for mut code in 0..total {
        let mut assign = BTreeMap::new();
        for ((v, c), r) in groups.iter().zip(&radices) {
            let mask = code % r + 1;
            code /= r;
            let mut x = QMatrix::zeros(k);
            for (b, m) in c.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    x = x.add(m);
                }
            }
            assign.insert(*v, x);
        }
        if nonzero_mod_p(comp, &assign)? {
            chosen = Some(assign);
            break;
        }
    }
    let base = chosen.ok_or_else(|| Error::Numeric("subset sums all vanished".into()))?;
    let mut full = base.clone();
    for v in f.variables() {
        full.entry(v).or_insert_with(|| QMatrix::zeros(k));
    }
    if nonzero_mod_p(f, &full)? {
        return Ok(Witness { k, values: full });
    }
    // Separate the component from the others by scaling each variable.
    let mut rng = stream_rng(derive_seed(seed, "lift"), 0);
    for _ in 0..64 {
        let mut scaled = full.clone();
        for m in scaled.values_mut() {
            let lam = crate::freealg::GaussRat::from(rng.random_range(1..=1_000_000i64));
            *m = m.scale(&lam);
        }
        if nonzero_mod_p(f, &scaled)? {
            return Ok(Witness { k, values: scaled });
        }
    }
    Err(Error::Numeric("could not separate multihomogeneous component".into()))
}

/// Exact decision of whether `f` is an identity on `M_k(ℂ)`.
///
/// Every polynomial is an identity on `M_0`. Fails with
/// [`Error::BudgetExceeded`] when exhaustive enumeration would be too large.
pub fn is_identity_exact(f: &NcPoly, k: usize, cfg: &PiConfig) -> Result<PiVerdict> {
    if k == 0 || f.is_zero() {
        return Ok(PiVerdict::identity(Method::Exact, None));
    }
    if !f.constant_term().is_zero() {
        return Ok(PiVerdict::refuted(Method::Exact, constant_witness(f, k), None));
    }
    let probe_seed = derive_seed(cfg.seed, "exact-probe");
    for probe in 0..cfg.probes as u64 {
        let mut values = sample_assignment(f, k, probe_seed, probe);
        if nonzero_mod_p(f, &values)? {
            let cost = f.variables().len() as f64 * (k * k) as f64 * f.num_terms() as f64;
            if f.is_multilinear() && f.is_multihomogeneous() && cost <= 2e7 {
                descend_to_units(f, &mut values, k)?;
            }
            return Ok(PiVerdict::refuted(Method::Exact, Witness { k, values }, None));
        }
    }

    let mut prepared = Vec::new();
    for (_, comp) in multihomogeneous_components(f) {
        let needed = (k as u128).checked_pow(2 * comp.degree() as u32).unwrap_or(u128::MAX);
        if needed > cfg.exact_budget {
            return Err(Error::BudgetExceeded { needed, budget: cfg.exact_budget });
        }
        let (lin, origin) = if comp.is_multilinear() {
            let origin = comp.variables().into_iter().map(|v| (v, v)).collect();
            (comp.clone(), origin)
        } else {
            let m = multilinearize(&comp)?;
            (m.poly, m.origin)
        };
        let trie = UnitTrie::new(&lin)?;
        let needed = trie.tuple_count(k).unwrap_or(u128::MAX);
        if needed > cfg.exact_budget || trie.work_estimate(k) > cfg.work_cap {
            return Err(Error::BudgetExceeded { needed, budget: cfg.exact_budget });
        }
        prepared.push((comp, origin, trie));
    }
    for (comp, origin, trie) in &prepared {
        if let Some(units) = trie.find_nonvanishing(k) {
            let values: BTreeMap<Var, QMatrix> = trie
                .vars()
                .iter()
                .zip(units)
                .map(|(&v, (i, j))| (v, QMatrix::unit(k, i, j)))
                .collect();
            let witness = if comp.is_multilinear() && comp == f {
                Witness { k, values }
            } else {
                lift_witness(f, comp, origin, &values, k, cfg.seed)?
            };
            return Ok(PiVerdict::refuted(Method::Exact, witness, None));
        }
    }
    Ok(PiVerdict::identity(Method::Exact, None))
}

/// One-sided randomized test: a nonzero value refutes, `trials` zero values
/// are reported as an identity.
pub fn is_identity_randomized(f: &NcPoly, k: usize, trials: u32, seed: u64) -> Result<PiVerdict> {
    if k == 0 || trials == 0 {
        return Err(Error::InvalidArgument("randomized test needs k ≥ 1 and trials ≥ 1".into()));
    }
    if f.is_zero() {
        return Ok(PiVerdict::identity(Method::Randomized, Some(trials)));
    }
    if f.is_constant() {
        return Ok(PiVerdict::refuted(Method::Randomized, constant_witness(f, k), Some(trials)));
    }
    let found = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let values = sample_assignment(f, k, seed, t);
            nonzero_mod_p(f, &values).map(|nz| nz.then_some(values))
        })
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        });
    match found {
        None => Ok(PiVerdict::identity(Method::Randomized, Some(trials))),
        Some(Err(e)) => Err(e),
        Some(Ok(values)) => Ok(PiVerdict::refuted(
            Method::Randomized,
            Witness { k, values: values.expect("nonzero trial") },
            Some(trials),
        )),
    }
}

/// Runs the chosen method; `Auto` falls back to randomized on budget overrun.
pub fn is_identity(f: &NcPoly, k: usize, choice: MethodChoice, cfg: &PiConfig) -> Result<PiVerdict> {
    match choice {
        MethodChoice::Exact => is_identity_exact(f, k, cfg),
        MethodChoice::Randomized => is_identity_randomized(f, k.max(1), cfg.trials, cfg.seed)
            .map(|v| if k == 0 { PiVerdict::identity(Method::Randomized, Some(cfg.trials)) } else { v }),
        MethodChoice::Auto => match is_identity_exact(f, k, cfg) {
            Err(Error::BudgetExceeded { .. }) => is_identity_randomized(f, k, cfg.trials, cfg.seed),
            other => other,
        },
    }
}

/// Largest `k ≤ k_max` such that `f` is an identity on `M_k(ℂ)`.
///
/// Identities on `M_k` are identities on every `M_j`, `j ≤ k`, so the scan
/// stops at the first failure.
pub fn largest_identity_k(f: &NcPoly, k_max: usize, choice: MethodChoice, cfg: &PiConfig) -> Result<usize> {
    if f.is_constant() {
        return Err(Error::ConstantPolynomial);
    }
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be at least 1".into()));
    }
    for k in 1..=k_max {
        if !is_identity(f, k, choice, cfg)?.is_identity {
            return Ok(k - 1);
        }
    }
    Ok(k_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::{nested_commutator_poly, parse_poly, standard_poly};

    fn cfg() -> PiConfig {
        PiConfig::default()
    }

    fn is_unit(m: &QMatrix) -> bool {
        let ones = m.data().iter().filter(|c| c.is_one()).count();
        ones == 1 && m.data().iter().all(|c| c.is_zero() || c.is_one())
    }

    #[test]
    fn standard_poly_examples() {
        let s4 = standard_poly(4).unwrap();
        assert!(is_identity_exact(&s4, 2, &cfg()).unwrap().is_identity);
        let v = is_identity_exact(&s4, 3, &cfg()).unwrap();
        assert!(!v.is_identity);
        let w = v.witness.unwrap();
        assert_eq!(w.values.len(), 4);
        assert!(w.values.values().all(is_unit));
        assert!(!w.evaluate(&s4).unwrap().is_zero());
        assert_eq!(v.trials, None);
    }

    #[test]
    fn nested_commutator_examples() {
        let p2 = nested_commutator_poly(2).unwrap();
        assert!(is_identity_exact(&p2, 1, &cfg()).unwrap().is_identity);
        let v = is_identity_exact(&p2, 2, &cfg()).unwrap();
        assert!(!v.is_identity);
        assert!(!v.witness.unwrap().evaluate(&p2).unwrap().is_zero());
    }

    #[test]
    fn zero_size_convention() {
        let x1 = parse_poly("x1").unwrap();
        assert!(is_identity_exact(&x1, 0, &cfg()).unwrap().is_identity);
    }

    #[test]
    fn constants_and_zero() {
        let c = parse_poly("2").unwrap();
        let v = is_identity_exact(&c, 2, &cfg()).unwrap();
        assert!(!v.is_identity);
        assert!(!v.witness.unwrap().evaluate(&c).unwrap().is_zero());
        assert!(is_identity_randomized(&NcPoly::zero(), 3, 5, 1).unwrap().is_identity);
    }

    #[test]
    fn non_multilinear_identity_and_lift() {
        // [x1^2, x2] is not an identity on M_2; [x1,x2]^2 commutes with everything on M_2.
        let f = parse_poly("[x1^2, x2]").unwrap();
        let v = is_identity_exact(&f, 2, &cfg()).unwrap();
        assert!(!v.witness.unwrap().evaluate(&f).unwrap().is_zero());
        let hall = parse_poly("[[x1,x2]^2, x3]").unwrap();
        assert!(is_identity_exact(&hall, 2, &cfg()).unwrap().is_identity);
        assert!(!is_identity_exact(&hall, 3, &cfg()).unwrap().is_identity);
    }

    #[test]
    fn lift_through_inclusion_exclusion() {
        // Zero probes force enumeration; the component witness then needs lifting.
        let f = parse_poly("[x1^2, x2] + x3 x3 x3").unwrap();
        let strict = PiConfig { probes: 0, ..cfg() };
        let v = is_identity_exact(&f, 2, &strict).unwrap();
        let w = v.witness.unwrap();
        assert!(!w.evaluate(&f).unwrap().is_zero());
    }

    #[test]
    fn budget_is_reported() {
        let s8 = standard_poly(8).unwrap();
        let tight = PiConfig { probes: 0, ..cfg() };
        assert!(matches!(is_identity_exact(&s8, 4, &tight), Err(Error::BudgetExceeded { .. })));
        let v = is_identity(&s8, 4, MethodChoice::Auto, &PiConfig { trials: 5, ..tight }).unwrap();
        assert_eq!(v.method, Method::Randomized);
        assert!(v.is_identity);
    }

    #[test]
    fn randomized_refutes_with_checked_witness() {
        let s4 = standard_poly(4).unwrap();
        let v = is_identity_randomized(&s4, 3, 10, 42).unwrap();
        assert!(!v.is_identity);
        assert!(!v.witness.unwrap().evaluate(&s4).unwrap().is_zero());
        let again = is_identity_randomized(&s4, 3, 10, 42).unwrap();
        assert_eq!(again.is_identity, v.is_identity);
        assert!(is_identity_randomized(&s4, 2, 20, 42).unwrap().is_identity);
    }

    #[test]
    fn largest_k_examples() {
        let c = cfg();
        assert_eq!(largest_identity_k(&standard_poly(6).unwrap(), 4, MethodChoice::Exact, &c).unwrap(), 3);
        assert_eq!(largest_identity_k(&nested_commutator_poly(3).unwrap(), 3, MethodChoice::Exact, &c).unwrap(), 1);
        assert_eq!(largest_identity_k(&parse_poly("x1").unwrap(), 3, MethodChoice::Exact, &c).unwrap(), 0);
        assert!(matches!(
            largest_identity_k(&parse_poly("4").unwrap(), 3, MethodChoice::Exact, &c),
            Err(Error::ConstantPolynomial)
        ));
    }
}
