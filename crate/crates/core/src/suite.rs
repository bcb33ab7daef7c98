//! Seeded verification suite: every acceptance criterion and every stated
//! invariant as a named case with a deterministic report.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::decomp::{
    self, bracket, commutator_to_square_zeros, divisibility_to_commutator_sum, idempotent_to_projections,
    nilpotency_order_at_scale, nilpotent_to_commutators, op_norm, sandwich_product_of_commutators, verify,
    CMatrix, CertTerm, NumConfig, TermForm,
};
use crate::error::Result;
use crate::freealg::{
    cyclic_canonical_form, eval_poly, eval_seq, is_cyclically_zero, multilinearize,
    nested_commutator_poly, parse_poly, sandwich_terms, standard_poly, verify_sandwich_identity, GaussRat, Limits,
    NcPoly, Var, Word,
};
use crate::matalg::{
    center, classify_in_matrix_algebra, commutator_subspace, bracket_ideal_containment_check, herstein_property_check,
    ideal_commutator, ideal_ik, ideal_of_commutators_check, is_lie_ideal, lie_closure, nilpotent_k_span,
    nilpotent_span_matches_prediction, projection_fullness_check, random_element, random_generator, random_lie_ideal,
    similarity_invariance_check, FdAlgebra, SamplingConfig, Subspace,
};
use crate::pitest::{
    classify_range_span, is_identity_exact, is_identity_randomized, largest_identity_k, MethodChoice, PiConfig,
    PiVerdict,
};
use crate::qmatrix::QMatrix;
use crate::rng::{derive_seed, stream_rng};

/// Settings shared by every case.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Numeric certificate tolerance.
    pub tol: f64,
    /// Trials for randomized identity tests.
    pub trials: u32,
    pub exact_budget: u128,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 0, tol: 1e-8, trials: 50, exact_budget: 2_000_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    pub name: String,
    /// The statement the case checks.
    pub statement: String,
    /// Hex digest of the case's inputs description.
    pub inputs_digest: String,
    pub seed: u64,
    pub verdict: Verdict,
    pub detail: String,
}

impl CaseReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// `PASS name: detail` (or `FAIL …`).
    pub fn line(&self) -> String {
        let v = if self.passed() { "PASS" } else { "FAIL" };
        format!("{v} {}: {}", self.name, self.detail)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub passed: usize,
    pub failed: usize,
    pub cases: Vec<CaseReport>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

struct Ctx {
    seed: u64,
    cfg: SuiteConfig,
}

impl Ctx {
    fn pi(&self) -> PiConfig {
        PiConfig { exact_budget: self.cfg.exact_budget, trials: self.cfg.trials, seed: self.seed, ..PiConfig::default() }
    }

    fn num(&self) -> NumConfig {
        NumConfig { tol: self.cfg.tol, ..NumConfig::default() }
    }

    fn sampling(&self, label: &str) -> SamplingConfig {
        SamplingConfig { seed: derive_seed(self.seed, label), ..SamplingConfig::default() }
    }
}

/// Collects failed requirements and summary notes for one case.
#[derive(Default)]
struct Check {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Check {
    fn require(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok && self.failures.len() < 5 {
            self.failures.push(what());
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn finish(self) -> (Verdict, String) {
        if self.failures.is_empty() {
            (Verdict::Pass, self.notes.join("; "))
        } else {
            (Verdict::Fail, self.failures.join("; "))
        }
    }
}

type Runner = fn(&Ctx, &mut Check) -> Result<()>;

struct Case {
    name: &'static str,
    statement: &'static str,
    inputs: &'static str,
    run: Runner,
}

const CASES: &[Case] = &[
    Case {
        name: "a01_standard_ladder",
        statement: "s_2k is a polynomial identity of minimal degree on M_k",
        inputs: "s(2k) on M_k and M_(k+1): k=1..3 exact with matrix-unit witnesses, k=4,5 randomized",
        run: standard_ladder,
    },
    Case {
        name: "a02_pi_ladder",
        statement: "pi_k is an identity on C but not on M_2",
        inputs: "largest_identity_k(pi(k), 3) exact, k=1..4",
        run: pi_ladder,
    },
    Case {
        name: "a03_nilpotent_spans",
        statement: "Lin(N_k) = [I_(k-1), A]",
        inputs: "blocks (1,2,3), orders 2 and 3, at most 2000 samples",
        run: nilpotent_spans,
    },
    Case {
        name: "a04_range_classification",
        statement: "Lin(f(A)) = [I_k, A] with k the largest identity size of f",
        inputs: "f in {s(4), pi(2), s(6)} on blocks (1,2,3) and (2,2,4)",
        run: range_classification,
    },
    Case {
        name: "a05_lie_ideal_invariance",
        statement: "closed subspaces invariant under (1+x)U(1-x) for square-zero x are the Lie ideals",
        inputs: "500 random subspaces of M_2, M_3; 500 Lie closures per M_n, n=2..4",
        run: lie_ideal_invariance,
    },
    Case {
        name: "a06_herstein",
        statement: "[t,[t,L]] = 0 implies [t,L] = 0 for Lie ideals L",
        inputs: "200 trials on each of M_2, M_3, blocks (1,2,3)",
        run: herstein,
    },
    Case {
        name: "a07_sandwich_identity",
        statement: "x[l,m]y = [xyl,m] - [xy,m]l + [xm,[y,l]] - [x,[y,l]]m + [xl,[m,y]] - [x,[m,y]]l",
        inputs: "free expansion; 50 random complex M_3 quadruples",
        run: sandwich_identity,
    },
    Case {
        name: "a08_aluthge_nilpotents",
        statement: "a nilpotent of order k is a sum of k-1 commutators",
        inputs: "100 random nilpotents of each order k=2..5 in M_5",
        run: aluthge_nilpotents,
    },
    Case {
        name: "a09_idempotent_projections",
        statement: "an idempotent is a linear combination of four projections",
        inputs: "100 random idempotents in M_2..M_5 with norm at most 10",
        run: idempotent_projections,
    },
    Case {
        name: "a10_five_square_zeros",
        statement: "[a,x] with x square-zero is a sum of five square-zero elements",
        inputs: "1000 random (x, a) pairs in M_2..M_5",
        run: five_square_zeros,
    },
    Case {
        name: "a11_divisibility_fixtures",
        statement: "1 = sum d_i* x_i* x_i d_i gives a = sum [a_i,b_i] + sum [c_i,d_i][c_i',d_i']",
        inputs: "bundled M_2 and M_3 witnesses, 100 random targets each",
        run: divisibility_fixtures,
    },
    Case {
        name: "a12_cyclic_soundness",
        statement: "f - g is a sum of commutators iff cyclic forms agree",
        inputs: "1000 random (f, g_i, h_i) of degree at most 5; s(2), s(4), s(6)",
        run: cyclic_soundness,
    },
    Case {
        name: "inv_parse_roundtrip",
        statement: "parse(print(f)) = f",
        inputs: "300 random polynomials of degree at most 5",
        run: parse_roundtrip,
    },
    Case {
        name: "inv_bracket_laws",
        statement: "the polynomial bracket is bilinear, antisymmetric and satisfies Jacobi",
        inputs: "100 random triples of degree at most 4",
        run: bracket_laws,
    },
    Case {
        name: "inv_multilinearize_collapse",
        statement: "collapsing the multilinearization of f gives c*f",
        inputs: "200 random multihomogeneous polynomials of degree at most 5",
        run: multilinearize_collapse,
    },
    Case {
        name: "inv_eval_homomorphism",
        statement: "evaluation is a ring homomorphism",
        inputs: "200 random (f, g) at random 2x2 and 3x3 Gaussian-integer matrices",
        run: eval_homomorphism,
    },
    Case {
        name: "inv_exact_randomized_agree",
        statement: "exact and randomized identity tests agree and witnesses evaluate nonzero",
        inputs: "s(2), s(3), s(4), pi(2), [x1,x2]^2, x1x2x1-x1x1x2 on M_1..M_3",
        run: exact_randomized_agree,
    },
    Case {
        name: "inv_permutation_invariance",
        statement: "identity verdicts of multilinear polynomials are unchanged by permuting variables",
        inputs: "30 random multilinear polynomials of degree 3 and 4 on M_1, M_2",
        run: permutation_invariance,
    },
    Case {
        name: "inv_corner_monotonicity",
        statement: "a witness on M_j embedded in a corner of M_k stays a witness",
        inputs: "s(2), s(4), pi(2), x1^2 embedded up to M_4",
        run: corner_monotonicity,
    },
    Case {
        name: "inv_lie_closure",
        statement: "lie_closure is idempotent, monotone and yields Lie ideals",
        inputs: "40 random generator sets on M_2, M_3, (1,2), (1,2,3)",
        run: lie_closure_laws,
    },
    Case {
        name: "inv_ideal_chains",
        statement: "I_1 ⊇ I_2 ⊇ ... and [I_j,A] ⊆ [I_k,A] for j ≥ k",
        inputs: "blocks (1,2,3), (2,2,4), (1,1,2), (3)",
        run: ideal_chains,
    },
    Case {
        name: "inv_center_split",
        statement: "the center and the span of commutators are complementary",
        inputs: "blocks (1,2,3), (2,2,4), (1,1,2), (3), (1)",
        run: center_split,
    },
    Case {
        name: "inv_ideal_of_commutators",
        statement: "the ideal generated by [L,A] is [L,A] + [L,A][L,A], and A[L,L]A ⊆ L + LL",
        inputs: "30 random Lie ideals per algebra in M_2, M_3, (1,2), (1,2,3)",
        run: ideal_of_commutators,
    },
    Case {
        name: "inv_projection_fullness",
        statement: "the ideal generated by [P,A] for a full projection P is I_1",
        inputs: "20 random projections per algebra in M_2, (1,2,3), (2,3)",
        run: projection_fullness,
    },
    Case {
        name: "inv_certificate_verification",
        statement: "certificates verify from raw matrices and tampering is detected",
        inputs: "one certificate of each kind, perturbed by 1e-3",
        run: certificate_verification,
    },
    Case {
        name: "inv_aluthge_order_decrease",
        statement: "each Aluthge step strictly lowers the nilpotency order",
        inputs: "25 random nilpotents of each order k=2..5 in M_5",
        run: aluthge_order_decrease,
    },
    Case {
        name: "inv_scale_covariance",
        statement: "decompositions are linear in the target",
        inputs: "random complex scalars on every construction in M_3",
        run: scale_covariance,
    },
    Case {
        name: "inv_determinism",
        statement: "same seed and inputs give identical results",
        inputs: "nilpotent span, randomized witness, certificate JSON, each computed twice",
        run: determinism,
    },
];

/// Names of every case, in report order.
pub fn case_names() -> Vec<&'static str> {
    let mut names: Vec<&str> = CASES.iter().map(|c| c.name).collect();
    names.sort_unstable();
    names
}

fn digest(text: &str) -> String {
    format!("{:016x}", derive_seed(0, text))
}

fn run_one(case: &Case, cfg: &SuiteConfig) -> CaseReport {
    let seed = derive_seed(cfg.seed, case.name);
    let ctx = Ctx { seed, cfg: cfg.clone() };
    let mut check = Check::default();
    let (verdict, detail) = match (case.run)(&ctx, &mut check) {
        Ok(()) => check.finish(),
        Err(e) => (Verdict::Fail, format!("error: {e}")),
    };
    CaseReport {
        name: case.name.to_string(),
        statement: case.statement.to_string(),
        inputs_digest: digest(case.inputs),
        seed,
        verdict,
        detail,
    }
}

/// Runs one case by exact name.
pub fn run_case(name: &str, cfg: &SuiteConfig) -> Option<CaseReport> {
    CASES.iter().find(|c| c.name == name).map(|c| run_one(c, cfg))
}

/// Runs every case whose name contains `filter` (all when `None`), in
/// parallel, and reports them sorted by name.
pub fn run_suite(cfg: &SuiteConfig, filter: Option<&str>) -> SuiteReport {
    let selected: Vec<&Case> = CASES.iter().filter(|c| filter.is_none_or(|f| c.name.contains(f))).collect();
    let mut cases: Vec<CaseReport> = selected.par_iter().map(|c| run_one(c, cfg)).collect();
    cases.sort_by(|a, b| a.name.cmp(&b.name));
    let passed = cases.iter().filter(|c| c.passed()).count();
    SuiteReport { seed: cfg.seed, passed, failed: cases.len() - passed, cases }
}

// ---- helpers ----

fn poly(text: &str) -> Result<NcPoly> {
    parse_poly(text)
}

fn small_coeff<R: Rng>(rng: &mut R) -> GaussRat {
    let c = GaussRat::int(rng.random_range(-4..=4), rng.random_range(-4..=4));
    &c * &GaussRat::ratio(1, rng.random_range(1..=3))
}

/// Random polynomial in `x1..x_vars` with words of length at most `max_len`.
fn random_poly<R: Rng>(rng: &mut R, vars: Var, max_len: usize, max_terms: usize) -> NcPoly {
    let terms = rng.random_range(0..=max_terms);
    NcPoly::from_terms((0..terms).map(|_| {
        let len = rng.random_range(0..=max_len);
        let w: Vec<Var> = (0..len).map(|_| rng.random_range(1..=vars)).collect();
        (Word::from_slice(&w), small_coeff(rng))
    }))
}

/// Random multihomogeneous polynomial: shuffles of one multiset of letters.
fn random_multihomogeneous<R: Rng>(rng: &mut R, max_deg: usize) -> NcPoly {
    let deg = rng.random_range(1..=max_deg);
    let letters: Vec<Var> = (0..deg).map(|_| rng.random_range(1..=3)).collect();
    let terms = rng.random_range(1..=4);
    NcPoly::from_terms((0..terms).map(|_| {
        let mut w = letters.clone();
        w.shuffle(rng);
        (Word::from_slice(&w), small_coeff(rng))
    }))
}

fn random_qmatrix<R: Rng>(rng: &mut R, n: usize) -> QMatrix {
    QMatrix::from_vec(n, (0..n * n).map(|_| GaussRat::int(rng.random_range(-3..=3), rng.random_range(-3..=3))).collect())
}

fn is_matrix_unit(m: &QMatrix) -> bool {
    let nonzero: Vec<&GaussRat> = m.data().iter().filter(|c| !c.is_zero()).collect();
    nonzero.len() == 1 && *nonzero[0] == GaussRat::ONE
}

fn witness_value_nonzero(f: &NcPoly, v: &PiVerdict) -> Result<bool> {
    match &v.witness {
        Some(w) => Ok(!w.evaluate(f)?.is_zero()),
        None => Ok(false),
    }
}

fn scalar<R: Rng>(rng: &mut R) -> Complex64 {
    loop {
        let z = Complex64::new(rng.random_range(-3.0..=3.0), rng.random_range(-3.0..=3.0));
        if z.norm() > 0.1 {
            return z;
        }
    }
}

fn algebra(blocks: &[usize]) -> FdAlgebra {
    FdAlgebra::new(blocks.to_vec()).expect("valid block sizes")
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

// ---- acceptance criteria ----

fn standard_ladder(ctx: &Ctx, ck: &mut Check) -> Result<()> {
    let pi = ctx.pi();
    for k in 1..=3usize {
        let f = standard_poly(2 * k)?;
        let (res, elapsed) = timed(|| -> Result<(PiVerdict, PiVerdict)> {
            Ok((is_identity_exact(&f, k, &pi)?, is_identity_exact(&f, k + 1, &pi)?))
        });
        let (on_k, on_next) = res?;
        ck.require(on_k.is_identity, || format!("s{} not an identity on M{k}", 2 * k));
        ck.require(!on_next.is_identity, || format!("s{} reported an identity on M{}", 2 * k, k + 1));
        let units = on_next.witness.as_ref().is_some_and(|w| w.values.values().all(is_matrix_unit));
        ck.require(units, || format!("witness for s{} on M{} is not made of matrix units", 2 * k, k + 1));
        ck.require(witness_value_nonzero(&f, &on_next)?, || format!("witness for s{} evaluates to zero", 2 * k));
        ck.require(elapsed < Duration::from_secs(60), || format!("exact k={k} took {elapsed:?}"));
        let largest = largest_identity_k(&f, k + 1, MethodChoice::Exact, &pi)?;
        ck.require(largest == k, || format!("largest_identity_k(s{}) = {largest}", 2 * k));
    }
    for k in 4..=5usize {
        let f = standard_poly(2 * k)?;
        let on_k = is_identity_randomized(&f, k, ctx.cfg.trials, derive_seed(ctx.seed, "on-k"))?;
        ck.require(on_k.is_identity, || format!("randomized: s{} refuted on M{k}", 2 * k));
        let on_next = is_identity_randomized(&f, k + 1, ctx.cfg.trials, derive_seed(ctx.seed, "on-next"))?;
        ck.require(!on_next.is_identity, || format!("randomized: s{} not refuted on M{}", 2 * k, k + 1));
        let rechecked = match &on_next.witness {
            Some(w) => {
                let modp: BTreeMap<Var, _> = w
                    .values
                    .iter()
                    .map(|(&v, m)| Ok((v, crate::pitest::modp::ModMatrix::from_qmatrix(m)?)))
                    .collect::<Result<_>>()?;
                !eval_poly(&f, &modp)?.is_zero()
            }
            None => false,
        };
        ck.require(rechecked, || format!("randomized witness for s{} does not re-evaluate nonzero", 2 * k));
    }
    ck.note(format!("s2,s4,s6 exact; s8,s10 randomized with {} trials", ctx.cfg.trials));
    Ok(())
}

fn pi_ladder(ctx: &Ctx, ck: &mut Check) -> Result<()> {
    let pi = ctx.pi();
    for k in 1..=4usize {
        let f = nested_commutator_poly(k)?;
        let got = largest_identity_k(&f, 3, MethodChoice::Exact, &pi)?;
        ck.require(got == 1, || format!("largest_identity_k(pi{k}) = {got}"));
    }
    ck.note("largest k = 1 for pi1..pi4");
    Ok(())
}

fn nilpotent_spans(ctx: &Ctx, ck: &mut Check) -> Result<()> {
    let a = algebra(&[1, 2, 3]);
    for (k, dim) in [(2usize, 11usize), (3, 8)] {
        let cfg = ctx.sampling(&format!("nil{k}"));
        let (sampled, predicted) = nilpotent_span_matches_prediction(&a, k, &cfg)?;
        ck.require(sampled.saturated, || format!("order {k}: not saturated within {} samples", cfg.max_samples));
        ck.require(sampled.subspace == predicted, || {
            format!("order {k}: sampled dim {} vs predicted {}", sampled.subspace.dim(), predicted.dim())
        });
        ck.require(predicted.dim() == dim, || format!("order {k}: predicted dim {}", predicted.dim()));
        let again = nilpotent_k_span(&a, k, &cfg)?;
        ck.require(again == sampled, || format!("order {k}: rerun with the same seed differs"));
        ck.note(format!("k={k}: dim {} after {} samples", sampled.subspace.dim(), sampled.samples));
    }
    Ok(())
}

fn range_classification(ctx: &Ctx, ck: &mut Check) -> Result<()> {
    let pi = ctx.pi();
    let polys = [("s(4)", standard_poly(4)?), ("pi(2)", nested_commutator_poly(2)?), ("s(6)", standard_poly(6)?)];
    for blocks in [[1usize, 2, 3], [2, 2, 4]] {
        let a = algebra(&blocks);
        for (name, f) in &polys {
            let cfg = ctx.sampling(&format!("{name}{a}"));
            let r = classify_range_span(f, &a, MethodChoice::Exact, &pi, Some(&cfg))?;
            let s = r.sampled.as_ref().expect("sampling requested");
            ck.require(r.agrees() == Some(true), || {
                format!("{name} on {a}: predicted dim {} vs sampled {}", r.predicted.dim(), s.subspace.dim())
            });
            ck.require(s.saturated, || format!("{name} on {a}: sampling did not saturate"));
            ck.note(format!("{name} on {a}: k={} dim {}", r.k, r.predicted.dim()));
        }
    }
    Ok(())
}

fn lie_ideal_invariance(ctx: &Ctx, ck: &mut Check) -> Result<()> {
    let mut rng = stream_rng(ctx.seed, 0);
    let (mut ideals, mut others) = (0, 0);
    for i in 0..500u64 {
        let a = FdAlgebra::matrix(if i % 2 == 0 { 2 } else { 3 });
        let u = match rng.random_range(0..3) {
            0 => random_lie_ideal(&mut rng, &a)?,
            1 => {
                let count = rng.random_range(1..=3);
                let gens: Vec<_> = (0..count).map(|_| random_generator(&mut rng, &a)).collect();
                Subspace::span(&a, &gens)?
            }
            _ => {
                let count = rng.random_range(1..a.dim());
                let gens: Vec<_> = (0..count).map(|_| random_element(&mut rng, &a)).collect();
                Subspace::span(&a, &gens)?
            }
        };
        let lie = is_lie_ideal(&u);
        if lie {
            ideals += 1;
        } else {
            others += 1;
        }
        let invariant = similarity_invariance_check(&u, 24, derive_seed(ctx.seed, &format!("sim{i}")));
        ck.require(lie == invariant, || format!("subspace {i} of dim {}: lie={lie}, invariant={invariant}", u.dim()));
    }
    ck.require(ideals > 0 && others > 0, || format!("sample lacks variety: {ideals} ideals, {others} others"));
    for n in 2..=4 {
        let a = FdAlgebra::matrix(n);
        let mut kinds = BTreeMap::new();
        for _ in 0..500 {
            let l = random_lie_ideal(&mut rng, &a)?;
            match classify_in_matrix_algebra(&l) {
                Some(kind) => *kinds.entry(format!("{kind:?}")).or_insert(0) += 1,
                None => ck.require(false, || format!("M{n}: closure of dim {} is not one of the four", l.dim())),
            }
        }
        ck.note(format!("M{n}: {kinds:?}"));
    }
    ck.note(format!("{ideals} Lie ideals, {others} non-ideals"));
    Ok(())
}

fn herstein(ctx: &Ctx, ck: &mut Check) -> Result<()> {
    for blocks in [vec![2], vec![3], vec![1, 2, 3]] {
        let a = algebra(&blocks);
        let r = herstein_property_check(&a, 200, derive_seed(ctx.seed, &a.to_string()))?;
        ck.require(r.holds(), || format!("counterexample on {a}"));
        ck.note(format!("{a}: hypothesis held in {}/{}", r.hypothesis_held, r.trials));
    }
    Ok(())
}

fn sandwich_identity(ctx: &Ctx, ck: &mut Check) -> Result<()> {
    ck.require(verify_sandwich_identity(), || "free expansion differs".into());
    let [x, l, m, y] = [1, 2, 3, 4].map(NcPoly::var);
    let lhs = &(&x * &l.bracket(&m)) * &y;
    let terms = sandwich_terms(&x, &l, &m, &y);
    let mut rng = stream_rng(ctx.seed, 0);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let mats: Vec<CMatrix> = (0..4).map(|_| decomp::sample::random_matrix(&mut rng, 3)).collect();
        let want = eval_seq(&lhs, &mats)?;
        let mut got = decomp::zeros(3);
        for t in &terms {
            got += eval_seq(t, &mats)?;
        }
        worst = worst.max(op_norm(&(got - want)));
    }
    ck.require(worst <= 1e-12, || format!("numeric residual {worst:e}"));
    ck.note(format!("max residual {worst:.1e}"));
    Ok(())
}

fn aluthge_nilpotents(ctx: &Ctx, ck: &mut Check) -> Result<()> {
    let num = ctx.num();
    let start = Instant::now();
    let mut worst = 0.0f64;
    for k in 2..=5usize {
        let mut rng = stream_rng(ctx.seed, k as u64);
        for i in 0..100 {
            let x = decomp::sample::random_nilpotent(&mut rng, 5, k);
            let cert = nilpotent_to_commutators(&x, k, &num)?;
            let v = verify(&cert, &x);
            worst = worst.max(v.residual);
            ck.require(v.term_count == k - 1, || format!("k={k} #{i}: {} terms", v.term_count));
            ck.require(v.residual <= 1e-8, || format!("k={k} #{i}: residual {:e}", v.residual));
        }
    }
    let elapsed = start.elapsed();
    ck.require(elapsed < Duration::from_secs(30), || format!("took {elapsed:?}"));
    ck.note(format!("400 certificates, max residual {worst:.1e}"));
    Ok(())
}

fn idempotent_projections(ctx: &Ctx, ck: &mut Check) -> Result<()> {
    let num = ctx.num();
    let mut rng = stream_rng(ctx.seed, 0);
    let (mut worst_res, mut worst_side) = (0.0f64, 0.0f64);
    for i in 0..100 {
        let n = 2 + i % 4;
        let e = decomp::sample::random_idempotent(&mut rng, n, 10.0);
        ck.require(op_norm(&e) <= 10.0 + 1e-9, || format!("#{i}: sampled norm {}", op_norm(&e)));
        let cert = idempotent_to_projections(&e, &num)?;
        let v = verify(&cert, &e);
        worst_res = worst_res.max(v.residual);
        worst_side = worst_side.max(v.side_violation);
        ck.require(v.term_count <= 4, || format!("#{i}: {} terms", v.term_count));
        ck.require(v.residual <= 1e-8, || format!("#{i}: residual {:e}", v.residual));
        ck.require(v.side_violation <= 1e-10, || format!("#{i}: projection defect {:e}", v.side_violation));
    }
    ck.note(format!("max residual {worst_res:.1e}, max projection defect {worst_side:.1e}"));
    Ok(())
}

fn five_square_zeros(ctx: &Ctx, ck: &mut Check) -> Result<()> {
    let num = ctx.num();
    let mut rng = stream_rng(ctx.seed, 0);
    let (mut worst_res, mut worst_side) = (0.0f64, 0.0f64);
    for i in 0..1000 {
        let n = 2 + i % 4;
        let x = decomp::sample::random_square_zero(&mut rng, n);
        let a = decomp::sample::random_matrix(&mut rng, n);
        let cert = commutator_to_square_zeros(&x, &a, &num)?;
        let v = verify(&cert, &bracket(&a, &x));
        worst_res = worst_res.max(v.residual);
        worst_side = worst_side.max(v.side_violation);
        ck.require(v.term_count == 5, || format!("#{i}: {} terms", v.term_count));
        ck.require(v.residual <= 1e-8, || format!("#{i}: residual {:e}", v.residual));
        ck.require(v.side_violation <= 1e-8, || format!("#{i}: square defect {:e}", v.side_violation));
    }
    ck.note(format!("max residual {worst_res:.1e}, max square defect {worst_side:.1e}"));
    Ok(())
}

fn divisibility_fixtures(ctx: &Ctx, ck: &mut Check) -> Result<()> {
    let num = ctx.num();
    let mut rng = stream_rng(ctx.seed, 0);
    let mut worst = 0.0f64;
    for (n, witness) in [(2, decomp::fixtures::witness_m2()), (3, decomp::fixtures::witness_m3())] {
        for i in 0..100 {
            let a = decomp::sample::random_matrix(&mut rng, n) * Complex64::new(rng.random_range(0.1..=10.0), 0.0);
            let cert = divisibility_to_commutator_sum(&a, &witness, &num)?;
            let v = verify(&cert, &a);
            worst = worst.max(v.residual / op_norm(&a).max(1.0));
            ck.require(v.residual <= 1e-8, || format!("M{n} #{i}: residual {:e}", v.residual));
            ck.require(v.valid, || format!("M{n} #{i}: certificate rejected"));
        }
    }
    ck.note(format!("200 targets, max relative residual {worst:.1e}"));
    Ok(())
}

fn cyclic_soundness(ctx: &Ctx, ck: &mut Check) -> Result<()> {
    let mut rng = stream_rng(ctx.seed, 0);
    for i in 0..1000 {
        let f = random_poly(&mut rng, 3, 5, 5);
        let mut g = f.clone();
        for _ in 0..rng.random_range(1..=3) {
            let dl = rng.random_range(0..=4);
            let l = random_poly(&mut rng, 3, dl, 3);
            let r = random_poly(&mut rng, 3, 5 - dl, 3);
            g = &g + &l.bracket(&r);
        }
        ck.require(cyclic_canonical_form(&g) == cyclic_canonical_form(&f), || format!("triple {i}: {f} vs {g}"));
    }
    for k in 1..=3 {
        ck.require(is_cyclically_zero(&standard_poly(2 * k)?), || format!("s{} not cyclically zero", 2 * k));
    }
    ck.note("1000 triples; s2, s4, s6 cyclically zero");
    Ok(())
}

// ---- invariants ----

fn parse_roundtrip(ctx: &Ctx, ck: &mut Check) -> Result<()> {
    let mut rng = stream_rng(ctx.seed, 0);
    for _ in 0..300 {
        let f = random_poly(&mut rng, 4, 5, 6);
        let text = f.to_string();
        let back = parse_poly(&text)?;
        ck.require(back == f, || format!("{text} reparsed as {back}"));
    }
    ck.note("300 polynomials");
    Ok(())
}

fn bracket_laws(ctx: &Ctx, ck: &mut Check) -> Result<()> {
    let mut rng = stream_rng(ctx.seed, 0);
    for i in 0..100 {
        let [f, g, h] = [0; 3].map(|_| random_poly(&mut rng, 3, 4, 3));
        let c = small_coeff(&mut rng);
        let lin = (&f.scale(&c) + &g).bracket(&h) == &f.bracket(&h).scale(&c) + &g.bracket(&h);
        let anti = (&f.bracket(&g) + &g.bracket(&f)).is_zero();
        let jacobi = (&(&f.bracket(&g.bracket(&h)) + &g.bracket(&h.bracket(&f))) + &h.bracket(&f.bracket(&g))).is_zero();
        ck.require(lin && anti && jacobi, || format!("triple {i}: linear={lin} antisymmetric={anti} jacobi={jacobi}"));
    }
    ck.note("100 triples");
    Ok(())
}

fn multilinearize_collapse(ctx: &Ctx, ck: &mut Check) -> Result<()> {
    let mut rng = stream_rng(ctx.seed, 0);
    for _ in 0..200 {
        let f = random_multihomogeneous(&mut rng, 5);
        if f.is_zero() {
            continue;
        }
        let m = multilinearize(&f)?;
        ck.require(m.poly.is_multilinear(), || format!("multilinearization of {f} is not multilinear"));
        ck.require(m.collapse() == f.scale(&m.factor), || format!("collapse of {f} is not {} f", m.factor));
    }
    ck.note("200 polynomials");
    Ok(())
}

fn eval_homomorphism(ctx: &Ctx, ck: &mut Check) -> Result<()> {
    let mut rng = stream_rng(ctx.seed, 0);
    for i in 0..200 {
        let n = 2 + i % 2;
        let f = random_poly(&mut rng, 3, 3, 4);
        let g = random_poly(&mut rng, 3, 3, 4);
        let vals: BTreeMap<Var, QMatrix> = (1..=3).map(|v| (v, random_qmatrix(&mut rng, n))).collect();
        let (ef, eg) = (eval_poly(&f, &vals)?, eval_poly(&g, &vals)?);
        ck.require(eval_poly(&(&f * &g), &vals)? == ef.mul(&eg), || format!("product fails for {f} and {g}"));
        ck.require(eval_poly(&(&f + &g), &vals)? == ef.add(&eg), || format!("sum fails for {f} and {g}"));
    }
    ck.note("200 pairs");
    Ok(())
}

fn exact_randomized_agree(ctx: &Ctx, ck: &mut Check) -> Result<()> {
    let pi = ctx.pi();
    let polys = [
        standard_poly(2)?,
        standard_poly(3)?,
        standard_poly(4)?,
        nested_commutator_poly(2)?,
        poly("[x1,x2]^2")?,
        poly("x1x2x1 - x1x1x2")?,
    ];
    let mut compared = 0;
    for f in &polys {
        for k in 1..=3 {
            let exact = is_identity_exact(f, k, &pi)?;
            let random = is_identity_randomized(f, k, ctx.cfg.trials, derive_seed(ctx.seed, &format!("{f}{k}")))?;
            compared += 1;
            ck.require(exact.is_identity == random.is_identity, || format!("{f} on M{k}: methods disagree"));
            if !random.is_identity {
                ck.require(witness_value_nonzero(f, &random)?, || format!("{f} on M{k}: randomized witness vanishes"));
            }
            if !exact.is_identity {
                ck.require(witness_value_nonzero(f, &exact)?, || format!("{f} on M{k}: exact witness vanishes"));
            }
        }
    }
    ck.note(format!("{compared} comparisons"));
    Ok(())
}

fn permutation_invariance(ctx: &Ctx, ck: &mut Check) -> Result<()> {
    let pi = ctx.pi();
    let mut rng = stream_rng(ctx.seed, 0);
    for i in 0..30 {
        let d: Var = 3 + (i % 2) as Var;
        let vars: Vec<Var> = (1..=d).collect();
        let f = NcPoly::from_terms((0..rng.random_range(1..=4)).map(|_| {
            let mut w = vars.clone();
            w.shuffle(&mut rng);
            (Word::from_slice(&w), small_coeff(&mut rng))
        }));
        let mut perm = vars.clone();
        perm.shuffle(&mut rng);
        let g = f.rename(|v| perm[v as usize - 1]);
        for k in 1..=2 {
            let a = is_identity_exact(&f, k, &pi)?.is_identity;
            let b = is_identity_exact(&g, k, &pi)?.is_identity;
            ck.require(a == b, || format!("{f} vs {g} on M{k}"));
        }
    }
    ck.note("30 polynomials on M1, M2");
    Ok(())
}

fn embed(m: &QMatrix, n: usize) -> QMatrix {
    let mut out = QMatrix::zeros(n);
    for i in 0..m.n() {
        for j in 0..m.n() {
            out.set(i, j, m.get(i, j).clone());
        }
    }
    out
}

fn corner_monotonicity(ctx: &Ctx, ck: &mut Check) -> Result<()> {
    let pi = ctx.pi();
    let polys = [("s(2)", standard_poly(2)?), ("s(4)", standard_poly(4)?), ("pi(2)", nested_commutator_poly(2)?), ("x1^2", poly("x1^2")?)];
    for (name, f) in &polys {
        let mut found = None;
        for j in 1..=3 {
            let v = is_identity_exact(f, j, &pi)?;
            if let Some(w) = v.witness {
                found = Some(w);
                break;
            }
        }
        let Some(w) = found else {
            ck.require(false, || format!("{name}: no witness up to M3"));
            continue;
        };
        for n in w.k..=4 {
            let values: BTreeMap<Var, QMatrix> = w.values.iter().map(|(&v, m)| (v, embed(m, n))).collect();
            ck.require(!eval_poly(f, &values)?.is_zero(), || format!("{name}: M{} witness vanishes in M{n}", w.k));
        }
        ck.note(format!("{name}: first refuted on M{}", w.k));
    }
    Ok(())
}

fn lie_closure_laws(ctx: &Ctx, ck: &mut Check) -> Result<()> {
    let mut rng = stream_rng(ctx.seed, 0);
    for blocks in [vec![2], vec![3], vec![1, 2], vec![1, 2, 3]] {
        let a = algebra(&blocks);
        for i in 0..40 {
            let mut gens: Vec<_> = (0..rng.random_range(1..=2)).map(|_| random_generator(&mut rng, &a)).collect();
            let l = lie_closure(&a, &gens)?;
            ck.require(is_lie_ideal(&l), || format!("{a} #{i}: closure is not a Lie ideal"));
            ck.require(lie_closure(&a, &l.basis())? == l, || format!("{a} #{i}: closure not idempotent"));
            gens.push(random_generator(&mut rng, &a));
            let bigger = lie_closure(&a, &gens)?;
            ck.require(bigger.contains_subspace(&l)?, || format!("{a} #{i}: closure not monotone"));
        }
    }
    ck.note("160 generator sets");
    Ok(())
}

fn ideal_chains(_ctx: &Ctx, ck: &mut Check) -> Result<()> {
    for blocks in [vec![1, 2, 3], vec![2, 2, 4], vec![1, 1, 2], vec![3]] {
        let a = algebra(&blocks);
        for k in 0..=a.max_block() {
            ck.require(ideal_ik(&a, k).contains_subspace(&ideal_ik(&a, k + 1))?, || format!("{a}: I_{k} ⊉ I_{}", k + 1));
            ck.require(ideal_commutator(&a, k).contains_subspace(&ideal_commutator(&a, k + 1))?, || {
                format!("{a}: [I_{k},A] ⊉ [I_{},A]", k + 1)
            });
        }
    }
    ck.note("4 algebras");
    Ok(())
}

fn center_split(_ctx: &Ctx, ck: &mut Check) -> Result<()> {
    for blocks in [vec![1, 2, 3], vec![2, 2, 4], vec![1, 1, 2], vec![3], vec![1]] {
        let a = algebra(&blocks);
        let (comm, z) = (commutator_subspace(&a), center(&a));
        ck.require(comm.sum(&z)?.is_full(), || format!("{a}: sum is not everything"));
        ck.require(comm.intersect(&z)?.is_zero(), || format!("{a}: intersection is nonzero"));
    }
    ck.note("5 algebras");
    Ok(())
}

fn ideal_of_commutators(ctx: &Ctx, ck: &mut Check) -> Result<()> {
    let mut rng = stream_rng(ctx.seed, 0);
    for blocks in [vec![2], vec![3], vec![1, 2], vec![1, 2, 3]] {
        let a = algebra(&blocks);
        for i in 0..30 {
            let l = random_lie_ideal(&mut rng, &a)?;
            ck.require(ideal_of_commutators_check(&l)?, || format!("{a} #{i}: ideal of [L,A] too large"));
            ck.require(bracket_ideal_containment_check(&l)?, || format!("{a} #{i}: A[L,L]A ⊄ L + LL"));
        }
    }
    ck.note("120 Lie ideals");
    Ok(())
}

fn projection_fullness(ctx: &Ctx, ck: &mut Check) -> Result<()> {
    for blocks in [vec![2], vec![1, 2, 3], vec![2, 3]] {
        let a = algebra(&blocks);
        ck.require(projection_fullness_check(&a, 20, derive_seed(ctx.seed, &a.to_string()))?, || format!("{a}"));
    }
    ck.note("3 algebras");
    Ok(())
}

fn perturbed(cert: &decomp::DecompCertificate, n: usize) -> decomp::DecompCertificate {
    let mut out = cert.clone();
    let bump = decomp::unit(n, 0, n - 1) * Complex64::new(1e-3, 0.0);
    if let Some(t) = out.terms.first_mut() {
        let value = t.value() + bump;
        *t = CertTerm::unit(TermForm::Plain(value));
    }
    out
}

fn certificate_verification(ctx: &Ctx, ck: &mut Check) -> Result<()> {
    let num = ctx.num();
    let mut rng = stream_rng(ctx.seed, 0);
    let n = 3;
    let x = decomp::sample::random_nilpotent(&mut rng, n, 3);
    let e = decomp::sample::random_idempotent(&mut rng, n, 5.0);
    let sz = decomp::sample::random_square_zero(&mut rng, n);
    let a = decomp::sample::random_matrix(&mut rng, n);
    let certs = [
        ("nilpotent", nilpotent_to_commutators(&x, 3, &num)?, x.clone()),
        ("idempotent", idempotent_to_projections(&e, &num)?, e.clone()),
        ("sandwich", sandwich_product_of_commutators(&sz, &a, &num)?, &sz * &a * sz.adjoint()),
        ("square-zero", commutator_to_square_zeros(&sz, &a, &num)?, bracket(&a, &sz)),
        ("divisibility", divisibility_to_commutator_sum(&a, &decomp::fixtures::witness_m3(), &num)?, a.clone()),
    ];
    for (name, cert, target) in &certs {
        let v = verify(cert, target);
        ck.require(v.valid, || format!("{name}: valid certificate rejected (residual {:e})", v.residual));
        ck.require((v.residual - cert.residual).abs() <= 1e-12, || format!("{name}: stored residual disagrees"));
        let bad = verify(&perturbed(cert, n), target);
        ck.require(!bad.valid, || format!("{name}: perturbed certificate accepted"));
    }
    ck.note("5 kinds verified, perturbations rejected");
    Ok(())
}

fn aluthge_order_decrease(ctx: &Ctx, ck: &mut Check) -> Result<()> {
    let num = ctx.num();
    let mut rng = stream_rng(ctx.seed, 0);
    for k in 2..=5usize {
        for i in 0..25 {
            let x = decomp::sample::random_nilpotent(&mut rng, 5, k);
            let scale = op_norm(&x);
            let orders: Vec<usize> = decomp::aluthge_iterates(&x, k - 1, &num)?
                .iter()
                .map(|m| nilpotency_order_at_scale(m, num.tol, scale))
                .collect();
            ck.require(orders[0] == k && orders.windows(2).all(|w| w[1] < w[0]), || {
                format!("k={k} #{i}: orders {orders:?}")
            });
        }
    }
    ck.note("100 nilpotents");
    Ok(())
}

fn scale_covariance(ctx: &Ctx, ck: &mut Check) -> Result<()> {
    let num = ctx.num();
    let mut rng = stream_rng(ctx.seed, 0);
    let n = 3;
    for i in 0..20 {
        let lam = scalar(&mut rng);
        let x = decomp::sample::random_nilpotent(&mut rng, n, 2 + i % 2);
        let k = 2 + i % 2;
        let sz = decomp::sample::random_square_zero(&mut rng, n);
        let a = decomp::sample::random_matrix(&mut rng, n);
        let e = decomp::sample::random_idempotent(&mut rng, n, 5.0);
        let w = decomp::fixtures::witness_m3();
        let cases: Vec<(&str, decomp::DecompCertificate, Option<decomp::DecompCertificate>, CMatrix)> = vec![
            ("nilpotent", nilpotent_to_commutators(&x, k, &num)?, Some(nilpotent_to_commutators(&(&x * lam), k, &num)?), x.clone()),
            ("idempotent", idempotent_to_projections(&e, &num)?, None, e.clone()),
            (
                "sandwich",
                sandwich_product_of_commutators(&sz, &a, &num)?,
                Some(sandwich_product_of_commutators(&sz, &(&a * lam), &num)?),
                &sz * &a * sz.adjoint(),
            ),
            (
                "square-zero",
                commutator_to_square_zeros(&sz, &a, &num)?,
                Some(commutator_to_square_zeros(&sz, &(&a * lam), &num)?),
                bracket(&a, &sz),
            ),
            (
                "divisibility",
                divisibility_to_commutator_sum(&a, &w, &num)?,
                Some(divisibility_to_commutator_sum(&(&a * lam), &w, &num)?),
                a.clone(),
            ),
        ];
        for (name, cert, direct, target) in cases {
            let scaled_target = &target * lam;
            let tol = num.tol * (1.0 + lam.norm());
            let via_coeffs = verify(&cert.scaled(lam), &scaled_target);
            ck.require(via_coeffs.residual <= tol, || format!("{name} #{i}: scaled coefficients miss λ·target"));
            if let Some(d) = direct {
                let v = verify(&d, &scaled_target);
                ck.require(v.residual <= tol, || format!("{name} #{i}: certificate for λ·input misses λ·target"));
            }
        }
    }
    ck.note("20 scalars × 5 constructions");
    Ok(())
}

fn determinism(ctx: &Ctx, ck: &mut Check) -> Result<()> {
    let a = algebra(&[1, 2, 3]);
    let cfg = ctx.sampling("span");
    ck.require(nilpotent_k_span(&a, 2, &cfg)? == nilpotent_k_span(&a, 2, &cfg)?, || "sampled spans differ".into());
    let f = standard_poly(4)?;
    let w1 = is_identity_randomized(&f, 3, ctx.cfg.trials, ctx.seed)?;
    let w2 = is_identity_randomized(&f, 3, ctx.cfg.trials, ctx.seed)?;
    ck.require(w1 == w2, || "randomized verdicts differ".into());
    let run = || -> Result<String> {
        let mut rng = stream_rng(ctx.seed, 1);
        let x = decomp::sample::random_nilpotent(&mut rng, 4, 3);
        Ok(nilpotent_to_commutators(&x, 3, &ctx.num())?.to_json().to_string())
    };
    ck.require(run()? == run()?, || "certificate JSON differs".into());
    let pi = PiConfig { seed: ctx.seed, ..PiConfig::default() };
    let l = Limits::default();
    ck.require(l.check(&f).is_ok(), || "limits reject s4".into());
    let e1 = is_identity_exact(&f, 3, &pi)?;
    ck.require(e1 == is_identity_exact(&f, 3, &pi)?, || "exact witnesses differ".into());
    ck.note("spans, witnesses and certificates reproduce");
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_names_are_unique() {
        let names = case_names();
        let mut dedup = names.clone();
        dedup.dedup();
        assert_eq!(names, dedup);
    }

    #[test]
    fn filter_and_report_shape() {
        let r = run_suite(&SuiteConfig::default(), Some("inv_center"));
        assert_eq!(r.cases.len(), 1);
        assert!(r.all_passed(), "{}", r.cases[0].line());
        assert_eq!(r.cases[0].inputs_digest.len(), 16);
        assert!(run_case("nope", &SuiteConfig::default()).is_none());
    }
}
