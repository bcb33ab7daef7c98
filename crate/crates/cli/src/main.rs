//! `liekit` command-line front end.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on usage or
//! input errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use liekit::decomp::{
    self, commutator_to_square_zeros, divisibility_to_commutator_sum, idempotent_to_projections,
    numeric_nilpotency_order, nilpotent_to_commutators, sandwich_product_of_commutators, verify, CMatrix,
    DecompCertificate, NumConfig,
};
use liekit::freealg::{cyclic_canonical_form, multihomogeneous_components, multilinearize, parse_poly_with, Limits, NcPoly};
use liekit::matalg::json::{parse_subspace, subspace_to_json, BlockJson};
use liekit::matalg::{
    classify_in_matrix_algebra, is_lie_ideal, lie_closure, nilpotent_span_matches_prediction,
    similarity_invariance_check, FdAlgebra, SamplingConfig,
};
use liekit::pitest::{classify_range_span, is_identity, largest_identity_k, MethodChoice, PiConfig, PiVerdict};
use liekit::suite::{run_suite, SuiteConfig};
use liekit::Error;

#[derive(Parser)]
#[command(name = "liekit", version, about = "Lie ideals, polynomial identities and commutator decompositions")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, env = "LIEKIT_SEED", default_value_t = 0)]
    seed: u64,
    /// Numeric certificate tolerance.
    #[arg(long, global = true, default_value_t = 1e-8, value_parser = positive_f64)]
    tol: f64,
    /// Largest matrix size scanned by `pi largest-k`.
    #[arg(long, global = true, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
    kmax: u64,
    /// Trials for randomized identity tests.
    #[arg(long, global = true, default_value_t = 50, value_parser = clap::value_parser!(u32).range(1..))]
    trials: u32,
    /// Largest number of matrix-unit tuples enumerated by the exact test.
    #[arg(long = "exact-budget", global = true, default_value_t = 2_000_000)]
    exact_budget: u128,
    #[arg(long, global = true, default_value_t = Limits::default().max_degree)]
    max_degree: usize,
    #[arg(long, global = true, default_value_t = Limits::default().max_vars)]
    max_vars: usize,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}

#[derive(Subcommand)]
enum Command {
    /// Free-algebra polynomial utilities.
    #[command(subcommand)]
    Poly(PolyCmd),
    /// Polynomial identity tests on M_k.
    #[command(subcommand)]
    Pi(PiCmd),
    /// Predict and sample the span of a polynomial's range.
    ClassifyRange {
        #[arg(short = 'f', long = "poly")]
        poly: String,
        #[arg(long, value_delimiter = ',', required = true)]
        blocks: Vec<usize>,
        /// Skip sampling and report only the prediction.
        #[arg(long)]
        no_sample: bool,
    },
    /// Lie-ideal operations on subspace files.
    #[command(subcommand)]
    Lie(LieCmd),
    /// Sampled spans.
    #[command(subcommand)]
    Spans(SpansCmd),
    /// Verification suite.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Numeric decompositions with certificates.
    #[command(subcommand)]
    Decomp(DecompCmd),
}

/// Polynomials are given inline, or as `@path` to read a file.
#[derive(Subcommand)]
enum PolyCmd {
    Parse { poly: String },
    Print { poly: String },
    CyclicReduce { poly: String },
    Multilinearize { poly: String },
    Components { poly: String },
}

#[derive(Subcommand)]
enum PiCmd {
    Test {
        #[arg(short = 'f', long = "poly")]
        poly: String,
        #[arg(short = 'k')]
        k: usize,
        /// Exact only; fail if over budget.
        #[arg(long, conflicts_with = "random")]
        exact: bool,
        /// Randomized only.
        #[arg(long)]
        random: bool,
    },
    LargestK {
        #[arg(short = 'f', long = "poly")]
        poly: String,
        #[arg(long, conflicts_with = "random")]
        exact: bool,
        #[arg(long)]
        random: bool,
    },
}

#[derive(Subcommand)]
enum LieCmd {
    /// Lie ideal generated by the basis of a subspace file.
    Closure { file: PathBuf },
    IsIdeal { file: PathBuf },
    /// Compares the Lie-ideal test with sampled square-zero similarity invariance.
    SimInvariance {
        file: PathBuf,
        #[arg(long, default_value_t = 32)]
        samples: usize,
    },
}

#[derive(Subcommand)]
enum SpansCmd {
    Nilpotent {
        #[arg(long)]
        order: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        blocks: Vec<usize>,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    Suite {
        /// Run only cases whose name contains this string.
        #[arg(long)]
        filter: Option<String>,
    },
}

#[derive(Subcommand)]
enum DecompCmd {
    /// Nilpotent as a sum of commutators.
    Aluthge {
        file: PathBuf,
        /// Nilpotency order; computed numerically when omitted.
        #[arg(long)]
        order: Option<usize>,
    },
    /// Idempotent as a combination of projections.
    Idempotent { file: PathBuf },
    /// `x b x*` as a product of two commutators.
    Sandwich { x: PathBuf, b: PathBuf },
    /// `[a, x]` as five square-zero terms.
    #[command(name = "comm2sq0")]
    Comm2Sq0 { x: PathBuf, a: PathBuf },
    /// Target as a sum of commutators and products of commutators.
    Divisibility {
        a: PathBuf,
        #[arg(long)]
        witness: PathBuf,
    },
}

struct Report {
    text: String,
    json: Value,
    ok: bool,
}

impl Report {
    fn pass(text: String, json: Value) -> Self {
        Report { text, json, ok: true }
    }
}

enum Failure {
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

impl Cli {
    fn limits(&self) -> Limits {
        Limits { max_degree: self.max_degree, max_vars: self.max_vars }
    }

    fn poly(&self, arg: &str) -> Result<NcPoly, Failure> {
        let text = match arg.strip_prefix('@') {
            Some(path) => read(Path::new(path))?,
            None => arg.to_string(),
        };
        Ok(parse_poly_with(text.trim(), &self.limits())?)
    }

    fn pi(&self) -> PiConfig {
        PiConfig { exact_budget: self.exact_budget, trials: self.trials, seed: self.seed, ..PiConfig::default() }
    }

    fn num(&self) -> NumConfig {
        NumConfig { tol: self.tol, ..NumConfig::default() }
    }

    fn sampling(&self) -> SamplingConfig {
        SamplingConfig { seed: self.seed, ..SamplingConfig::default() }
    }
}

fn choice(exact: bool, random: bool) -> MethodChoice {
    match (exact, random) {
        (true, _) => MethodChoice::Exact,
        (_, true) => MethodChoice::Randomized,
        _ => MethodChoice::Auto,
    }
}

fn algebra(blocks: &[usize]) -> Result<FdAlgebra, Failure> {
    Ok(FdAlgebra::new(blocks.to_vec())?)
}

fn matrix(path: &Path) -> Result<CMatrix, Failure> {
    Ok(decomp::json::parse_matrix(&read(path)?)?)
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    match &cli.command {
        Command::Poly(cmd) => poly_cmd(cli, cmd),
        Command::Pi(cmd) => pi_cmd(cli, cmd),
        Command::ClassifyRange { poly, blocks, no_sample } => {
            let f = cli.poly(poly)?;
            let a = algebra(blocks)?;
            let sampling = cli.sampling();
            let r = classify_range_span(&f, &a, MethodChoice::Auto, &cli.pi(), (!no_sample).then_some(&sampling))?;
            let sampled = r.sampled.as_ref().map(|s| s.subspace.dim());
            let verdict = match r.agrees() {
                Some(true) => "PASS",
                Some(false) => "FAIL",
                None => "UNCHECKED",
            };
            let text = match sampled {
                Some(d) => format!("k {}\npredicted dim {}\nsampled dim {d}\n{verdict}", r.k, r.predicted.dim()),
                None => format!("k {}\npredicted dim {}", r.k, r.predicted.dim()),
            };
            let json = json!({
                "algebra": a.blocks(),
                "k": r.k,
                "predicted_dim": r.predicted.dim(),
                "sampled_dim": sampled,
                "verdict": verdict,
                "predicted": subspace_to_json(&r.predicted),
            });
            Ok(Report { text, json, ok: r.agrees() != Some(false) })
        }
        Command::Lie(cmd) => lie_cmd(cli, cmd),
        Command::Spans(SpansCmd::Nilpotent { order, blocks }) => {
            let a = algebra(blocks)?;
            let (sampled, predicted) = nilpotent_span_matches_prediction(&a, *order, &cli.sampling())?;
            let ok = sampled.subspace == predicted;
            let verdict = if ok { "PASS" } else { "FAIL" };
            let text = format!(
                "sampled dim {} after {} samples\npredicted dim {}\n{verdict}",
                sampled.subspace.dim(),
                sampled.samples,
                predicted.dim()
            );
            let json = json!({
                "algebra": a.blocks(),
                "order": order,
                "sampled_dim": sampled.subspace.dim(),
                "samples": sampled.samples,
                "saturated": sampled.saturated,
                "predicted_dim": predicted.dim(),
                "verdict": verdict,
            });
            Ok(Report { text, json, ok })
        }
        Command::Verify(VerifyCmd::Suite { filter }) => {
            let cfg = SuiteConfig { seed: cli.seed, tol: cli.tol, trials: cli.trials, exact_budget: cli.exact_budget };
            let report = run_suite(&cfg, filter.as_deref());
            if report.cases.is_empty() {
                return Err(Failure::Usage(format!("no case matches {:?}", filter.as_deref().unwrap_or(""))));
            }
            let mut text: Vec<String> = report.cases.iter().map(|c| c.line()).collect();
            text.push(format!("{} passed, {} failed", report.passed, report.failed));
            let json = serde_json::to_value(&report).expect("serializable report");
            Ok(Report { text: text.join("\n"), json, ok: report.all_passed() })
        }
        Command::Decomp(cmd) => decomp_cmd(cli, cmd),
    }
}

fn poly_cmd(cli: &Cli, cmd: &PolyCmd) -> Result<Report, Failure> {
    match cmd {
        PolyCmd::Parse { poly } => {
            let f = cli.poly(poly)?;
            let json = json!({
                "poly": f.to_string(),
                "degree": f.degree(),
                "terms": f.num_terms(),
                "variables": f.variables(),
                "multilinear": f.is_multilinear(),
                "multihomogeneous": f.is_multihomogeneous(),
            });
            let text = format!(
                "{f}\ndegree {}, {} terms, variables {:?}",
                f.degree(),
                f.num_terms(),
                f.variables()
            );
            Ok(Report::pass(text, json))
        }
        PolyCmd::Print { poly } => {
            let f = cli.poly(poly)?;
            Ok(Report::pass(f.to_string(), json!({ "poly": f.to_string() })))
        }
        PolyCmd::CyclicReduce { poly } => {
            let g = cyclic_canonical_form(&cli.poly(poly)?);
            Ok(Report::pass(g.to_string(), json!({ "poly": g.to_string(), "is_zero": g.is_zero() })))
        }
        PolyCmd::Multilinearize { poly } => {
            let m = multilinearize(&cli.poly(poly)?)?;
            let origin: serde_json::Map<String, Value> =
                m.origin.iter().map(|(k, v)| (format!("x{k}"), json!(format!("x{v}")))).collect();
            let text = format!("{}\nfactor {}", m.poly, m.factor);
            Ok(Report::pass(
                text,
                json!({ "poly": m.poly.to_string(), "factor": m.factor.to_string(), "origin": origin }),
            ))
        }
        PolyCmd::Components { poly } => {
            let comps = multihomogeneous_components(&cli.poly(poly)?);
            let text = comps.iter().map(|(_, g)| g.to_string()).collect::<Vec<_>>().join("\n");
            let json: Vec<Value> = comps
                .iter()
                .map(|(d, g)| {
                    let deg: serde_json::Map<String, Value> =
                        d.0.iter().map(|(v, e)| (format!("x{v}"), json!(e))).collect();
                    json!({ "multidegree": deg, "poly": g.to_string() })
                })
                .collect();
            Ok(Report::pass(text, Value::Array(json)))
        }
    }
}

fn verdict_json(v: &PiVerdict) -> Value {
    let witness = v.witness.as_ref().map(|w| {
        let values: serde_json::Map<String, Value> = w
            .values
            .iter()
            .map(|(var, m)| (format!("x{var}"), serde_json::to_value(BlockJson::from_matrix(m)).expect("serializable")))
            .collect();
        json!({ "k": w.k, "values": values })
    });
    json!({ "is_identity": v.is_identity, "method": v.method, "trials": v.trials, "witness": witness })
}

fn verdict_text(v: &PiVerdict, k: usize) -> String {
    let method = serde_json::to_value(v.method).expect("serializable");
    let method = method.as_str().unwrap_or("");
    let mut out = if v.is_identity {
        format!("identity on M{k} ({method})")
    } else {
        format!("not an identity on M{k} ({method})")
    };
    if let Some(w) = &v.witness {
        for (var, m) in &w.values {
            let rows: Vec<String> = (0..m.n())
                .map(|i| (0..m.n()).map(|j| m.get(i, j).to_string()).collect::<Vec<_>>().join(" "))
                .collect();
            out.push_str(&format!("\nx{var} = [{}]", rows.join("; ")));
        }
    }
    out
}

fn pi_cmd(cli: &Cli, cmd: &PiCmd) -> Result<Report, Failure> {
    match cmd {
        PiCmd::Test { poly, k, exact, random } => {
            let f = cli.poly(poly)?;
            let v = is_identity(&f, *k, choice(*exact, *random), &cli.pi())?;
            Ok(Report::pass(verdict_text(&v, *k), verdict_json(&v)))
        }
        PiCmd::LargestK { poly, exact, random } => {
            let f = cli.poly(poly)?;
            let k = largest_identity_k(&f, cli.kmax as usize, choice(*exact, *random), &cli.pi())?;
            Ok(Report::pass(k.to_string(), json!({ "largest_k": k, "kmax": cli.kmax })))
        }
    }
}

fn lie_cmd(cli: &Cli, cmd: &LieCmd) -> Result<Report, Failure> {
    match cmd {
        LieCmd::Closure { file } => {
            let u = parse_subspace(&read(file)?)?;
            let l = lie_closure(u.algebra(), &u.basis())?;
            let kind = classify_in_matrix_algebra(&l).map(|k| format!("{k:?}"));
            let mut text = format!("dim {}", l.dim());
            if let Some(k) = &kind {
                text.push_str(&format!(" ({k})"));
            }
            Ok(Report::pass(text, json!({ "dim": l.dim(), "kind": kind, "subspace": subspace_to_json(&l) })))
        }
        LieCmd::IsIdeal { file } => {
            let u = parse_subspace(&read(file)?)?;
            let lie = is_lie_ideal(&u);
            Ok(Report::pass(lie.to_string(), json!({ "dim": u.dim(), "is_lie_ideal": lie })))
        }
        LieCmd::SimInvariance { file, samples } => {
            let u = parse_subspace(&read(file)?)?;
            let lie = is_lie_ideal(&u);
            let invariant = similarity_invariance_check(&u, *samples, cli.seed);
            let ok = lie == invariant;
            let text = format!(
                "lie ideal: {lie}\nsimilarity invariant: {invariant}\n{}",
                if ok { "PASS" } else { "FAIL" }
            );
            Ok(Report { text, json: json!({ "is_lie_ideal": lie, "similarity_invariant": invariant, "agree": ok }), ok })
        }
    }
}

fn certificate_report(cert: DecompCertificate, target: &CMatrix) -> Report {
    let v = verify(&cert, target);
    let text = format!(
        "{} terms, residual {:.3e}, side-condition defect {:.3e}\n{}",
        v.term_count,
        v.residual,
        v.side_violation,
        if v.valid { "PASS" } else { "FAIL" }
    );
    let json = json!({
        "certificate": cert.to_json(),
        "verification": {
            "residual": v.residual,
            "side_violation": v.side_violation,
            "term_count": v.term_count,
            "valid": v.valid,
        },
    });
    Report { text, json, ok: v.valid }
}

fn decomp_cmd(cli: &Cli, cmd: &DecompCmd) -> Result<Report, Failure> {
    let cfg = cli.num();
    match cmd {
        DecompCmd::Aluthge { file, order } => {
            let x = matrix(file)?;
            let k = order.unwrap_or_else(|| numeric_nilpotency_order(&x, cfg.tol));
            Ok(certificate_report(nilpotent_to_commutators(&x, k, &cfg)?, &x))
        }
        DecompCmd::Idempotent { file } => {
            let e = matrix(file)?;
            Ok(certificate_report(idempotent_to_projections(&e, &cfg)?, &e))
        }
        DecompCmd::Sandwich { x, b } => {
            let (x, b) = (matrix(x)?, matrix(b)?);
            let cert = sandwich_product_of_commutators(&x, &b, &cfg)?;
            Ok(certificate_report(cert, &(&x * &b * x.adjoint())))
        }
        DecompCmd::Comm2Sq0 { x, a } => {
            let (x, a) = (matrix(x)?, matrix(a)?);
            let cert = commutator_to_square_zeros(&x, &a, &cfg)?;
            Ok(certificate_report(cert, &(&a * &x - &x * &a)))
        }
        DecompCmd::Divisibility { a, witness } => {
            let a = matrix(a)?;
            let w = decomp::json::parse_witness(&read(witness)?)?;
            Ok(certificate_report(divisibility_to_commutator_sum(&a, &w, &cfg)?, &a))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report.json).expect("serializable"));
            } else {
                println!("{}", report.text);
            }
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
