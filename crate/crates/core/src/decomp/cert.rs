//! Self-checking decomposition certificates.

use num_complex::Complex64;
use serde::Serialize;

use super::json::MatrixJson;
use super::linalg::{bracket, op_norm, zeros, CMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertKind {
    /// Sum of commutators `Σ [a_i, b_i]`.
    CommutatorSum,
    /// Linear combination of orthogonal projections.
    ProjectionCombo,
    /// Sum of square-zero elements.
    SquareZeroSum,
    /// Products of two commutators `Σ [a,b]·[c,d]`.
    ProductOfCommutators,
    /// Commutators plus products of two commutators.
    CommutatorsAndProducts,
}

#[derive(Clone, Debug)]
pub enum TermForm {
    Commutator(CMatrix, CMatrix),
    Plain(CMatrix),
    /// `[a, b]·[c, d]`
    ProductOfCommutators(CMatrix, CMatrix, CMatrix, CMatrix),
}

impl TermForm {
    pub fn value(&self) -> CMatrix {
        match self {
            TermForm::Commutator(a, b) => bracket(a, b),
            TermForm::Plain(m) => m.clone(),
            TermForm::ProductOfCommutators(a, b, c, d) => bracket(a, b) * bracket(c, d),
        }
    }

    fn operands(&self) -> Vec<&CMatrix> {
        match self {
            TermForm::Commutator(a, b) => vec![a, b],
            TermForm::Plain(m) => vec![m],
            TermForm::ProductOfCommutators(a, b, c, d) => vec![a, b, c, d],
        }
    }

    fn name(&self) -> &'static str {
        match self {
            TermForm::Commutator(..) => "commutator",
            TermForm::Plain(_) => "plain",
            TermForm::ProductOfCommutators(..) => "product-of-commutators",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CertTerm {
    pub coeff: Complex64,
    pub form: TermForm,
}

impl CertTerm {
    pub fn new(coeff: Complex64, form: TermForm) -> Self {
        CertTerm { coeff, form }
    }

    pub fn unit(form: TermForm) -> Self {
        Self::new(Complex64::new(1.0, 0.0), form)
    }

    pub fn value(&self) -> CMatrix {
        self.form.value() * self.coeff
    }
}

#[derive(Clone, Debug)]
pub struct DecompCertificate {
    pub kind: CertKind,
    pub terms: Vec<CertTerm>,
    /// `‖target − Σ terms‖` at construction time.
    pub residual: f64,
    pub tolerance: f64,
}

impl DecompCertificate {
    pub(crate) fn new(kind: CertKind, terms: Vec<CertTerm>, target: &CMatrix, tolerance: f64) -> Self {
        let mut cert = DecompCertificate { kind, terms, residual: 0.0, tolerance };
        cert.residual = op_norm(&(target - cert.reconstruct(target.nrows())));
        cert
    }

    pub fn reconstruct(&self, n: usize) -> CMatrix {
        self.terms.iter().fold(zeros(n), |acc, t| acc + t.value())
    }

    pub fn is_valid(&self) -> bool {
        self.residual <= self.tolerance
    }

    /// Scales every coefficient, so the certificate reconstructs `λ · target`.
    pub fn scaled(&self, lambda: Complex64) -> Self {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.coeff *= lambda;
        }
        out.residual *= lambda.norm();
        out.tolerance *= lambda.norm().max(1.0);
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|t| {
                serde_json::json!({
                    "form": t.form.name(),
                    "coefficient": [t.coeff.re, t.coeff.im],
                    "operands": t.form.operands().into_iter().map(MatrixJson::from_matrix).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::json!({
            "kind": self.kind,
            "terms": terms,
            "residual": self.residual,
            "tolerance": self.tolerance,
        })
    }
}

/// Independent recomputation of a certificate against a target.
#[derive(Clone, Debug, Serialize)]
pub struct Verification {
    pub residual: f64,
    /// Largest side-condition violation: `max(‖P² − P‖, ‖P − P*‖)` over
    /// projection terms, `‖T²‖ / max(1, ‖T‖²)` over square-zero terms.
    pub side_violation: f64,
    pub term_count: usize,
    pub valid: bool,
}

/// Recomputes the reconstruction and every structural side-condition from
/// the raw operand matrices.
pub fn verify(cert: &DecompCertificate, target: &CMatrix) -> Verification {
    let n = target.nrows();
    let mut sum = zeros(n);
    let mut side: f64 = 0.0;
    let mut shape_ok = true;
    for t in &cert.terms {
        let value = match &t.form {
            TermForm::Commutator(a, b) => {
                shape_ok &= matches!(
                    cert.kind,
                    CertKind::CommutatorSum | CertKind::CommutatorsAndProducts
                );
                a * b - b * a
            }
            TermForm::ProductOfCommutators(a, b, c, d) => {
                shape_ok &= matches!(
                    cert.kind,
                    CertKind::ProductOfCommutators | CertKind::CommutatorsAndProducts
                );
                (a * b - b * a) * (c * d - d * c)
            }
            TermForm::Plain(m) => {
                match cert.kind {
                    CertKind::ProjectionCombo => {
                        side = side.max(op_norm(&(m * m - m))).max(op_norm(&(m - m.adjoint())));
                    }
                    CertKind::SquareZeroSum => {
                        side = side.max(op_norm(&(m * m)) / op_norm(m).powi(2).max(1.0));
                    }
                    _ => shape_ok = false,
                }
                m.clone()
            }
        };
        sum += value * t.coeff;
    }
    let residual = op_norm(&(target - sum));
    let valid = shape_ok && residual <= cert.tolerance && side <= cert.tolerance;
    Verification { residual, side_violation: side, term_count: cert.terms.len(), valid }
}
