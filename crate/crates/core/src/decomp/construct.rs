//! Explicit decompositions: Aluthge iteration, four-projection idempotents,
//! products of two commutators, divisibility sums and five square-zero
//! terms.

use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use super::cert::{CertKind, CertTerm, DecompCertificate, TermForm};
use super::linalg::{
    c, ensure_square_finite, identity, numeric_nilpotency_order, op_norm, polar_decomposition,
    psd_sqrt, range_projection, support_projection, zeros, CMatrix,
};
use super::NumConfig;
use crate::error::{Error, Result};

/// `x = [a, b] + next` with `a = v|x|^{1/2}`, `b = |x|^{1/2}` and `next` the
/// Aluthge transform `|x|^{1/2} v |x|^{1/2}`.
#[derive(Clone, Debug)]
pub struct AluthgeStep {
    pub a: CMatrix,
    pub b: CMatrix,
    pub next: CMatrix,
}

pub fn aluthge_step(x: &CMatrix, cfg: &NumConfig) -> Result<AluthgeStep> {
    let p = polar_decomposition(x, cfg.rank_tol)?;
    let a = &p.v * &p.abs_sqrt;
    let next = &p.abs_sqrt * &p.v * &p.abs_sqrt;
    Ok(AluthgeStep { a, b: p.abs_sqrt, next })
}

/// `|x|^{1/2} v |x|^{1/2}`.
pub fn aluthge_transform(x: &CMatrix, cfg: &NumConfig) -> Result<CMatrix> {
    Ok(aluthge_step(x, cfg)?.next)
}

/// `x` followed by `steps` successive Aluthge transforms.
pub fn aluthge_iterates(x: &CMatrix, steps: usize, cfg: &NumConfig) -> Result<Vec<CMatrix>> {
    let mut out = vec![x.clone()];
    for _ in 0..steps {
        let next = aluthge_transform(out.last().expect("nonempty"), cfg)?;
        out.push(next);
    }
    Ok(out)
}

fn is_square_zero(x: &CMatrix, tol: f64) -> bool {
    op_norm(&(x * x)) <= tol * op_norm(x).powi(2).max(1.0)
}

/// Writes a nilpotent of order exactly `k` as a sum of `k − 1` commutators by
/// peeling off one Aluthge step at a time.
pub fn nilpotent_to_commutators(x: &CMatrix, k: usize, cfg: &NumConfig) -> Result<DecompCertificate> {
    ensure_square_finite(x, "input")?;
    if k < 2 {
        return Err(Error::InvalidArgument("nilpotency order must be at least 2".into()));
    }
    let norm = op_norm(x);
    let order = numeric_nilpotency_order(x, cfg.tol);
    if norm == 0.0 || order != k {
        return Err(Error::Precondition(format!("input has numeric nilpotency order {order}, not {k}")));
    }
    let mut terms = Vec::with_capacity(k - 1);
    let mut cur = x.clone();
    for _ in 0..k - 1 {
        let step = aluthge_step(&cur, cfg)?;
        terms.push(CertTerm::unit(TermForm::Commutator(step.a, step.b)));
        cur = step.next;
    }
    let cert = DecompCertificate::new(CertKind::CommutatorSum, terms, x, cfg.tol);
    if !cert.is_valid() {
        return Err(Error::Numeric(format!("residual {:e} after {} steps", cert.residual, k - 1)));
    }
    Ok(cert)
}

/// Orthonormal bases `(Q_r, Q_c)` of the range and kernel of a Hermitian
/// projection, from its eigendecomposition.
fn projection_bases(p: &CMatrix) -> (CMatrix, CMatrix) {
    let eig = SymmetricEigen::new((p + p.adjoint()) * c(0.5, 0.0));
    let (mut range, mut kernel) = (Vec::new(), Vec::new());
    for (i, &l) in eig.eigenvalues.iter().enumerate() {
        let col = eig.eigenvectors.column(i).into_owned();
        if l > 0.5 {
            range.push(col);
        } else {
            kernel.push(col);
        }
    }
    let n = p.nrows();
    let stack = |cols: &[nalgebra::DVector<Complex64>]| {
        if cols.is_empty() {
            CMatrix::zeros(n, 0)
        } else {
            CMatrix::from_columns(cols)
        }
    };
    (stack(&range), stack(&kernel))
}

/// The projection `[[ (1 + √(1 − 4YY*))/2, Y ], [ Y*, (1 − √(1 − 4Y*Y))/2 ]]`
/// in the basis `[Q_r Q_c]`, for `‖Y‖ < 1/2`. Working in this basis keeps
/// the square roots away from the kernel, where they are ill-conditioned.
fn corner_projection(qr: &CMatrix, qc: &CMatrix, y: &CMatrix, clamp: f64) -> Result<CMatrix> {
    let (r, m) = (qr.ncols(), qc.ncols());
    let four = c(4.0, 0.0);
    let half = c(0.5, 0.0);
    let top = psd_sqrt(&(identity(r) - y * y.adjoint() * four), clamp)?;
    let bottom = psd_sqrt(&(identity(m) - y.adjoint() * y * four), clamp)?;
    let tl = (identity(r) + top) * half;
    let br = (identity(m) - bottom) * half;
    Ok(qr * tl * qr.adjoint() + qr * y * qc.adjoint() + qc * y.adjoint() * qr.adjoint() + qc * br * qc.adjoint())
}

/// Writes an idempotent as a combination of (at most) four orthogonal
/// projections: its range projection `p` and three projections built from
/// the rescaled nilpotent part `e − p`.
pub fn idempotent_to_projections(e: &CMatrix, cfg: &NumConfig) -> Result<DecompCertificate> {
    ensure_square_finite(e, "input")?;
    let scale = op_norm(e).powi(2).max(1.0);
    if op_norm(&(e * e - e)) > cfg.tol * scale {
        return Err(Error::Precondition("input is not an idempotent".into()));
    }
    let (qr, qc) = projection_bases(&range_projection(e, cfg.rank_tol)?);
    let p = &qr * qr.adjoint();
    // e − p = p e (1 − p) in the basis [Q_r Q_c].
    let y = qr.adjoint() * e * &qc;
    let mut terms = Vec::new();
    if qr.ncols() > 0 {
        terms.push(CertTerm::unit(TermForm::Plain(p)));
    }
    let ny = op_norm(&y);
    if ny > cfg.rank_tol * scale.sqrt() {
        let s = ny / cfg.davidson_norm;
        let y = &y * c(1.0 / s, 0.0);
        let i = Complex64::i();
        let parts = [
            (c(1.0, 1.0) / 4.0 * s, y.clone()),
            (c(-1.0, 1.0) / 4.0 * s, -&y),
            (-i / 2.0 * s, &y * i),
        ];
        for (coeff, arg) in parts {
            terms.push(CertTerm::new(coeff, TermForm::Plain(corner_projection(&qr, &qc, &arg, cfg.clamp)?)));
        }
    }
    Ok(DecompCertificate::new(CertKind::ProjectionCombo, terms, e, cfg.tol))
}

fn single_commutator(f: &CMatrix, cfg: &NumConfig) -> Result<(CMatrix, CMatrix)> {
    let step = aluthge_step(f, cfg)?;
    Ok((step.a, step.b))
}

/// `x b x* = (x b |x|^{1/2}) · (|x|^{1/2} v*)` with both factors square-zero,
/// each written as a single commutator.
pub fn sandwich_product_of_commutators(x: &CMatrix, b: &CMatrix, cfg: &NumConfig) -> Result<DecompCertificate> {
    ensure_square_finite(x, "x")?;
    ensure_square_finite(b, "b")?;
    if x.nrows() != b.nrows() {
        return Err(Error::DimensionMismatch("x and b differ in size".into()));
    }
    if !is_square_zero(x, cfg.tol) {
        return Err(Error::Precondition("x is not square-zero".into()));
    }
    let target = x * b * x.adjoint();
    if op_norm(x) == 0.0 {
        return Ok(DecompCertificate::new(CertKind::ProductOfCommutators, Vec::new(), &target, cfg.tol));
    }
    let p = polar_decomposition(x, cfg.rank_tol)?;
    let f1 = x * b * &p.abs_sqrt;
    let f2 = &p.abs_sqrt * p.v.adjoint();
    if !is_square_zero(&f1, cfg.tol) || !is_square_zero(&f2, cfg.tol) {
        return Err(Error::Numeric("sandwich factors are not square-zero".into()));
    }
    let (a1, b1) = single_commutator(&f1, cfg)?;
    let (a2, b2) = single_commutator(&f2, cfg)?;
    let term = CertTerm::unit(TermForm::ProductOfCommutators(a1, b1, a2, b2));
    Ok(DecompCertificate::new(CertKind::ProductOfCommutators, vec![term], &target, cfg.tol))
}

/// Checks `1 = Σ d_i* x_i* x_i d_i` with every `x_i` square-zero.
pub fn check_divisibility_witness(witness: &[(CMatrix, CMatrix)], n: usize, cfg: &NumConfig) -> Result<f64> {
    let mut sum = zeros(n);
    for (x, d) in witness {
        ensure_square_finite(x, "witness x")?;
        ensure_square_finite(d, "witness d")?;
        if x.nrows() != n || d.nrows() != n {
            return Err(Error::DimensionMismatch("witness size differs from target".into()));
        }
        if !is_square_zero(x, cfg.tol) {
            return Err(Error::Precondition("witness element is not square-zero".into()));
        }
        sum += d.adjoint() * x.adjoint() * x * d;
    }
    let defect = op_norm(&(identity(n) - sum));
    if defect > cfg.tol {
        return Err(Error::Precondition(format!("witness misses the unit by {defect:e}")));
    }
    Ok(defect)
}

/// `a = Σ [d_i* x_i*, x_i d_i a] + Σ x_i (d_i a d_i*) x_i*`, the second sum
/// rewritten as products of two commutators.
pub fn divisibility_to_commutator_sum(
    a: &CMatrix,
    witness: &[(CMatrix, CMatrix)],
    cfg: &NumConfig,
) -> Result<DecompCertificate> {
    ensure_square_finite(a, "target")?;
    check_divisibility_witness(witness, a.nrows(), cfg)?;
    let mut terms = Vec::new();
    for (x, d) in witness {
        terms.push(CertTerm::unit(TermForm::Commutator(d.adjoint() * x.adjoint(), x * d * a)));
    }
    for (x, d) in witness {
        let inner = d * a * d.adjoint();
        terms.extend(sandwich_product_of_commutators(x, &inner, cfg)?.terms);
    }
    Ok(DecompCertificate::new(CertKind::CommutatorsAndProducts, terms, a, cfg.tol))
}

/// Splits `[a, x]` for square-zero `x` into five square-zero terms, using the
/// support projection `e` and range projection `f` of `x`:
/// `(1−e)ax + (1+z)x(1−z) + zxz − x − xa(1−f)` with `z = eaf`.
pub fn commutator_to_square_zeros(x: &CMatrix, a: &CMatrix, cfg: &NumConfig) -> Result<DecompCertificate> {
    ensure_square_finite(x, "x")?;
    ensure_square_finite(a, "a")?;
    if x.nrows() != a.nrows() {
        return Err(Error::DimensionMismatch("x and a differ in size".into()));
    }
    if !is_square_zero(x, cfg.tol) {
        return Err(Error::Precondition("x is not square-zero".into()));
    }
    let n = x.nrows();
    let one = identity(n);
    let e = support_projection(x, cfg.rank_tol)?;
    let f = range_projection(x, cfg.rank_tol)?;
    let z = &e * a * &f;
    let target = a * x - x * a;
    let parts = [
        (&one - &e) * a * x,
        (&one + &z) * x * (&one - &z),
        &z * x * &z,
        -x,
        -(x * a * (&one - &f)),
    ];
    let terms = parts.into_iter().map(|t| CertTerm::unit(TermForm::Plain(t))).collect();
    Ok(DecompCertificate::new(CertKind::SquareZeroSum, terms, &target, cfg.tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::cert::verify;
    use crate::decomp::linalg::{bracket, nilpotency_order_at_scale, unit};
    use crate::decomp::sample::{random_idempotent, random_matrix, random_nilpotent, random_square_zero};
    use crate::rng::stream_rng;

    fn cfg() -> NumConfig {
        NumConfig::default()
    }

    fn close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
        op_norm(&(a - b)) <= tol
    }

    #[test]
    fn aluthge_examples() {
        let e12 = unit(2, 0, 1);
        let s = aluthge_step(&e12, &cfg()).unwrap();
        assert!(op_norm(&s.next) < 1e-14);
        assert!(close(&bracket(&s.a, &s.b), &e12, 1e-14));
        assert!(close(&s.a, &e12, 1e-14) && close(&s.b, &unit(2, 1, 1), 1e-14));

        let j3 = unit(3, 0, 1) + unit(3, 1, 2);
        let t = aluthge_transform(&j3, &cfg()).unwrap();
        assert_eq!(numeric_nilpotency_order(&t, 1e-10), 2);

        let mut rng = stream_rng(1, 0);
        let h = random_matrix(&mut rng, 3);
        let normal = &h + h.adjoint();
        assert!(close(&aluthge_transform(&normal, &cfg()).unwrap(), &normal, 1e-10));
    }

    #[test]
    fn nilpotent_examples() {
        let e12 = unit(2, 0, 1);
        let cert = nilpotent_to_commutators(&e12, 2, &cfg()).unwrap();
        assert_eq!(cert.terms.len(), 1);
        assert!(cert.residual <= 1e-12);
        let j3 = unit(3, 0, 1) + unit(3, 1, 2);
        let cert = nilpotent_to_commutators(&j3, 3, &cfg()).unwrap();
        assert_eq!(cert.terms.len(), 2);
        assert!(cert.residual <= 1e-10);
        let mut rng = stream_rng(2, 0);
        let x = random_nilpotent(&mut rng, 5, 4);
        let cert = nilpotent_to_commutators(&x, 4, &cfg()).unwrap();
        assert_eq!(cert.terms.len(), 3);
        assert!(verify(&cert, &x).valid);
        assert!(nilpotent_to_commutators(&j3, 2, &cfg()).is_err());
        assert!(nilpotent_to_commutators(&identity(2), 2, &cfg()).is_err());
    }

    #[test]
    fn aluthge_orders_strictly_decrease() {
        let mut rng = stream_rng(3, 0);
        for k in 2..=5 {
            let x = random_nilpotent(&mut rng, 5, k);
            let its = aluthge_iterates(&x, k - 1, &cfg()).unwrap();
            let scale = op_norm(&x);
            let orders: Vec<usize> =
                its.iter().map(|m| nilpotency_order_at_scale(m, 1e-8, scale)).collect();
            assert_eq!(orders[0], k);
            assert!(orders.windows(2).all(|w| w[1] < w[0]), "{orders:?}");
        }
    }

    #[test]
    fn idempotent_examples() {
        let e = unit(2, 0, 0) + unit(2, 0, 1);
        let cert = idempotent_to_projections(&e, &cfg()).unwrap();
        assert_eq!(cert.terms.len(), 4);
        let v = verify(&cert, &e);
        assert!(v.residual <= 1e-10 && v.side_violation <= 1e-10 && v.valid);
        let p = unit(3, 1, 1);
        assert_eq!(idempotent_to_projections(&p, &cfg()).unwrap().terms.len(), 1);
        assert!(idempotent_to_projections(&zeros(2), &cfg()).unwrap().terms.is_empty());
        assert!(idempotent_to_projections(&(identity(2) * c(2.0, 0.0)), &cfg()).is_err());
        let mut rng = stream_rng(4, 0);
        for n in 2..=5 {
            let e = random_idempotent(&mut rng, n, 10.0);
            assert!(verify(&idempotent_to_projections(&e, &cfg()).unwrap(), &e).valid);
        }
    }

    #[test]
    fn sandwich_examples() {
        let e12 = unit(2, 0, 1);
        let cert = sandwich_product_of_commutators(&e12, &identity(2), &cfg()).unwrap();
        match &cert.terms[0].form {
            TermForm::ProductOfCommutators(a, b, c2, d) => {
                assert!(close(a, &e12, 1e-14) && close(b, &unit(2, 1, 1), 1e-14));
                assert!(close(c2, &unit(2, 1, 0), 1e-14) && close(d, &unit(2, 0, 0), 1e-14));
            }
            other => panic!("unexpected term {other:?}"),
        }
        assert!(verify(&cert, &unit(2, 0, 0)).valid);
        let z = sandwich_product_of_commutators(&zeros(2), &identity(2), &cfg()).unwrap();
        assert!(z.terms.is_empty() && z.residual == 0.0);
        let mut rng = stream_rng(5, 0);
        let x = random_square_zero(&mut rng, 4);
        let b = random_matrix(&mut rng, 4);
        let cert = sandwich_product_of_commutators(&x, &b, &cfg()).unwrap();
        assert!(verify(&cert, &(&x * &b * x.adjoint())).residual <= 1e-9);
        assert!(sandwich_product_of_commutators(&identity(2), &b.rows(0, 2).columns(0, 2).into_owned(), &cfg()).is_err());
    }

    fn witness_m2() -> Vec<(CMatrix, CMatrix)> {
        vec![(unit(2, 0, 1), unit(2, 1, 1)), (unit(2, 1, 0), unit(2, 0, 0))]
    }

    #[test]
    fn divisibility_examples() {
        let w = witness_m2();
        for a in [unit(2, 0, 0), zeros(2), identity(2)] {
            let cert = divisibility_to_commutator_sum(&a, &w, &cfg()).unwrap();
            assert_eq!(cert.terms.len(), 4);
            assert!(verify(&cert, &a).residual <= 1e-10);
        }
        let bad = vec![(unit(2, 0, 1), unit(2, 1, 1))];
        assert!(divisibility_to_commutator_sum(&identity(2), &bad, &cfg()).is_err());
    }

    #[test]
    fn five_square_zero_examples() {
        let x = unit(2, 0, 1);
        let a = unit(2, 1, 0);
        let cert = commutator_to_square_zeros(&x, &a, &cfg()).unwrap();
        let expect = [
            zeros(2),
            unit(2, 0, 1) + unit(2, 1, 1) - unit(2, 0, 0) - unit(2, 1, 0),
            unit(2, 1, 0),
            -unit(2, 0, 1),
            zeros(2),
        ];
        for (t, want) in cert.terms.iter().zip(&expect) {
            assert!(close(&t.value(), want, 1e-14));
        }
        assert!(close(&cert.reconstruct(2), &(unit(2, 1, 1) - unit(2, 0, 0)), 1e-14));
        assert!(verify(&cert, &bracket(&a, &x)).valid);

        let central = identity(2) * c(3.0, -1.0);
        let cert = commutator_to_square_zeros(&x, &central, &cfg()).unwrap();
        assert!(op_norm(&cert.reconstruct(2)) < 1e-14);

        let mut rng = stream_rng(6, 0);
        let x = random_square_zero(&mut rng, 4);
        let a = random_matrix(&mut rng, 4);
        let cert = commutator_to_square_zeros(&x, &a, &cfg()).unwrap();
        let v = verify(&cert, &bracket(&a, &x));
        assert!(v.residual <= 1e-9 && v.side_violation <= 1e-8 && v.term_count == 5);
    }

    #[test]
    fn certificates_are_linear_in_the_target() {
        let mut rng = stream_rng(7, 0);
        let x = random_square_zero(&mut rng, 3);
        let a = random_matrix(&mut rng, 3);
        let lambda = c(-2.5, 0.75);
        let cert = commutator_to_square_zeros(&x, &a, &cfg()).unwrap();
        let scaled = commutator_to_square_zeros(&x, &(&a * lambda), &cfg()).unwrap();
        let target = bracket(&a, &x) * lambda;
        assert!(verify(&scaled, &target).residual <= 1e-9);
        assert!(verify(&cert.scaled(lambda), &target).residual <= 1e-9);
        let w = witness_m2();
        let t = random_matrix(&mut rng, 2);
        let d = divisibility_to_commutator_sum(&t, &w, &cfg()).unwrap();
        let ds = divisibility_to_commutator_sum(&(&t * lambda), &w, &cfg()).unwrap();
        assert!(verify(&ds, &(&t * lambda)).residual <= 1e-9);
        assert!(verify(&d.scaled(lambda), &(&t * lambda)).residual <= 1e-9);
    }

    #[test]
    fn verify_rejects_tampering() {
        let x = unit(2, 0, 1);
        let a = unit(2, 1, 0);
        let mut cert = commutator_to_square_zeros(&x, &a, &cfg()).unwrap();
        cert.terms[2] = CertTerm::unit(TermForm::Plain(identity(2)));
        let v = verify(&cert, &bracket(&a, &x));
        assert!(!v.valid && v.side_violation > 0.5);
    }
}
