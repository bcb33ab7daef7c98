//! Dense complex matrices: one-sided Jacobi SVD, norms, projections and
//! positive square roots.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::freealg::{EvalRing, GaussRat};

pub type CMatrix = DMatrix<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn zeros(n: usize) -> CMatrix {
    CMatrix::zeros(n, n)
}

/// `e_{ij}` in `M_n` (zero-based).
pub fn unit(n: usize, i: usize, j: usize) -> CMatrix {
    let mut m = zeros(n);
    m[(i, j)] = c(1.0, 0.0);
    m
}

pub fn bracket(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn is_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub(crate) fn ensure_square_finite(m: &CMatrix, what: &str) -> Result<()> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!("{what} is {}×{}, expected square", m.nrows(), m.ncols())));
    }
    if !is_finite(m) {
        return Err(Error::Numeric(format!("{what} has non-finite entries")));
    }
    Ok(())
}

/// Singular value decomposition `A = U Σ V*`, singular values descending.
///
/// Columns of `u` belonging to zero singular values are zero.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: CMatrix,
    pub sigma: Vec<f64>,
    pub v: CMatrix,
}

impl Svd {
    /// Number of singular values above `rank_tol · σ_max`.
    pub fn rank(&self, rank_tol: f64) -> usize {
        let max = self.sigma.first().copied().unwrap_or(0.0);
        if max == 0.0 {
            return 0;
        }
        self.sigma.iter().take_while(|&&s| s > rank_tol * max).count()
    }
}

fn column_dot(w: &CMatrix, p: usize, q: usize) -> Complex64 {
    w.column(p).iter().zip(w.column(q).iter()).map(|(a, b)| a.conj() * b).sum()
}

fn rotate(w: &mut CMatrix, p: usize, q: usize, cs: f64, sn: f64, phase: Complex64) {
    for r in 0..w.nrows() {
        let a = w[(r, p)];
        let b = w[(r, q)] * phase;
        w[(r, p)] = a * cs - b * sn;
        w[(r, q)] = a * sn + b * cs;
    }
}

/// One-sided Jacobi SVD.
///
/// Pairs of columns of `W = A V` are rotated until mutually orthogonal; the
/// column norms are then the singular values.
pub fn svd(a: &CMatrix) -> Result<Svd> {
    if !is_finite(a) {
        return Err(Error::Numeric("SVD of a matrix with non-finite entries".into()));
    }
    let n = a.ncols();
    let mut w = a.clone();
    let mut v = CMatrix::identity(n, n);
    let eps = 1e-15;
    let mut converged = false;
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = w.column(p).norm_squared();
                let beta = w.column(q).norm_squared();
                let gamma = column_dot(&w, p, q);
                let g = gamma.norm();
                if g == 0.0 || g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma.conj() / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                rotate(&mut w, p, q, cs, sn, phase);
                rotate(&mut v, p, q, cs, sn, phase);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numeric("Jacobi SVD did not converge".into()));
    }
    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n).map(|j| w.column(j).norm()).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let m = a.nrows();
    let mut u = CMatrix::zeros(m, n);
    let mut vs = CMatrix::zeros(n, n);
    let mut sigma = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        let s = norms[src];
        sigma.push(s);
        if s > 0.0 {
            u.set_column(dst, &(w.column(src) / c(s, 0.0)));
        }
        vs.set_column(dst, &v.column(src));
    }
    Ok(Svd { u, sigma, v: vs })
}

/// Operator norm (largest singular value).
pub fn op_norm(a: &CMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    // The Frobenius norm of a finite matrix is a safe fallback on failure.
    svd(a).map(|s| s.sigma.first().copied().unwrap_or(0.0)).unwrap_or_else(|_| a.norm())
}

/// `Σ_j f(σ_j) w_j w_j*` over the first `r` columns of `w`.
fn spectral_sum(w: &CMatrix, sigma: &[f64], r: usize, f: impl Fn(f64) -> f64) -> CMatrix {
    let n = w.nrows();
    let mut out = zeros(n);
    for j in 0..r {
        let col = w.column(j);
        let s = c(f(sigma[j]), 0.0);
        out += col * col.adjoint() * s;
    }
    out
}

fn hermitian_part(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()) * c(0.5, 0.0)
}

/// Orthogonal projection onto the column space, from the SVD.
pub fn range_projection(a: &CMatrix, rank_tol: f64) -> Result<CMatrix> {
    let s = svd(a)?;
    let r = s.rank(rank_tol);
    Ok(hermitian_part(&spectral_sum(&s.u, &s.sigma, r, |_| 1.0)))
}

/// Orthogonal projection onto the range of `a*` (the orthogonal complement
/// of the kernel).
pub fn support_projection(a: &CMatrix, rank_tol: f64) -> Result<CMatrix> {
    let s = svd(a)?;
    let r = s.rank(rank_tol);
    Ok(hermitian_part(&spectral_sum(&s.v, &s.sigma, r, |_| 1.0)))
}

/// Principal square root of a positive semidefinite matrix via the
/// Hermitian eigendecomposition. Eigenvalues down to `−clamp · max(1, ‖h‖)`
/// are treated as zero; anything more negative is an error.
pub fn psd_sqrt(h: &CMatrix, clamp: f64) -> Result<CMatrix> {
    ensure_square_finite(h, "matrix")?;
    let n = h.nrows();
    if n == 0 {
        return Ok(h.clone());
    }
    let eig = SymmetricEigen::new(hermitian_part(h));
    let scale = eig.eigenvalues.iter().fold(1.0f64, |m, l| m.max(l.abs()));
    let mut roots = DVector::<f64>::zeros(n);
    for (i, &l) in eig.eigenvalues.iter().enumerate() {
        if l < -clamp * scale {
            return Err(Error::Numeric(format!("negative eigenvalue {l:e} in square root")));
        }
        roots[i] = l.max(0.0).sqrt();
    }
    let q = &eig.eigenvectors;
    let d = CMatrix::from_diagonal(&roots.map(|r| c(r, 0.0)));
    Ok(hermitian_part(&(q * d * q.adjoint())))
}

/// Polar decomposition `x = v|x|` from the SVD `x = UΣV*`:
/// `|x| = VΣV*`, `v = U_r V_r*` and `|x|^{1/2} = VΣ^{1/2}V*`.
#[derive(Clone, Debug)]
pub struct Polar {
    pub v: CMatrix,
    pub abs: CMatrix,
    pub abs_sqrt: CMatrix,
    pub rank: usize,
}

pub fn polar_decomposition(x: &CMatrix, rank_tol: f64) -> Result<Polar> {
    ensure_square_finite(x, "input")?;
    let s = svd(x)?;
    let r = s.rank(rank_tol);
    let n = x.nrows();
    let mut v = zeros(n);
    for j in 0..r {
        v += s.u.column(j) * s.v.column(j).adjoint();
    }
    let abs = hermitian_part(&spectral_sum(&s.v, &s.sigma, r, |t| t));
    let abs_sqrt = hermitian_part(&spectral_sum(&s.v, &s.sigma, r, f64::sqrt));
    Ok(Polar { v, abs, abs_sqrt, rank: r })
}

/// Smallest `j ≥ 1` with `‖x^j‖ ≤ tol · ‖x‖^j`, up to `n + 1`.
pub fn numeric_nilpotency_order(x: &CMatrix, tol: f64) -> usize {
    nilpotency_order_at_scale(x, tol, 0.0)
}

/// As [`numeric_nilpotency_order`], measuring powers against
/// `max(scale, ‖x‖)^j`. Used for matrices derived from a larger one, whose
/// rounding noise should count as zero.
pub fn nilpotency_order_at_scale(x: &CMatrix, tol: f64, scale: f64) -> usize {
    let n = x.nrows();
    let norm = op_norm(x).max(scale);
    if norm == 0.0 {
        return 1;
    }
    let mut p = x.clone();
    for j in 1..=n {
        if op_norm(&p) <= tol * norm.powi(j as i32) {
            return j;
        }
        p = &p * x;
    }
    n + 1
}

impl EvalRing for CMatrix {
    type Coeff = Complex64;

    fn coeff(&self, c: &GaussRat) -> Result<Complex64> {
        Ok(c.to_complex())
    }
    fn one_like(&self) -> Self {
        identity(self.nrows())
    }
    fn zero_like(&self) -> Self {
        zeros(self.nrows())
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn add_scaled(&mut self, rhs: &Self, c: &Complex64) {
        *self += rhs * *c;
    }
    fn add_scalar(&mut self, c: &Complex64) {
        for i in 0..self.nrows().min(self.ncols()) {
            self[(i, i)] += *c;
        }
    }
    fn shape(&self) -> Vec<usize> {
        vec![self.nrows(), self.ncols()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::sample::random_matrix;
    use crate::rng::stream_rng;

    fn assert_close(a: &CMatrix, b: &CMatrix, tol: f64) {
        let d = op_norm(&(a - b));
        assert!(d <= tol, "difference {d:e} exceeds {tol:e}");
    }

    #[test]
    fn svd_reconstructs_and_is_orthonormal() {
        let mut rng = stream_rng(1, 0);
        for n in 1..=6 {
            let a = random_matrix(&mut rng, n);
            let s = svd(&a).unwrap();
            let sig = CMatrix::from_diagonal(&DVector::from_iterator(n, s.sigma.iter().map(|&x| c(x, 0.0))));
            assert_close(&(&s.u * sig * s.v.adjoint()), &a, 1e-12);
            assert_close(&(s.v.adjoint() * &s.v), &identity(n), 1e-12);
            assert!(s.sigma.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn svd_against_hermitian_eigenvalues() {
        // Oracle: singular values are square roots of the eigenvalues of A*A.
        let mut rng = stream_rng(2, 0);
        let a = random_matrix(&mut rng, 5);
        let s = svd(&a).unwrap();
        let mut ev: Vec<f64> = SymmetricEigen::new(a.adjoint() * &a).eigenvalues.iter().map(|l| l.max(0.0).sqrt()).collect();
        ev.sort_by(|x, y| y.total_cmp(x));
        for (x, y) in s.sigma.iter().zip(ev) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn polar_examples() {
        let e12 = unit(2, 0, 1);
        let p = polar_decomposition(&e12, 1e-10).unwrap();
        assert_close(&p.v, &e12, 1e-14);
        assert_close(&p.abs, &unit(2, 1, 1), 1e-14);
        let z = polar_decomposition(&zeros(3), 1e-10).unwrap();
        assert_eq!(z.rank, 0);
        assert!(op_norm(&z.v) == 0.0 && op_norm(&z.abs) == 0.0);
        let mut rng = stream_rng(3, 0);
        let x = random_matrix(&mut rng, 4);
        let p = polar_decomposition(&x, 1e-10).unwrap();
        assert_close(&(&p.v * &p.abs), &x, 1e-12);
        assert_close(&(&p.abs_sqrt * &p.abs_sqrt), &p.abs, 1e-12);
    }

    #[test]
    fn projections_and_roots() {
        let x = unit(3, 0, 2);
        assert_close(&range_projection(&x, 1e-10).unwrap(), &unit(3, 0, 0), 1e-14);
        assert_close(&support_projection(&x, 1e-10).unwrap(), &unit(3, 2, 2), 1e-14);
        let mut rng = stream_rng(4, 0);
        let a = random_matrix(&mut rng, 4);
        let h = a.adjoint() * &a;
        let r = psd_sqrt(&h, 1e-12).unwrap();
        assert_close(&(&r * &r), &h, 1e-10);
        assert!(psd_sqrt(&(-identity(2)), 1e-12).is_err());
        assert!(matches!(svd(&CMatrix::from_element(2, 2, c(f64::NAN, 0.0))), Err(Error::Numeric(_))));
    }

    #[test]
    fn nilpotency_order() {
        let x = unit(3, 0, 1) + unit(3, 1, 2);
        assert_eq!(numeric_nilpotency_order(&x, 1e-10), 3);
        assert_eq!(numeric_nilpotency_order(&zeros(2), 1e-10), 1);
        assert_eq!(numeric_nilpotency_order(&identity(2), 1e-10), 3);
    }
}
