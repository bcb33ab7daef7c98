//! Seeded random complex matrices with prescribed structure.

use num_complex::Complex;
use rand::Rng;

use super::linalg::{c, identity, op_norm, zeros, CMatrix};

/// Entries with real and imaginary parts uniform in `[−1, 1]`.
pub fn random_matrix<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| c(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0)))
}

fn random_rect<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| c(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0)))
}

/// Unitary factor of the QR decomposition of a random matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    loop {
        let a = random_matrix(rng, n);
        let qr = a.clone().qr();
        if qr.r().diagonal().iter().all(|d| d.norm() > 1e-3) {
            return qr.q();
        }
    }
}

/// Well-conditioned invertible matrix `I + G/(2‖G‖)` and its inverse.
fn mild_similarity<R: Rng>(rng: &mut R, n: usize) -> (CMatrix, CMatrix) {
    let g = random_matrix(rng, n);
    let norm = op_norm(&g).max(1e-12);
    let s = identity(n) + g * c(0.5 / norm, 0.0);
    let inv = s.clone().try_inverse().expect("‖S − 1‖ ≤ 1/2");
    (s, inv)
}

/// Nilpotent of order exactly `k` in `M_n`: a block-diagonal of strictly
/// upper-triangular blocks (largest of size `k`), conjugated by a random
/// unitary and a mild similarity.
pub fn random_nilpotent<R: Rng>(rng: &mut R, n: usize, k: usize) -> CMatrix {
    assert!(1 <= k && k <= n);
    let mut parts = vec![k];
    let mut left = n - k;
    while left > 0 {
        let p = rng.random_range(1..=left.min(k));
        parts.push(p);
        left -= p;
    }
    let mut j = zeros(n);
    let mut start = 0;
    for p in parts {
        for r in start..start + p {
            for col in r + 1..start + p {
                j[(r, col)] = if col == r + 1 {
                    let mag = rng.random_range(0.5..=2.0);
                    let ang = rng.random_range(0.0..std::f64::consts::TAU);
                    Complex::from_polar(mag, ang)
                } else {
                    c(rng.random_range(-0.5..=0.5), rng.random_range(-0.5..=0.5))
                };
            }
        }
        start += p;
    }
    let u = random_unitary(rng, n);
    let (s, si) = mild_similarity(rng, n);
    &s * &u * j * u.adjoint() * si
}

/// Square-zero matrix `U_f Y U_e*` with orthogonal ranges `f ⊥ e`.
pub fn random_square_zero<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    if n < 2 {
        return zeros(n);
    }
    let r = rng.random_range(1..=n / 2);
    let s = rng.random_range(1..=n - r);
    let u = random_unitary(rng, n);
    let y = random_rect(rng, r, s);
    let uf = u.columns(0, r).into_owned();
    let ue = u.columns(r, s).into_owned();
    let x = uf * y * ue.adjoint();
    let scale = rng.random_range(0.1..=5.0) / op_norm(&x).max(1e-12);
    x * c(scale, 0.0)
}

/// Idempotent `p + y` with `p` a random projection of rank `r` and
/// `y = p y (1 − p)`, scaled so that `‖y‖ ≤ max_norm − 1`.
pub fn random_idempotent<R: Rng>(rng: &mut R, n: usize, max_norm: f64) -> CMatrix {
    let r = rng.random_range(0..=n);
    let u = random_unitary(rng, n);
    let ur = u.columns(0, r).into_owned();
    let uc = u.columns(r, n - r).into_owned();
    let p = &ur * ur.adjoint();
    if r == 0 || r == n {
        return p;
    }
    let y = &ur * random_rect(rng, r, n - r) * uc.adjoint();
    let target = rng.random_range(0.0..=(max_norm - 1.0).max(0.0));
    let scale = target / op_norm(&y).max(1e-12);
    p + y * c(scale, 0.0)
}
