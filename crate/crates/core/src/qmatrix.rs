//! Dense square matrices over the Gaussian rationals.

use std::fmt;

use crate::freealg::GaussRat;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    n: usize,
    data: Vec<GaussRat>,
}

impl QMatrix {
    pub fn zeros(n: usize) -> Self {
        QMatrix { n, data: vec![GaussRat::ZERO; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, GaussRat::ONE)
    }

    pub fn scalar(n: usize, c: GaussRat) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = c.clone();
        }
        m
    }

    /// The matrix unit `e_{ij}` (zero-based indices).
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n);
        m.data[i * n + j] = GaussRat::ONE;
        m
    }

    pub fn from_vec(n: usize, data: Vec<GaussRat>) -> Self {
        assert_eq!(data.len(), n * n, "QMatrix::from_vec: wrong length");
        QMatrix { n, data }
    }

    /// Integer matrix from rows.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let n = rows.len();
        let data = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), n);
                r.iter().map(|&v| GaussRat::from(v))
            })
            .collect();
        QMatrix { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn data(&self) -> &[GaussRat] {
        &self.data
    }

    pub fn into_data(self) -> Vec<GaussRat> {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &GaussRat {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: GaussRat) {
        self.data[i * self.n + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(GaussRat::is_zero)
    }

    pub fn mul(&self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &rhs.data[k * n + j];
                    if !b.is_zero() {
                        out.data[i * n + j] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.n, rhs.n);
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        QMatrix { n: self.n, data }
    }

    pub fn sub(&self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.n, rhs.n);
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        QMatrix { n: self.n, data }
    }

    pub fn scale(&self, c: &GaussRat) -> QMatrix {
        QMatrix { n: self.n, data: self.data.iter().map(|a| a * c).collect() }
    }

    /// `self += c * rhs`
    pub fn add_scaled(&mut self, rhs: &QMatrix, c: &GaussRat) {
        assert_eq!(self.n, rhs.n);
        if c.is_zero() {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            if !b.is_zero() {
                *a += &(b * c);
            }
        }
    }

    /// `[self, rhs] = self·rhs − rhs·self`
    pub fn bracket(&self, rhs: &QMatrix) -> QMatrix {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    pub fn trace(&self) -> GaussRat {
        let mut t = GaussRat::ZERO;
        for i in 0..self.n {
            t += self.get(i, i);
        }
        t
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> QMatrix {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    /// Gauss–Jordan inverse; `None` if singular.
    pub fn inverse(&self) -> Option<QMatrix> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                    inv.data.swap(pivot * n + j, col * n + j);
                }
            }
            let p = a.get(col, col).inv()?;
            for j in 0..n {
                a.data[col * n + j] = &a.data[col * n + j] * &p;
                inv.data[col * n + j] = &inv.data[col * n + j] * &p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let da = &a.data[col * n + j] * &factor;
                    a.data[r * n + j] -= &da;
                    let di = &inv.data[col * n + j] * &factor;
                    inv.data[r * n + j] -= &di;
                }
            }
        }
        Some(inv)
    }

    pub fn pow(&self, e: u32) -> QMatrix {
        let mut out = Self::identity(self.n);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_products() {
        let e12 = QMatrix::unit(2, 0, 1);
        let e21 = QMatrix::unit(2, 1, 0);
        let h = e12.bracket(&e21);
        assert_eq!(h, QMatrix::from_int_rows(&[&[1, 0], &[0, -1]]));
        assert!(e12.mul(&e12).is_zero());
        assert!(h.trace().is_zero());
    }

    #[test]
    fn inverse_roundtrip() {
        let m = QMatrix::from_int_rows(&[&[2, 1, 0], &[1, 1, 0], &[0, 3, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), QMatrix::identity(3));
        assert!(QMatrix::from_int_rows(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }
}
