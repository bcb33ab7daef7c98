//! Arithmetic in `F_p[i]` for `p = 2^61 − 1` and matrices over it.
//!
//! Since `p ≡ 3 (mod 4)`, `F_p[i]` is the field with `p²` elements. A
//! Gaussian-integer matrix whose polynomial value is nonzero modulo `p` has a
//! nonzero value over `ℚ(i)` as well.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::freealg::{EvalRing, GaussRat};
use crate::qmatrix::QMatrix;

pub const P: u64 = (1 << 61) - 1;

fn reduce(x: u128) -> u64 {
    let lo = (x as u64) & P;
    let hi = (x >> 61) as u64;
    let mut r = lo + (hi & P) + (hi >> 61);
    while r >= P {
        r -= P;
    }
    r
}

fn mulm(a: u64, b: u64) -> u64 {
    reduce(a as u128 * b as u128)
}

fn addm(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

fn subm(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + P - b
    }
}

fn powm(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, a);
        }
        a = mulm(a, a);
        e >>= 1;
    }
    r
}

fn from_i64(v: i64) -> u64 {
    let r = (v as i128).rem_euclid(P as i128);
    r as u64
}

fn from_bigint(v: &BigInt) -> u64 {
    let m = v.mod_floor(&BigInt::from(P));
    m.to_u64().expect("reduced below p")
}

/// Element `re + im·i` of `F_{p²}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Fp2 {
    pub re: u64,
    pub im: u64,
}

impl Fp2 {
    pub const ZERO: Fp2 = Fp2 { re: 0, im: 0 };
    pub const ONE: Fp2 = Fp2 { re: 1, im: 0 };

    pub fn from_ints(re: i64, im: i64) -> Self {
        Fp2 { re: from_i64(re), im: from_i64(im) }
    }

    pub fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn add(self, o: Fp2) -> Fp2 {
        Fp2 { re: addm(self.re, o.re), im: addm(self.im, o.im) }
    }

    pub fn sub(self, o: Fp2) -> Fp2 {
        Fp2 { re: subm(self.re, o.re), im: subm(self.im, o.im) }
    }

    pub fn neg(self) -> Fp2 {
        Fp2::ZERO.sub(self)
    }

    pub fn mul(self, o: Fp2) -> Fp2 {
        let rr = self.re as u128 * o.re as u128;
        let ii = self.im as u128 * o.im as u128;
        let ri = self.re as u128 * o.im as u128;
        let ir = self.im as u128 * o.re as u128;
        Fp2 { re: subm(reduce(rr), reduce(ii)), im: addm(reduce(ri), reduce(ir)) }
    }

    /// Reduction of an exact coefficient; fails when `p` divides a denominator.
    pub fn from_gauss(c: &GaussRat) -> Result<Fp2> {
        if let Some((a, b)) = c.as_small_int() {
            return Ok(Fp2::from_ints(a, b));
        }
        let part = |q: num_rational::BigRational| -> Result<u64> {
            let den = from_bigint(q.denom());
            if den == 0 {
                return Err(Error::Numeric("coefficient denominator divisible by 2^61-1".into()));
            }
            let num = if q.numer().is_negative() {
                subm(0, from_bigint(&-q.numer()))
            } else {
                from_bigint(q.numer())
            };
            Ok(mulm(num, powm(den, P - 2)))
        };
        Ok(Fp2 { re: part(c.re())?, im: part(c.im())? })
    }
}

/// Coefficient with a marker for the common `±1` case.
#[derive(Clone, Copy, Debug)]
pub enum ModCoeff {
    One,
    MinusOne,
    Other(Fp2),
}

/// Square matrix over `F_{p²}`, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModMatrix {
    n: usize,
    data: Vec<Fp2>,
}

impl ModMatrix {
    pub fn zeros(n: usize) -> Self {
        ModMatrix { n, data: vec![Fp2::ZERO; n * n] }
    }

    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n);
        m.data[i * n + j] = Fp2::ONE;
        m
    }

    pub fn from_qmatrix(q: &QMatrix) -> Result<Self> {
        let data = q.data().iter().map(Fp2::from_gauss).collect::<Result<_>>()?;
        Ok(ModMatrix { n: q.n(), data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }
}

impl EvalRing for ModMatrix {
    type Coeff = ModCoeff;

    fn coeff(&self, c: &GaussRat) -> Result<ModCoeff> {
        Ok(match c.as_small_int() {
            Some((1, 0)) => ModCoeff::One,
            Some((-1, 0)) => ModCoeff::MinusOne,
            _ => ModCoeff::Other(Fp2::from_gauss(c)?),
        })
    }

    fn one_like(&self) -> Self {
        let mut m = Self::zeros(self.n);
        for i in 0..self.n {
            m.data[i * self.n + i] = Fp2::ONE;
        }
        m
    }

    fn zero_like(&self) -> Self {
        Self::zeros(self.n)
    }

    fn mul(&self, rhs: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let (mut re, mut im) = (0u64, 0u64);
                let (mut nre, mut nim) = (0u64, 0u64);
                for k in 0..n {
                    let a = self.data[i * n + k];
                    let b = rhs.data[k * n + j];
                    // Accumulate partial products reduced once per term.
                    re = addm(re, mulm(a.re, b.re));
                    nre = addm(nre, mulm(a.im, b.im));
                    im = addm(im, mulm(a.re, b.im));
                    nim = addm(nim, mulm(a.im, b.re));
                }
                out.data[i * n + j] = Fp2 { re: subm(re, nre), im: addm(im, nim) };
            }
        }
        out
    }

    fn add_scaled(&mut self, rhs: &Self, c: &ModCoeff) {
        match c {
            ModCoeff::One => {
                for (a, b) in self.data.iter_mut().zip(&rhs.data) {
                    *a = a.add(*b);
                }
            }
            ModCoeff::MinusOne => {
                for (a, b) in self.data.iter_mut().zip(&rhs.data) {
                    *a = a.sub(*b);
                }
            }
            ModCoeff::Other(c) => {
                for (a, b) in self.data.iter_mut().zip(&rhs.data) {
                    *a = a.add(b.mul(*c));
                }
            }
        }
    }

    fn add_scalar(&mut self, c: &ModCoeff) {
        let v = match c {
            ModCoeff::One => Fp2::ONE,
            ModCoeff::MinusOne => Fp2::ONE.neg(),
            ModCoeff::Other(c) => *c,
        };
        for i in 0..self.n {
            let d = &mut self.data[i * self.n + i];
            *d = d.add(v);
        }
    }

    fn shape(&self) -> Vec<usize> {
        vec![self.n]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::{eval_seq, parse_poly};

    #[test]
    fn field_basics() {
        let i = Fp2::from_ints(0, 1);
        assert_eq!(i.mul(i), Fp2::from_ints(-1, 0));
        let half = Fp2::from_gauss(&GaussRat::ratio(1, 2)).unwrap();
        assert_eq!(half.mul(Fp2::from_ints(2, 0)), Fp2::ONE);
        assert_eq!(mulm(P - 1, P - 1), 1);
        assert_eq!(reduce(u128::from(P) * u128::from(P)), 0);
    }

    #[test]
    fn agrees_with_exact_evaluation() {
        let f = parse_poly("(1/3+2i) x1 x2 x1 - x2^2 + 5 + [x1, x2]").unwrap();
        let a = QMatrix::from_int_rows(&[&[1, -2], &[3, 0]]);
        let b = QMatrix::from_int_rows(&[&[0, 4], &[-1, 6]]);
        let exact = eval_seq(&f, &[a.clone(), b.clone()]).unwrap();
        let modular =
            eval_seq(&f, &[ModMatrix::from_qmatrix(&a).unwrap(), ModMatrix::from_qmatrix(&b).unwrap()])
                .unwrap();
        assert_eq!(ModMatrix::from_qmatrix(&exact).unwrap(), modular);
    }
}
