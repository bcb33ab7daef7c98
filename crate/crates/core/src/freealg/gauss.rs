//! Exact Gaussian rationals `a + bi` with `a, b ∈ ℚ`.
//!
//! Values whose real and imaginary parts are both machine integers are kept
//! inline; everything else is boxed as a pair of `BigRational`s. The
//! representation is canonical, so derived equality and hashing are exact.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Int(i64, i64),
    Big(Box<(BigRational, BigRational)>),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussRat(Repr);

fn to_i64(r: &BigRational) -> Option<i64> {
    if r.is_integer() {
        r.numer().to_i64()
    } else {
        None
    }
}

impl GaussRat {
    pub const ZERO: GaussRat = GaussRat(Repr::Int(0, 0));
    pub const ONE: GaussRat = GaussRat(Repr::Int(1, 0));
    pub const I: GaussRat = GaussRat(Repr::Int(0, 1));

    pub fn int(re: i64, im: i64) -> Self {
        GaussRat(Repr::Int(re, im))
    }

    pub fn from_parts(re: BigRational, im: BigRational) -> Self {
        match (to_i64(&re), to_i64(&im)) {
            (Some(a), Some(b)) => GaussRat(Repr::Int(a, b)),
            _ => GaussRat(Repr::Big(Box::new((re, im)))),
        }
    }

    /// `num/den` as a real Gaussian rational. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::from_parts(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    pub fn re(&self) -> BigRational {
        match &self.0 {
            Repr::Int(a, _) => BigRational::from_integer(BigInt::from(*a)),
            Repr::Big(b) => b.0.clone(),
        }
    }

    pub fn im(&self) -> BigRational {
        match &self.0 {
            Repr::Int(_, b) => BigRational::from_integer(BigInt::from(*b)),
            Repr::Big(b) => b.1.clone(),
        }
    }

    fn parts(&self) -> (BigRational, BigRational) {
        (self.re(), self.im())
    }

    /// The value as a small Gaussian integer, if it is one.
    pub fn as_small_int(&self) -> Option<(i64, i64)> {
        match self.0 {
            Repr::Int(a, b) => Some((a, b)),
            Repr::Big(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Int(0, 0))
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Int(1, 0))
    }

    pub fn is_real(&self) -> bool {
        match &self.0 {
            Repr::Int(_, b) => *b == 0,
            Repr::Big(b) => b.1.is_zero(),
        }
    }

    pub fn conj(&self) -> Self {
        match &self.0 {
            Repr::Int(a, b) => match b.checked_neg() {
                Some(nb) => GaussRat(Repr::Int(*a, nb)),
                None => Self::from_parts(self.re(), -self.im()),
            },
            Repr::Big(b) => Self::from_parts(b.0.clone(), -b.1.clone()),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let (a, b) = self.parts();
        let norm = &a * &a + &b * &b;
        Some(Self::from_parts(&a / &norm, -(&b / &norm)))
    }

    /// Least common multiple of the denominators of both parts.
    pub fn denom_lcm(&self) -> BigInt {
        match &self.0 {
            Repr::Int(..) => BigInt::one(),
            Repr::Big(b) => num_integer::Integer::lcm(b.0.denom(), b.1.denom()),
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match &self.0 {
            Repr::Int(a, b) => Complex64::new(*a as f64, *b as f64),
            Repr::Big(b) => Complex64::new(
                b.0.to_f64().unwrap_or(f64::NAN),
                b.1.to_f64().unwrap_or(f64::NAN),
            ),
        }
    }

    /// Deg-lex style total order used only to make outputs deterministic.
    pub fn cmp_key(&self, other: &Self) -> Ordering {
        let (a, b) = self.parts();
        let (c, d) = other.parts();
        a.cmp(&c).then(b.cmp(&d))
    }
}

impl Default for GaussRat {
    fn default() -> Self {
        Self::ZERO
    }
}

impl From<i64> for GaussRat {
    fn from(v: i64) -> Self {
        GaussRat::int(v, 0)
    }
}

impl From<BigRational> for GaussRat {
    fn from(v: BigRational) -> Self {
        GaussRat::from_parts(v, BigRational::zero())
    }
}

impl<'a> Add<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: &GaussRat) -> GaussRat {
        if let (Repr::Int(a, b), Repr::Int(c, d)) = (&self.0, &rhs.0) {
            if let (Some(re), Some(im)) = (a.checked_add(*c), b.checked_add(*d)) {
                return GaussRat(Repr::Int(re, im));
            }
        }
        let (a, b) = self.parts();
        let (c, d) = rhs.parts();
        GaussRat::from_parts(a + c, b + d)
    }
}

impl<'a> Sub<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn sub(self, rhs: &GaussRat) -> GaussRat {
        if let (Repr::Int(a, b), Repr::Int(c, d)) = (&self.0, &rhs.0) {
            if let (Some(re), Some(im)) = (a.checked_sub(*c), b.checked_sub(*d)) {
                return GaussRat(Repr::Int(re, im));
            }
        }
        let (a, b) = self.parts();
        let (c, d) = rhs.parts();
        GaussRat::from_parts(a - c, b - d)
    }
}

impl<'a> Mul<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: &GaussRat) -> GaussRat {
        if let (Repr::Int(a, b), Repr::Int(c, d)) = (&self.0, &rhs.0) {
            let small = (|| {
                let re = a.checked_mul(*c)?.checked_sub(b.checked_mul(*d)?)?;
                let im = a.checked_mul(*d)?.checked_add(b.checked_mul(*c)?)?;
                Some(GaussRat(Repr::Int(re, im)))
            })();
            if let Some(v) = small {
                return v;
            }
        }
        let (a, b) = self.parts();
        let (c, d) = rhs.parts();
        GaussRat::from_parts(&a * &c - &b * &d, &a * &d + &b * &c)
    }
}

impl<'a> Div<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn div(self, rhs: &GaussRat) -> GaussRat {
        let inv = rhs.inv().expect("division by zero Gaussian rational");
        self * &inv
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        if let Repr::Int(a, b) = &self.0 {
            if let (Some(x), Some(y)) = (a.checked_neg(), b.checked_neg()) {
                return GaussRat(Repr::Int(x, y));
            }
        }
        let (a, b) = self.parts();
        GaussRat::from_parts(-a, -b)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<GaussRat> for GaussRat {
            type Output = GaussRat;
            fn $m(self, rhs: GaussRat) -> GaussRat { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a GaussRat> for GaussRat {
            type Output = GaussRat;
            fn $m(self, rhs: &'a GaussRat) -> GaussRat { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        -&self
    }
}

impl AddAssign<&GaussRat> for GaussRat {
    fn add_assign(&mut self, rhs: &GaussRat) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&GaussRat> for GaussRat {
    fn sub_assign(&mut self, rhs: &GaussRat) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&GaussRat> for GaussRat {
    fn mul_assign(&mut self, rhs: &GaussRat) {
        *self = &*self * rhs;
    }
}

impl Zero for GaussRat {
    fn zero() -> Self {
        Self::ZERO
    }
    fn is_zero(&self) -> bool {
        GaussRat::is_zero(self)
    }
}

impl One for GaussRat {
    fn one() -> Self {
        Self::ONE
    }
}

/// Writes a rational as `p` or `p/q`.
pub(crate) fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).ok()?;
    let den = BigInt::from_str(den).ok()?;
    if den.is_zero() || den.is_negative() {
        return None;
    }
    Some(BigRational::new(num, den))
}

impl GaussRat {
    /// Parses the `["re", "im"]` string pair used by the JSON element format.
    pub fn from_str_pair(re: &str, im: &str) -> Result<Self> {
        let bad = |s: &str| Error::InvalidArgument(format!("bad rational {s:?}"));
        let re = parse_rational(re).ok_or_else(|| bad(re))?;
        let im = parse_rational(im).ok_or_else(|| bad(im))?;
        Ok(Self::from_parts(re, im))
    }

    pub fn to_str_pair(&self) -> [String; 2] {
        let (a, b) = self.parts();
        [fmt_rational(&a), fmt_rational(&b)]
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.parts();
        match (a.is_zero(), b.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rational(&a)),
            (true, false) => write!(f, "{}i", fmt_rational(&b)),
            (false, false) => {
                let sign = if b.is_negative() { "-" } else { "+" };
                write!(f, "{}{}{}i", fmt_rational(&a), sign, fmt_rational(&b.abs()))
            }
        }
    }
}

impl fmt::Debug for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_and_big_agree() {
        let big = GaussRat::int(i64::MAX, 0);
        let s = &big + &GaussRat::ONE;
        assert_eq!(s.re(), BigRational::from_integer(BigInt::from(i64::MAX) + 1));
        let back = &s - &GaussRat::ONE;
        assert_eq!(back, big);
        assert!(back.as_small_int().is_some());
    }

    #[test]
    fn field_ops() {
        let a = GaussRat::int(1, 2);
        let b = GaussRat::ratio(3, 4);
        let q = &a / &b;
        assert_eq!(&q * &b, a);
        assert_eq!(&GaussRat::I * &GaussRat::I, GaussRat::int(-1, 0));
        assert_eq!(a.inv().unwrap() * a.clone(), GaussRat::ONE);
        assert!(GaussRat::ZERO.inv().is_none());
        assert_eq!(a.conj(), GaussRat::int(1, -2));
    }

    #[test]
    fn display_and_pairs() {
        assert_eq!(GaussRat::int(0, -1).to_string(), "-1i");
        assert_eq!(GaussRat::ratio(-1, 2).to_string(), "-1/2");
        let z = GaussRat::from_str_pair("1/2", "-3").unwrap();
        assert_eq!(z.to_string(), "1/2-3i");
        assert_eq!(z.to_str_pair(), ["1/2".to_string(), "-3".to_string()]);
        assert!(GaussRat::from_str_pair("1/0", "0").is_err());
    }
}
