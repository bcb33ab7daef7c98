//! Evaluation of polynomials at elements of an associative algebra.
//!
//! Each word is split at its midpoint. Products of all distinct prefixes and
//! suffixes are memoized, and terms sharing a prefix are summed before the
//! prefix is multiplied in, so a polynomial with `T` terms costs about `T`
//! scaled additions plus one product per distinct half-word.

use std::collections::{BTreeMap, HashMap};

use smallvec::SmallVec;

use super::poly::{NcPoly, Var};
use super::GaussRat;
use crate::error::{Error, Result};
use crate::qmatrix::QMatrix;

/// An algebra in which polynomials can be evaluated.
pub trait EvalRing: Clone {
    /// Scalar form of a polynomial coefficient in this ring.
    type Coeff;

    fn coeff(&self, c: &GaussRat) -> Result<Self::Coeff>;
    fn one_like(&self) -> Self;
    fn zero_like(&self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    /// `self += c · rhs`
    fn add_scaled(&mut self, rhs: &Self, c: &Self::Coeff);
    /// `self += c · 1`
    fn add_scalar(&mut self, c: &Self::Coeff);
    /// Shape descriptor; values in one evaluation must agree on it.
    fn shape(&self) -> Vec<usize>;
}

impl EvalRing for QMatrix {
    type Coeff = GaussRat;

    fn coeff(&self, c: &GaussRat) -> Result<GaussRat> {
        Ok(c.clone())
    }
    fn one_like(&self) -> Self {
        QMatrix::identity(self.n())
    }
    fn zero_like(&self) -> Self {
        QMatrix::zeros(self.n())
    }
    fn mul(&self, rhs: &Self) -> Self {
        QMatrix::mul(self, rhs)
    }
    fn add_scaled(&mut self, rhs: &Self, c: &GaussRat) {
        QMatrix::add_scaled(self, rhs, c)
    }
    fn add_scalar(&mut self, c: &GaussRat) {
        for i in 0..self.n() {
            let v = self.get(i, i) + c;
            self.set(i, i, v);
        }
    }
    fn shape(&self) -> Vec<usize> {
        vec![self.n()]
    }
}

type Key = SmallVec<[Var; 16]>;

struct Products<'a, T> {
    values: &'a BTreeMap<Var, T>,
    prefix: HashMap<Key, T>,
    suffix: HashMap<Key, T>,
}

impl<T: EvalRing> Products<'_, T> {
    fn value(&self, v: Var) -> Result<&T> {
        self.values.get(&v).ok_or(Error::MissingVariable(v as u32))
    }

    fn prefix(&mut self, u: &[Var]) -> Result<T> {
        if u.len() == 1 {
            return self.value(u[0]).cloned();
        }
        if let Some(p) = self.prefix.get(u) {
            return Ok(p.clone());
        }
        let head = self.prefix(&u[..u.len() - 1])?;
        let out = head.mul(self.value(u[u.len() - 1])?);
        self.prefix.insert(Key::from_slice(u), out.clone());
        Ok(out)
    }

    fn suffix(&mut self, v: &[Var]) -> Result<T> {
        if v.len() == 1 {
            return self.value(v[0]).cloned();
        }
        if let Some(p) = self.suffix.get(v) {
            return Ok(p.clone());
        }
        let tail = self.suffix(&v[1..])?;
        let out = self.value(v[0])?.mul(&tail);
        self.suffix.insert(Key::from_slice(v), out.clone());
        Ok(out)
    }
}

/// Evaluates `f` with `x_v ↦ values[v]`.
///
/// A nonzero constant term maps to that multiple of the unit.
pub fn eval_poly<T: EvalRing>(f: &NcPoly, values: &BTreeMap<Var, T>) -> Result<T> {
    let template = match values.values().next() {
        Some(t) => t,
        None => {
            return Err(Error::DimensionMismatch(
                "cannot evaluate without at least one assigned value".into(),
            ))
        }
    };
    let shape = template.shape();
    if let Some((v, _)) = values.iter().find(|(_, x)| x.shape() != shape) {
        return Err(Error::DimensionMismatch(format!(
            "value for x{v} has shape {:?}, expected {shape:?}",
            values[v].shape()
        )));
    }
    if let Some(v) = f.variables().into_iter().find(|v| !values.contains_key(v)) {
        return Err(Error::MissingVariable(v as u32));
    }

    let mut memo = Products { values, prefix: HashMap::new(), suffix: HashMap::new() };
    let mut out = template.zero_like();
    let mut group: Option<(usize, Key, T)> = None;

    let flush = |group: Option<(usize, Key, T)>, memo: &mut Products<'_, T>, out: &mut T| {
        if let Some((_, prefix, acc)) = group {
            if prefix.is_empty() {
                let one = GaussRat::ONE;
                out.add_scaled(&acc, &template.coeff(&one)?);
            } else {
                let p = memo.prefix(&prefix)?;
                let one = template.coeff(&GaussRat::ONE)?;
                out.add_scaled(&p.mul(&acc), &one);
            }
        }
        Ok::<(), Error>(())
    };

    for (w, c) in f.terms() {
        let letters = w.letters();
        if letters.is_empty() {
            out.add_scalar(&template.coeff(c)?);
            continue;
        }
        let h = letters.len() / 2;
        let (pre, suf) = letters.split_at(h);
        let same = matches!(&group, Some((len, p, _)) if *len == letters.len() && p.as_slice() == pre);
        if !same {
            flush(group.take(), &mut memo, &mut out)?;
            group = Some((letters.len(), Key::from_slice(pre), template.zero_like()));
        }
        let s = memo.suffix(suf)?;
        let cc = template.coeff(c)?;
        group.as_mut().expect("group set").2.add_scaled(&s, &cc);
    }
    flush(group.take(), &mut memo, &mut out)?;
    Ok(out)
}

/// Evaluates with `x_{i+1} ↦ values[i]`.
pub fn eval_seq<T: EvalRing>(f: &NcPoly, values: &[T]) -> Result<T> {
    if values.len() > Var::MAX as usize {
        return Err(Error::InvalidArgument("too many values".into()));
    }
    let map: BTreeMap<Var, T> =
        values.iter().enumerate().map(|(i, v)| (i as Var + 1, v.clone())).collect();
    eval_poly(f, &map)
}

/// Reference evaluator: every word multiplied out left to right.
pub fn eval_naive<T: EvalRing>(f: &NcPoly, values: &BTreeMap<Var, T>) -> Result<T> {
    let template = values
        .values()
        .next()
        .ok_or_else(|| Error::DimensionMismatch("no values".into()))?;
    let mut out = template.zero_like();
    for (w, c) in f.terms() {
        let mut prod = template.one_like();
        for v in w.letters() {
            prod = prod.mul(values.get(v).ok_or(Error::MissingVariable(*v as u32))?);
        }
        out.add_scaled(&prod, &template.coeff(c)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::{parse_poly, standard_poly};

    fn units2() -> (QMatrix, QMatrix) {
        (QMatrix::unit(2, 0, 1), QMatrix::unit(2, 1, 0))
    }

    #[test]
    fn s2_on_matrix_units() {
        let (e12, e21) = units2();
        let v = eval_seq(&standard_poly(2).unwrap(), &[e12, e21]).unwrap();
        assert_eq!(v, QMatrix::from_int_rows(&[&[1, 0], &[0, -1]]));
    }

    #[test]
    fn central_argument_kills_commutator() {
        let a = QMatrix::from_int_rows(&[&[1, 2], &[3, 4]]);
        let one = QMatrix::identity(2);
        assert!(eval_seq(&parse_poly("[x1,x2]").unwrap(), &[a, one]).unwrap().is_zero());
    }

    #[test]
    fn amitsur_levitzky_on_m2_sample() {
        let mats = [
            QMatrix::from_int_rows(&[&[1, 2], &[-3, 0]]),
            QMatrix::from_int_rows(&[&[0, 5], &[1, 1]]),
            QMatrix::from_int_rows(&[&[2, -1], &[4, 7]]),
            QMatrix::from_int_rows(&[&[-6, 3], &[2, 2]]),
        ];
        assert!(eval_seq(&standard_poly(4).unwrap(), &mats).unwrap().is_zero());
    }

    #[test]
    fn matches_naive_with_constants() {
        let f = parse_poly("3 + (1+i)x1x2x1 - x2^3 + 1/2 x1 x2 x2 x1 - i x2").unwrap();
        let vals = BTreeMap::from([
            (1, QMatrix::from_int_rows(&[&[1, 2, 0], &[0, 1, -1], &[3, 0, 2]])),
            (2, QMatrix::from_int_rows(&[&[0, 1, 1], &[2, 0, 0], &[1, -2, 1]])),
        ]);
        assert_eq!(eval_poly(&f, &vals).unwrap(), eval_naive(&f, &vals).unwrap());
    }

    #[test]
    fn errors() {
        let f = parse_poly("x1*x2").unwrap();
        let only1 = BTreeMap::from([(1, QMatrix::identity(2))]);
        assert!(matches!(eval_poly(&f, &only1), Err(Error::MissingVariable(2))));
        let mixed = BTreeMap::from([(1, QMatrix::identity(2)), (2, QMatrix::identity(3))]);
        assert!(matches!(eval_poly(&f, &mixed), Err(Error::DimensionMismatch(_))));
    }
}
