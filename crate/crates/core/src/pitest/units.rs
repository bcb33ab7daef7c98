//! Exhaustive matrix-unit evaluation of multilinear polynomials.
//!
//! A product of matrix units is either zero or a single matrix unit, so a
//! word evaluates by chaining indices. Words are stored in a trie and each
//! tuple is evaluated by walking it, abandoning a branch as soon as the chain
//! breaks.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::freealg::{NcPoly, Var};

struct Node {
    pos: usize,
    coeff: (i64, i64),
    children: Vec<Node>,
}

/// Multilinear polynomial with integer coefficients, prepared for
/// matrix-unit enumeration.
pub(crate) struct UnitTrie {
    vars: Vec<Var>,
    roots: Vec<Node>,
    prefixes: Vec<usize>,
}

fn build(words: &[(Vec<usize>, (i64, i64))], depth: usize, prefixes: &mut [usize]) -> Vec<Node> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < words.len() {
        let pos = words[i].0[depth];
        let mut j = i;
        while j < words.len() && words[j].0[depth] == pos {
            j += 1;
        }
        prefixes[depth] += 1;
        let leaf = depth + 1 == words[i].0.len();
        out.push(Node {
            pos,
            coeff: if leaf { words[i].1 } else { (0, 0) },
            children: if leaf { Vec::new() } else { build(&words[i..j], depth + 1, prefixes) },
        });
        i = j;
    }
    out
}

impl UnitTrie {
    /// `f` must be multilinear and homogeneous of positive degree.
    pub fn new(f: &NcPoly) -> Result<Self> {
        let vars = f.variables();
        let d = f.degree();
        if !f.is_multilinear() || !f.is_multihomogeneous() || d == 0 {
            return Err(Error::Precondition("matrix-unit enumeration needs a multilinear polynomial".into()));
        }
        let mut lcm = BigInt::one();
        for (_, c) in f.terms() {
            lcm = lcm.lcm(&c.denom_lcm());
        }
        let scale = crate::freealg::GaussRat::from(num_rational::BigRational::from_integer(lcm));
        let mut words = Vec::with_capacity(f.num_terms());
        for (w, c) in f.terms() {
            let c = c * &scale;
            let re = c.re().to_integer().to_i64();
            let im = c.im().to_integer().to_i64();
            let (Some(re), Some(im)) = (re, im) else {
                return Err(Error::Overflow("coefficient too large for enumeration".into()));
            };
            let letters =
                w.letters().iter().map(|v| vars.binary_search(v).expect("variable listed")).collect();
            words.push((letters, (re, im)));
        }
        let mut prefixes = vec![0; d];
        let roots = build(&words, 0, &mut prefixes);
        Ok(UnitTrie { vars, roots, prefixes })
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    /// Number of tuples, `k^{2d}`, or `None` on overflow.
    pub fn tuple_count(&self, k: usize) -> Option<u128> {
        (k as u128 * k as u128).checked_pow(self.vars.len() as u32)
    }

    /// Expected trie nodes visited over the whole enumeration.
    pub fn work_estimate(&self, k: usize) -> f64 {
        let tuples = (k as f64).powi(2 * self.vars.len() as i32);
        let per: f64 = self
            .prefixes
            .iter()
            .enumerate()
            .map(|(t, &n)| n as f64 / (k as f64).powi(t as i32))
            .sum();
        tuples * per
    }

    fn units_of(&self, code: u64, k: usize) -> Vec<(usize, usize)> {
        let kk = (k * k) as u64;
        let mut c = code;
        (0..self.vars.len())
            .map(|_| {
                let idx = (c % kk) as usize;
                c /= kk;
                (idx / k, idx % k)
            })
            .collect()
    }

    fn walk(nodes: &[Node], units: &[(usize, usize)], a0: usize, col: usize, k: usize, acc: &mut [(i128, i128)]) {
        for n in nodes {
            let (r, c) = units[n.pos];
            if r != col {
                continue;
            }
            if n.children.is_empty() {
                let e = &mut acc[a0 * k + c];
                e.0 += n.coeff.0 as i128;
                e.1 += n.coeff.1 as i128;
            } else {
                Self::walk(&n.children, units, a0, c, k, acc);
            }
        }
    }

    /// Value at the given units, as a dense `k × k` array of Gaussian integers
    /// (scaled by the common denominator).
    pub fn eval_units(&self, units: &[(usize, usize)], k: usize) -> Vec<(i128, i128)> {
        let mut acc = vec![(0i128, 0i128); k * k];
        for n in &self.roots {
            let (r, c) = units[n.pos];
            if n.children.is_empty() {
                let e = &mut acc[r * k + c];
                e.0 += n.coeff.0 as i128;
                e.1 += n.coeff.1 as i128;
            } else {
                Self::walk(&n.children, units, r, c, k, &mut acc);
            }
        }
        acc
    }

    /// First tuple (in enumeration order) with a nonzero value, as
    /// `(row, col)` per variable in ascending variable order.
    pub fn find_nonvanishing(&self, k: usize) -> Option<Vec<(usize, usize)>> {
        let total = self.tuple_count(k)? as u64;
        (0..total)
            .into_par_iter()
            .find_first(|&code| {
                let units = self.units_of(code, k);
                self.eval_units(&units, k).iter().any(|&(a, b)| a != 0 || b != 0)
            })
            .map(|code| self.units_of(code, k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::{eval_seq, parse_poly, standard_poly, GaussRat};
    use crate::qmatrix::QMatrix;

    #[test]
    fn shortcut_matches_matrix_products() {
        let f = parse_poly("2 x1 x2 x3 - (1/2) x3 x1 x2 + i x2 x3 x1").unwrap();
        let t = UnitTrie::new(&f).unwrap();
        let k = 2;
        for code in 0..(k as u64).pow(6) {
            let units = t.units_of(code, k);
            let mats: Vec<QMatrix> = units.iter().map(|&(r, c)| QMatrix::unit(k, r, c)).collect();
            let exact = eval_seq(&f, &mats).unwrap().scale(&GaussRat::from(2));
            let fast = t.eval_units(&units, k);
            for (e, (a, b)) in exact.data().iter().zip(fast) {
                assert_eq!(*e, GaussRat::int(a as i64, b as i64));
            }
        }
    }

    #[test]
    fn standard_polynomial_ladder() {
        let s4 = UnitTrie::new(&standard_poly(4).unwrap()).unwrap();
        assert!(s4.find_nonvanishing(2).is_none());
        let w = s4.find_nonvanishing(3).unwrap();
        let mats: Vec<QMatrix> = w.iter().map(|&(r, c)| QMatrix::unit(3, r, c)).collect();
        assert!(!eval_seq(&standard_poly(4).unwrap(), &mats).unwrap().is_zero());
    }

    #[test]
    fn rejects_non_multilinear() {
        assert!(UnitTrie::new(&parse_poly("x1^2").unwrap()).is_err());
    }
}
