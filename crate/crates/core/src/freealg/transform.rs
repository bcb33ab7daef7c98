//! Structural transforms: multihomogeneous splitting, multilinearization and
//! cyclic reduction.

use std::collections::BTreeMap;

use super::poly::{MultiDegree, NcPoly, Var, Word};
use super::GaussRat;
use crate::error::{Error, Result};

/// Groups the terms of `f` by multidegree. The components sum to `f`.
pub fn multihomogeneous_components(f: &NcPoly) -> Vec<(MultiDegree, NcPoly)> {
    let mut groups: BTreeMap<MultiDegree, Vec<(Word, GaussRat)>> = BTreeMap::new();
    for (w, c) in f.terms() {
        groups.entry(w.multidegree()).or_default().push((w.clone(), c.clone()));
    }
    groups.into_iter().map(|(d, t)| (d, NcPoly::from_distinct_terms(t))).collect()
}

/// Result of fully linearizing a multihomogeneous polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct Multilinearization {
    /// Multilinear polynomial in `deg f` variables.
    pub poly: NcPoly,
    /// `collapse(poly) = factor · f`.
    pub factor: GaussRat,
    /// Maps every variable of `poly` to the variable of `f` it stands for.
    pub origin: BTreeMap<Var, Var>,
}

impl Multilinearization {
    /// Substitutes every fresh variable by its original one.
    pub fn collapse(&self) -> NcPoly {
        self.poly.rename(|v| self.origin.get(&v).copied().unwrap_or(v))
    }
}

fn permutations(items: &[Var]) -> Vec<Vec<Var>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Full polarization of a multihomogeneous polynomial.
///
/// A variable of degree `d > 1` is replaced by `d` distinct copies (itself
/// plus `d − 1` fresh variables numbered after the largest variable of `f`),
/// summing over every way of distributing the copies among its occurrences.
/// Collapsing the copies back multiplies `f` by `d!`; the returned factor is
/// the product of these over all variables.
pub fn multilinearize(f: &NcPoly) -> Result<Multilinearization> {
    if f.is_constant() {
        return Err(Error::ConstantPolynomial);
    }
    if !f.is_multihomogeneous() {
        return Err(Error::NotMultihomogeneous);
    }
    let degrees = f.terms().next().expect("nonconstant").0.multidegree();
    let mut next_fresh = f.max_var() as u32 + 1;
    let mut origin = BTreeMap::new();
    let mut copies: BTreeMap<Var, Vec<Var>> = BTreeMap::new();
    let mut factor = GaussRat::ONE;
    for (&v, &d) in &degrees.0 {
        origin.insert(v, v);
        let mut c = vec![v];
        for j in 1..d {
            if next_fresh > Var::MAX as u32 {
                return Err(Error::Limit("multilinearization needs more than 255 variables".into()));
            }
            let fresh = next_fresh as Var;
            next_fresh += 1;
            origin.insert(fresh, v);
            c.push(fresh);
            factor = &factor * &GaussRat::from(j as i64 + 1);
        }
        copies.insert(v, c);
    }
    let perms: BTreeMap<Var, Vec<Vec<Var>>> =
        copies.iter().map(|(&v, c)| (v, permutations(c))).collect();

    let mut out = NcPoly::zero();
    for (w, coeff) in f.terms() {
        let mut partial: Vec<Vec<Var>> = vec![w.letters().to_vec()];
        for (&v, ps) in &perms {
            if ps[0].len() < 2 {
                continue;
            }
            let positions: Vec<usize> =
                w.letters().iter().enumerate().filter(|(_, &x)| x == v).map(|(i, _)| i).collect();
            let mut next = Vec::with_capacity(partial.len() * ps.len());
            for base in &partial {
                for p in ps {
                    let mut letters = base.clone();
                    for (&pos, &copy) in positions.iter().zip(p) {
                        letters[pos] = copy;
                    }
                    next.push(letters);
                }
            }
            partial = next;
        }
        for letters in partial {
            out.add_term(Word::from_slice(&letters), coeff);
        }
    }
    Ok(Multilinearization { poly: out, factor, origin })
}

/// One linearization step in variable `v`:
/// `g = f(…, v + fresh, …) − f(…, fresh, …) − f(…, v, …)`.
///
/// For `f` homogeneous of degree `d` in `v`, substituting `fresh := v` gives
/// back `(2^d − 2)·f`.
pub fn linearize_step(f: &NcPoly, v: Var, fresh: Var) -> NcPoly {
    let sum = &NcPoly::var(v) + &NcPoly::var(fresh);
    let shifted = f.substitute(&BTreeMap::from([(v, sum)]));
    let replaced = f.substitute(&BTreeMap::from([(v, NcPoly::var(fresh))]));
    &(&shifted - &replaced) - f
}

/// Replaces each word by its least rotation and merges coefficients.
///
/// Two polynomials are cyclically equivalent (differ by a sum of commutators)
/// exactly when their canonical forms agree. Constant terms are untouched.
pub fn cyclic_canonical_form(f: &NcPoly) -> NcPoly {
    NcPoly::from_terms(f.terms().map(|(w, c)| (w.least_rotation(), c.clone())))
}

/// Whether `f` is a sum of commutators in the free algebra.
pub fn is_cyclically_zero(f: &NcPoly) -> bool {
    cyclic_canonical_form(f).is_zero()
}
