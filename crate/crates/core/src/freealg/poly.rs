//! Words and polynomials in the free algebra over ℚ(i).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use smallvec::SmallVec;

use super::GaussRat;
use crate::error::{Error, Result};

/// Variable index; `x1` is `1`. Index `0` is never a valid variable.
pub type Var = u8;

/// A monomial in noncommuting variables. The empty word is the unit.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(SmallVec<[Var; 16]>);

impl Word {
    pub fn empty() -> Self {
        Word(SmallVec::new())
    }

    pub fn from_slice(letters: &[Var]) -> Self {
        debug_assert!(letters.iter().all(|&v| v > 0));
        Word(SmallVec::from_slice(letters))
    }

    pub fn letters(&self) -> &[Var] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        out.extend_from_slice(&other.0);
        Word(out)
    }

    pub fn degree_in(&self, v: Var) -> usize {
        self.0.iter().filter(|&&x| x == v).count()
    }

    pub fn multidegree(&self) -> MultiDegree {
        let mut d = BTreeMap::new();
        for &v in &self.0 {
            *d.entry(v).or_insert(0u32) += 1;
        }
        MultiDegree(d)
    }

    /// Lexicographically least rotation (Booth's algorithm).
    pub fn least_rotation(&self) -> Word {
        let s = &self.0;
        let n = s.len();
        if n < 2 {
            return self.clone();
        }
        let mut fail: Vec<isize> = vec![-1; 2 * n];
        let mut k: usize = 0;
        for j in 1..2 * n {
            let sj = s[j % n];
            let mut i = fail[j - k - 1];
            while i != -1 && sj != s[(k + i as usize + 1) % n] {
                if sj < s[(k + i as usize + 1) % n] {
                    k = j - i as usize - 1;
                }
                i = fail[i as usize];
            }
            if i == -1 && sj != s[(k + i.wrapping_add(1) as usize) % n] {
                if sj < s[k % n] {
                    k = j;
                }
                fail[j - k] = -1;
            } else {
                fail[j - k] = i + 1;
            }
        }
        let mut out = SmallVec::with_capacity(n);
        for t in 0..n {
            out.push(s[(k + t) % n]);
        }
        Word(out)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "x{v}")?;
        }
        Ok(())
    }
}

/// Degree of a monomial in each variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MultiDegree(pub BTreeMap<Var, u32>);

impl MultiDegree {
    pub fn total(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn get(&self, v: Var) -> u32 {
        self.0.get(&v).copied().unwrap_or(0)
    }

    pub fn is_multilinear(&self) -> bool {
        self.0.values().all(|&d| d <= 1)
    }
}

/// Guards against combinatorial blow-up.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_degree: usize,
    pub max_vars: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_degree: 12, max_vars: 10 }
    }
}

impl Limits {
    pub fn unbounded() -> Self {
        Limits { max_degree: usize::MAX, max_vars: usize::MAX }
    }

    pub fn check(&self, f: &NcPoly) -> Result<()> {
        let deg = f.degree();
        if deg > self.max_degree {
            return Err(Error::Limit(format!(
                "total degree {deg} exceeds {}",
                self.max_degree
            )));
        }
        let nv = f.variables().len();
        if nv > self.max_vars {
            return Err(Error::Limit(format!("{nv} variables exceed {}", self.max_vars)));
        }
        Ok(())
    }
}

/// A noncommutative polynomial: finitely supported map from words to ℚ(i).
///
/// Zero coefficients are never stored; iteration is in degree-lexicographic
/// word order.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct NcPoly {
    terms: BTreeMap<Word, GaussRat>,
}

impl NcPoly {
    pub fn zero() -> Self {
        NcPoly::default()
    }

    pub fn constant(c: GaussRat) -> Self {
        Self::monomial(Word::empty(), c)
    }

    pub fn one() -> Self {
        Self::constant(GaussRat::ONE)
    }

    pub fn var(v: Var) -> Self {
        assert!(v > 0, "variable indices start at 1");
        Self::monomial(Word::from_slice(&[v]), GaussRat::ONE)
    }

    pub fn monomial(w: Word, c: GaussRat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        NcPoly { terms }
    }

    /// Builds a polynomial from terms, merging repeated words.
    pub fn from_terms<I: IntoIterator<Item = (Word, GaussRat)>>(it: I) -> Self {
        let mut p = NcPoly::zero();
        for (w, c) in it {
            p.add_term(w, &c);
        }
        p
    }

    /// Builds from terms with pairwise distinct words, skipping the merge.
    pub(crate) fn from_distinct_terms(mut terms: Vec<(Word, GaussRat)>) -> Self {
        terms.retain(|(_, c)| !c.is_zero());
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        debug_assert!(terms.windows(2).all(|w| w[0].0 != w[1].0));
        NcPoly { terms: terms.into_iter().collect() }
    }

    pub fn add_term(&mut self, w: Word, c: &GaussRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn terms(&self) -> impl ExactSizeIterator<Item = (&Word, &GaussRat)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> GaussRat {
        self.terms.get(w).cloned().unwrap_or(GaussRat::ZERO)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `0` for constants and for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms.keys().next_back().map_or(0, Word::len)
    }

    pub fn constant_term(&self) -> GaussRat {
        self.coeff(&Word::empty())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Word::is_empty)
    }

    pub fn variables(&self) -> Vec<Var> {
        let mut seen = [false; 256];
        for w in self.terms.keys() {
            for &v in w.letters() {
                seen[v as usize] = true;
            }
        }
        (1..=255u8).filter(|&v| seen[v as usize]).collect()
    }

    pub fn max_var(&self) -> Var {
        self.variables().last().copied().unwrap_or(0)
    }

    pub fn is_multilinear(&self) -> bool {
        self.terms.keys().all(|w| w.multidegree().is_multilinear())
    }

    pub fn is_multihomogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(Word::multidegree);
        match it.next() {
            None => true,
            Some(first) => it.all(|d| d == first),
        }
    }

    pub fn scale(&self, c: &GaussRat) -> NcPoly {
        if c.is_zero() {
            return NcPoly::zero();
        }
        NcPoly { terms: self.terms.iter().map(|(w, a)| (w.clone(), a * c)).collect() }
    }

    pub fn mul_poly(&self, rhs: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero();
        for (u, a) in &self.terms {
            for (v, b) in &rhs.terms {
                out.add_term(u.concat(v), &(a * b));
            }
        }
        out
    }

    /// `[f, g] = fg − gf`
    pub fn bracket(&self, rhs: &NcPoly) -> NcPoly {
        &self.mul_poly(rhs) - &rhs.mul_poly(self)
    }

    pub fn pow(&self, e: u32) -> NcPoly {
        let mut out = NcPoly::one();
        for _ in 0..e {
            out = out.mul_poly(self);
        }
        out
    }

    /// Renames variables letter by letter.
    pub fn rename(&self, map: impl Fn(Var) -> Var) -> NcPoly {
        NcPoly::from_terms(self.terms.iter().map(|(w, c)| {
            let letters: SmallVec<[Var; 16]> = w.letters().iter().map(|&v| map(v)).collect();
            (Word(letters), c.clone())
        }))
    }

    /// Replaces each variable in `subs` by a polynomial; other variables stay.
    pub fn substitute(&self, subs: &BTreeMap<Var, NcPoly>) -> NcPoly {
        let mut out = NcPoly::zero();
        for (w, c) in &self.terms {
            let mut acc = NcPoly::constant(c.clone());
            for &v in w.letters() {
                acc = match subs.get(&v) {
                    Some(p) => acc.mul_poly(p),
                    None => acc.mul_poly(&NcPoly::var(v)),
                };
                if acc.is_zero() {
                    break;
                }
            }
            out = &out + &acc;
        }
        out
    }
}

impl<'a> Add<&'a NcPoly> for &'a NcPoly {
    type Output = NcPoly;
    fn add(self, rhs: &NcPoly) -> NcPoly {
        let (mut big, small) = if self.terms.len() >= rhs.terms.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for (w, c) in &small.terms {
            big.add_term(w.clone(), c);
        }
        big
    }
}

impl<'a> Sub<&'a NcPoly> for &'a NcPoly {
    type Output = NcPoly;
    fn sub(self, rhs: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), &-c);
        }
        out
    }
}

impl Neg for &NcPoly {
    type Output = NcPoly;
    fn neg(self) -> NcPoly {
        NcPoly { terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect() }
    }
}

impl<'a> Mul<&'a NcPoly> for &'a NcPoly {
    type Output = NcPoly;
    fn mul(self, rhs: &NcPoly) -> NcPoly {
        self.mul_poly(rhs)
    }
}

impl fmt::Debug for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The standard polynomial `s_k = Σ_σ sign(σ) x_σ(1)⋯x_σ(k)`.
pub fn standard_poly(k: usize) -> Result<NcPoly> {
    if k == 0 {
        return Err(Error::InvalidArgument("standard polynomial needs k >= 1".into()));
    }
    if k > 255 {
        return Err(Error::Limit(format!("s({k}) needs more than 255 variables")));
    }
    // Heap's algorithm: each step is a single transposition, so the sign flips.
    let mut perm: Vec<Var> = (1..=k as u8).collect();
    let mut c = vec![0usize; k];
    let mut sign = 1i64;
    let mut terms = Vec::new();
    terms.push((Word::from_slice(&perm), GaussRat::from(sign)));
    let mut i = 1;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            sign = -sign;
            terms.push((Word::from_slice(&perm), GaussRat::from(sign)));
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(NcPoly::from_distinct_terms(terms))
}

/// The nested commutator `π_k` in `2^k` variables:
/// `π_1 = [x1, x2]`, `π_{k+1} = [π_k(x1..x_{2^k}), π_k(x_{2^k+1}..x_{2^{k+1}})]`.
pub fn nested_commutator_poly(k: usize) -> Result<NcPoly> {
    if k == 0 {
        return Err(Error::InvalidArgument("nested commutator needs k >= 1".into()));
    }
    if k > 7 {
        return Err(Error::Limit(format!("pi({k}) needs more than 255 variables")));
    }
    let mut p = NcPoly::var(1).bracket(&NcPoly::var(2));
    for level in 1..k {
        let shift = 1u8 << level;
        let right = p.rename(|v| v + shift);
        p = p.bracket(&right);
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(l: &[Var]) -> Word {
        Word::from_slice(l)
    }

    #[test]
    fn bracket_examples() {
        let x1 = NcPoly::var(1);
        let x2 = NcPoly::var(2);
        let x3 = NcPoly::var(3);
        assert!(x1.bracket(&x1).is_zero());
        let sum = &x1 + &x2;
        let prod = sum.mul_poly(&x1);
        assert_eq!(prod.coeff(&w(&[1, 1])), GaussRat::ONE);
        assert_eq!(prod.coeff(&w(&[2, 1])), GaussRat::ONE);
        assert_eq!(prod.num_terms(), 2);
        let b = x1.mul_poly(&x2).bracket(&x3);
        assert_eq!(b.coeff(&w(&[1, 2, 3])), GaussRat::ONE);
        assert_eq!(b.coeff(&w(&[3, 1, 2])), GaussRat::from(-1));
        assert_eq!(b.num_terms(), 2);
    }

    #[test]
    fn standard_poly_shapes() {
        let s2 = standard_poly(2).unwrap();
        assert_eq!(s2, NcPoly::var(1).bracket(&NcPoly::var(2)));
        let s3 = standard_poly(3).unwrap();
        assert_eq!(s3.num_terms(), 6);
        // sign of (2,3,1) is even, (3,2,1) is odd
        assert_eq!(s3.coeff(&w(&[2, 3, 1])), GaussRat::ONE);
        assert_eq!(s3.coeff(&w(&[3, 2, 1])), GaussRat::from(-1));
        assert_eq!(standard_poly(4).unwrap().num_terms(), 24);
        assert!(standard_poly(0).is_err());
    }

    #[test]
    fn standard_poly_signs_match_inversions() {
        let s5 = standard_poly(5).unwrap();
        for (word, c) in s5.terms() {
            let l = word.letters();
            let inv = (0..l.len())
                .flat_map(|i| (i + 1..l.len()).map(move |j| (i, j)))
                .filter(|&(i, j)| l[i] > l[j])
                .count();
            let expected = if inv % 2 == 0 { 1 } else { -1 };
            assert_eq!(*c, GaussRat::from(expected));
        }
    }

    #[test]
    fn nested_commutators() {
        let p1 = nested_commutator_poly(1).unwrap();
        assert_eq!(p1, standard_poly(2).unwrap());
        let p2 = nested_commutator_poly(2).unwrap();
        assert_eq!(p2.num_terms(), 8);
        assert!(p2.is_multilinear());
        assert_eq!(p2.variables(), vec![1, 2, 3, 4]);
        let expected = NcPoly::var(1)
            .bracket(&NcPoly::var(2))
            .bracket(&NcPoly::var(3).bracket(&NcPoly::var(4)));
        assert_eq!(p2, expected);
        assert!(nested_commutator_poly(0).is_err());
    }

    #[test]
    fn least_rotation_matches_brute_force() {
        let words: &[&[Var]] = &[
            &[1, 2, 1],
            &[2, 1, 1],
            &[3, 1, 2, 1, 1],
            &[1, 1, 1],
            &[2, 2, 1, 2, 2, 1],
            &[5],
        ];
        for l in words {
            let word = w(l);
            let brute = (0..l.len())
                .map(|r| {
                    let mut v = l[r..].to_vec();
                    v.extend_from_slice(&l[..r]);
                    v
                })
                .min()
                .unwrap();
            assert_eq!(word.least_rotation().letters(), brute.as_slice());
        }
    }

    #[test]
    fn degree_and_limits() {
        let s4 = standard_poly(4).unwrap();
        assert_eq!(s4.degree(), 4);
        assert!(Limits::default().check(&s4).is_ok());
        let lim = Limits { max_degree: 3, max_vars: 10 };
        assert!(lim.check(&s4).is_err());
        assert!(s4.is_multihomogeneous());
    }
}
