//! Exact subspaces of an [`FdAlgebra`] in reduced row echelon form.

use std::fmt;

use super::algebra::{AlgElement, FdAlgebra};
use crate::error::{Error, Result};
use crate::freealg::GaussRat;

/// A subspace, stored as its reduced row echelon basis over `ℚ(i)`.
///
/// Leading entries are 1 and pivot columns are otherwise zero, so two
/// subspaces are equal exactly when their bases are.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    algebra: FdAlgebra,
    rows: Vec<Vec<GaussRat>>,
    pivots: Vec<usize>,
}

fn leading(v: &[GaussRat]) -> Option<usize> {
    v.iter().position(|c| !c.is_zero())
}

fn axpy(dst: &mut [GaussRat], src: &[GaussRat], c: &GaussRat, from: usize) {
    for (d, s) in dst[from..].iter_mut().zip(&src[from..]) {
        if !s.is_zero() {
            *d -= &(s * c);
        }
    }
}

impl Subspace {
    pub fn zero(algebra: &FdAlgebra) -> Self {
        Subspace { algebra: algebra.clone(), rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(algebra: &FdAlgebra) -> Self {
        Self::span(algebra, &algebra.unit_basis()).expect("units belong to the algebra")
    }

    pub fn span(algebra: &FdAlgebra, elems: &[AlgElement]) -> Result<Self> {
        let mut s = Self::zero(algebra);
        for e in elems {
            s.insert(e)?;
        }
        Ok(s)
    }

    /// Spans the given flattened vectors.
    pub fn from_vectors(algebra: &FdAlgebra, vecs: impl IntoIterator<Item = Vec<GaussRat>>) -> Self {
        let mut s = Self::zero(algebra);
        for v in vecs {
            assert_eq!(v.len(), algebra.dim());
            s.insert_vec(v);
        }
        s
    }

    pub fn algebra(&self) -> &FdAlgebra {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.algebra.dim()
    }

    pub fn rows(&self) -> &[Vec<GaussRat>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Canonical basis as algebra elements.
    pub fn basis(&self) -> Vec<AlgElement> {
        self.rows.iter().map(|r| self.algebra.from_flat(r)).collect()
    }

    fn reduce(&self, v: &mut [GaussRat]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let c = v[p].clone();
                axpy(v, row, &c, p);
            }
        }
    }

    /// Adds a flattened vector; returns whether the dimension grew.
    pub fn insert_vec(&mut self, mut v: Vec<GaussRat>) -> bool {
        self.reduce(&mut v);
        let Some(p) = leading(&v) else { return false };
        let inv = v[p].inv().expect("nonzero");
        for c in v[p..].iter_mut() {
            if !c.is_zero() {
                *c = &*c * &inv;
            }
        }
        for row in &mut self.rows {
            if !row[p].is_zero() {
                let c = row[p].clone();
                axpy(row, &v, &c, p);
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, v);
        true
    }

    /// Adds an element; returns whether the dimension grew.
    pub fn insert(&mut self, e: &AlgElement) -> Result<bool> {
        self.algebra.check(e)?;
        Ok(self.insert_vec(e.flatten()))
    }

    pub fn contains(&self, e: &AlgElement) -> Result<bool> {
        self.algebra.check(e)?;
        let mut v = e.flatten();
        self.reduce(&mut v);
        Ok(v.iter().all(GaussRat::is_zero))
    }

    fn same_algebra(&self, other: &Subspace) -> Result<()> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch(
                self.algebra.blocks().to_vec(),
                other.algebra.blocks().to_vec(),
            ));
        }
        Ok(())
    }

    pub fn contains_subspace(&self, other: &Subspace) -> Result<bool> {
        self.same_algebra(other)?;
        for r in &other.rows {
            let mut v = r.clone();
            self.reduce(&mut v);
            if !v.iter().all(GaussRat::is_zero) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.same_algebra(other)?;
        let mut s = self.clone();
        for r in &other.rows {
            s.insert_vec(r.clone());
        }
        Ok(s)
    }

    /// Intersection by the Zassenhaus method: reduce the rows `[u | u]` and
    /// `[v | 0]`; rows with vanishing left half span `U ∩ V` on the right.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.same_algebra(other)?;
        let d = self.algebra.dim();
        let big = FdAlgebra::new(vec![1; 2 * d]).expect("positive");
        let mut z = Subspace::zero(&big);
        for r in &self.rows {
            let mut v = r.clone();
            v.extend(r.iter().cloned());
            z.insert_vec(v);
        }
        for r in &other.rows {
            let mut v = r.clone();
            v.extend(std::iter::repeat_n(GaussRat::ZERO, d));
            z.insert_vec(v);
        }
        let mut out = Subspace::zero(&self.algebra);
        for (row, &p) in z.rows.iter().zip(&z.pivots) {
            if p >= d {
                out.insert_vec(row[d..].to_vec());
            }
        }
        Ok(out)
    }

    /// Blocks in which some element of the subspace is nonzero.
    pub fn supported_blocks(&self) -> Vec<usize> {
        let mut blocks = Vec::new();
        for r in &self.rows {
            for (c, x) in r.iter().enumerate() {
                if !x.is_zero() {
                    blocks.push(self.algebra.block_of(c));
                }
            }
        }
        blocks.sort_unstable();
        blocks.dedup();
        blocks
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} of {}) ", self.dim(), self.algebra)?;
        f.debug_list().entries(self.basis()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn span_member_sum_intersect() {
        let m2 = FdAlgebra::matrix(2);
        let s = Subspace::span(&m2, &[m2.unit(0, 0, 1), m2.unit(0, 1, 0)]).unwrap();
        assert_eq!(s.dim(), 2);
        let center = Subspace::span(&m2, &[m2.one()]).unwrap();
        assert!(center.contains(&m2.one()).unwrap());
        let h = m2.unit(0, 0, 0).sub(&m2.unit(0, 1, 1));
        let sl2 = s.sum(&Subspace::span(&m2, &[h]).unwrap()).unwrap();
        assert_eq!(sl2.dim(), 3);
        assert!(sl2.intersect(&center).unwrap().is_zero());
        assert_eq!(sl2.sum(&center).unwrap(), Subspace::full(&m2));
    }

    #[test]
    fn canonical_form_is_order_independent() {
        let m2 = FdAlgebra::matrix(2);
        let a = m2.unit(0, 0, 1).add(&m2.unit(0, 1, 1).scale(&GaussRat::int(2, 1)));
        let b = m2.unit(0, 1, 1).sub(&m2.unit(0, 0, 0));
        let s1 = Subspace::span(&m2, &[a.clone(), b.clone()]).unwrap();
        let s2 = Subspace::span(&m2, &[b.add(&a), a.scale(&GaussRat::int(0, 3))]).unwrap();
        assert_eq!(s1, s2);
        for (r, &p) in s1.rows().iter().zip(s1.pivots()) {
            assert!(r[p].is_one());
        }
    }

    #[test]
    fn intersection_against_dimension_formula() {
        let m3 = FdAlgebra::matrix(3);
        let u = m3.unit_basis();
        let a = Subspace::span(&m3, &u[0..6]).unwrap();
        let b = Subspace::span(&m3, &u[3..9]).unwrap();
        let i = a.intersect(&b).unwrap();
        assert_eq!(i.dim() + a.sum(&b).unwrap().dim(), a.dim() + b.dim());
        assert_eq!(i, Subspace::span(&m3, &u[3..6]).unwrap());
    }

    #[test]
    fn mismatch_is_an_error() {
        let m2 = FdAlgebra::matrix(2);
        let m3 = FdAlgebra::matrix(3);
        assert!(Subspace::zero(&m2).sum(&Subspace::zero(&m3)).is_err());
        assert!(Subspace::zero(&m2).contains(&m3.one()).is_err());
    }
}
