//! Finite direct sums of full matrix algebras and their elements.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freealg::{EvalRing, GaussRat};
use crate::qmatrix::QMatrix;

/// `⊕ M_{n_i}` for the listed block sizes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FdAlgebra {
    blocks: Vec<usize>,
}

impl FdAlgebra {
    pub fn new(blocks: Vec<usize>) -> Result<Self> {
        if blocks.is_empty() || blocks.contains(&0) {
            return Err(Error::InvalidArgument(format!("invalid block sizes {blocks:?}")));
        }
        Ok(FdAlgebra { blocks })
    }

    /// The full matrix algebra `M_n`.
    pub fn matrix(n: usize) -> Self {
        Self::new(vec![n]).expect("positive size")
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|n| n * n).sum()
    }

    pub fn max_block(&self) -> usize {
        *self.blocks.iter().max().expect("nonempty")
    }

    /// Offset of block `b` in the flattened coordinates.
    pub fn offset(&self, b: usize) -> usize {
        self.blocks[..b].iter().map(|n| n * n).sum()
    }

    /// Block index of a flattened coordinate.
    pub fn block_of(&self, coord: usize) -> usize {
        let mut acc = 0;
        for (b, n) in self.blocks.iter().enumerate() {
            acc += n * n;
            if coord < acc {
                return b;
            }
        }
        panic!("coordinate {coord} out of range")
    }

    pub fn zero(&self) -> AlgElement {
        AlgElement { blocks: self.blocks.iter().map(|&n| QMatrix::zeros(n)).collect() }
    }

    pub fn one(&self) -> AlgElement {
        AlgElement { blocks: self.blocks.iter().map(|&n| QMatrix::identity(n)).collect() }
    }

    /// Matrix unit `e_{ij}` in block `b` (zero-based).
    pub fn unit(&self, b: usize, i: usize, j: usize) -> AlgElement {
        let mut z = self.zero();
        z.blocks[b] = QMatrix::unit(self.blocks[b], i, j);
        z
    }

    /// All matrix units, in flattened-coordinate order.
    pub fn unit_basis(&self) -> Vec<AlgElement> {
        let mut out = Vec::with_capacity(self.dim());
        for (b, &n) in self.blocks.iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    out.push(self.unit(b, i, j));
                }
            }
        }
        out
    }

    pub fn from_flat(&self, v: &[GaussRat]) -> AlgElement {
        assert_eq!(v.len(), self.dim());
        let mut pos = 0;
        let blocks = self
            .blocks
            .iter()
            .map(|&n| {
                let m = QMatrix::from_vec(n, v[pos..pos + n * n].to_vec());
                pos += n * n;
                m
            })
            .collect();
        AlgElement { blocks }
    }

    /// Element with the given blocks after a shape check.
    pub fn element(&self, blocks: Vec<QMatrix>) -> Result<AlgElement> {
        let e = AlgElement { blocks };
        self.check(&e)?;
        Ok(e)
    }

    pub fn check(&self, e: &AlgElement) -> Result<()> {
        if e.shape() != self.blocks {
            return Err(Error::AlgebraMismatch(self.blocks.clone(), e.shape()));
        }
        Ok(())
    }
}

impl fmt::Display for FdAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(|n| format!("M{n}")).collect();
        write!(f, "{}", parts.join("⊕"))
    }
}

/// Element of an [`FdAlgebra`]: one exact matrix per block.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AlgElement {
    blocks: Vec<QMatrix>,
}

impl AlgElement {
    pub fn blocks(&self) -> &[QMatrix] {
        &self.blocks
    }

    pub fn block(&self, b: usize) -> &QMatrix {
        &self.blocks[b]
    }

    pub fn into_blocks(self) -> Vec<QMatrix> {
        self.blocks
    }

    pub fn shape(&self) -> Vec<usize> {
        self.blocks.iter().map(QMatrix::n).collect()
    }

    pub fn flatten(&self) -> Vec<GaussRat> {
        self.blocks.iter().flat_map(|m| m.data().iter().cloned()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(QMatrix::is_zero)
    }

    fn zip(&self, rhs: &Self, f: impl Fn(&QMatrix, &QMatrix) -> QMatrix) -> Self {
        assert_eq!(self.shape(), rhs.shape(), "algebra mismatch");
        AlgElement { blocks: self.blocks.iter().zip(&rhs.blocks).map(|(a, b)| f(a, b)).collect() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        self.zip(rhs, QMatrix::mul)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.zip(rhs, QMatrix::add)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.zip(rhs, QMatrix::sub)
    }

    pub fn scale(&self, c: &GaussRat) -> Self {
        AlgElement { blocks: self.blocks.iter().map(|m| m.scale(c)).collect() }
    }

    pub fn bracket(&self, rhs: &Self) -> Self {
        self.zip(rhs, QMatrix::bracket)
    }

    pub fn adjoint(&self) -> Self {
        AlgElement { blocks: self.blocks.iter().map(QMatrix::adjoint).collect() }
    }

    /// Smallest `k ≥ 1` with `self^k = 0`, if any.
    pub fn nilpotency_order(&self) -> Option<usize> {
        let bound = self.blocks.iter().map(QMatrix::n).max().unwrap_or(0);
        let mut p = self.clone();
        for k in 1..=bound {
            if p.is_zero() {
                return Some(k);
            }
            p = p.mul(self);
        }
        p.is_zero().then_some(bound + 1)
    }
}

impl fmt::Debug for AlgElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.blocks).finish()
    }
}

impl EvalRing for AlgElement {
    type Coeff = GaussRat;

    fn coeff(&self, c: &GaussRat) -> Result<GaussRat> {
        Ok(c.clone())
    }
    fn one_like(&self) -> Self {
        AlgElement { blocks: self.blocks.iter().map(|m| QMatrix::identity(m.n())).collect() }
    }
    fn zero_like(&self) -> Self {
        AlgElement { blocks: self.blocks.iter().map(|m| QMatrix::zeros(m.n())).collect() }
    }
    fn mul(&self, rhs: &Self) -> Self {
        AlgElement::mul(self, rhs)
    }
    fn add_scaled(&mut self, rhs: &Self, c: &GaussRat) {
        for (a, b) in self.blocks.iter_mut().zip(&rhs.blocks) {
            a.add_scaled(b, c);
        }
    }
    fn add_scalar(&mut self, c: &GaussRat) {
        for m in &mut self.blocks {
            EvalRing::add_scalar(m, c);
        }
    }
    fn shape(&self) -> Vec<usize> {
        AlgElement::shape(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::{eval_seq, standard_poly};

    #[test]
    fn basics() {
        let a = FdAlgebra::new(vec![1, 2, 3]).unwrap();
        assert_eq!(a.dim(), 14);
        assert_eq!(a.unit_basis().len(), 14);
        assert_eq!(a.block_of(0), 0);
        assert_eq!(a.block_of(4), 1);
        assert_eq!(a.block_of(5), 2);
        let x = a.unit(2, 0, 1).add(&a.unit(2, 1, 2));
        assert_eq!(x.nilpotency_order(), Some(3));
        assert_eq!(a.one().nilpotency_order(), None);
        assert!(FdAlgebra::new(vec![]).is_err());
    }

    #[test]
    fn evaluation_blockwise() {
        let a = FdAlgebra::new(vec![1, 2]).unwrap();
        let vals = vec![a.unit(1, 0, 1), a.unit(1, 1, 0)];
        let v = eval_seq(&standard_poly(2).unwrap(), &vals).unwrap();
        assert_eq!(v, a.unit(1, 0, 0).sub(&a.unit(1, 1, 1)));
    }
}
