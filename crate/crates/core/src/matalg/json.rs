//! JSON forms of elements and subspaces.
//!
//! Element: `{"blocks": [{"n": 2, "entries": [["1", "0"], ["1/2", "-3"], …]}]}`
//! with row-major entries given as `[re, im]` rational strings.
//! Subspace: `{"algebra": [n₁, …], "basis": [element, …]}`.

use serde::{Deserialize, Serialize};

use super::algebra::{AlgElement, FdAlgebra};
use super::subspace::Subspace;
use crate::error::{Error, Result};
use crate::freealg::GaussRat;
use crate::qmatrix::QMatrix;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BlockJson {
    pub n: usize,
    pub entries: Vec<[String; 2]>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ElementJson {
    pub blocks: Vec<BlockJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SubspaceJson {
    pub algebra: Vec<usize>,
    pub basis: Vec<ElementJson>,
}

impl BlockJson {
    pub fn from_matrix(m: &QMatrix) -> Self {
        BlockJson { n: m.n(), entries: m.data().iter().map(GaussRat::to_str_pair).collect() }
    }
}

impl ElementJson {
    pub fn from_element(e: &AlgElement) -> Self {
        ElementJson { blocks: e.blocks().iter().map(BlockJson::from_matrix).collect() }
    }

    pub fn to_element(&self) -> Result<AlgElement> {
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                if b.entries.len() != b.n * b.n {
                    return Err(Error::DimensionMismatch(format!(
                        "block of size {} has {} entries",
                        b.n,
                        b.entries.len()
                    )));
                }
                let data =
                    b.entries.iter().map(|[re, im]| GaussRat::from_str_pair(re, im)).collect::<Result<_>>()?;
                Ok(QMatrix::from_vec(b.n, data))
            })
            .collect::<Result<Vec<_>>>()?;
        let algebra = FdAlgebra::new(blocks.iter().map(QMatrix::n).collect())?;
        algebra.element(blocks)
    }
}

impl SubspaceJson {
    pub fn from_subspace(s: &Subspace) -> Self {
        SubspaceJson {
            algebra: s.algebra().blocks().to_vec(),
            basis: s.basis().iter().map(ElementJson::from_element).collect(),
        }
    }

    /// Spans the listed elements (which need not be independent).
    pub fn to_subspace(&self) -> Result<Subspace> {
        let algebra = FdAlgebra::new(self.algebra.clone())?;
        let elems = self.basis.iter().map(ElementJson::to_element).collect::<Result<Vec<_>>>()?;
        Subspace::span(&algebra, &elems)
    }
}

pub fn parse_subspace(text: &str) -> Result<Subspace> {
    serde_json::from_str::<SubspaceJson>(text)?.to_subspace()
}

pub fn subspace_to_json(s: &Subspace) -> serde_json::Value {
    serde_json::to_value(SubspaceJson::from_subspace(s)).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matalg::commutator_subspace;

    #[test]
    fn subspace_roundtrip() {
        let a = FdAlgebra::new(vec![1, 2]).unwrap();
        let s = commutator_subspace(&a).sum(&Subspace::span(&a, &[a.one().scale(&GaussRat::ratio(1, 3))]).unwrap()).unwrap();
        let text = subspace_to_json(&s).to_string();
        assert_eq!(parse_subspace(&text).unwrap(), s);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_subspace(r#"{"algebra":[2],"basis":[{"blocks":[{"n":2,"entries":[["1","0"]]}]}]}"#).is_err());
        assert!(parse_subspace(r#"{"algebra":[2],"basis":[{"blocks":[{"n":1,"entries":[["1","0"]]}]}]}"#).is_err());
        assert!(parse_subspace("not json").is_err());
    }
}
