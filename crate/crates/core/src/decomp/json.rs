//! JSON forms of numeric matrices and divisibility witnesses.
//!
//! Matrix: `{"n": 2, "entries": [[re, im], …]}` row-major doubles.
//! Witness: `{"terms": [{"x": matrix, "d": matrix}, …]}`.

use serde::{Deserialize, Serialize};

use super::linalg::{c, CMatrix};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let n = m.nrows();
        let entries = (0..n).flat_map(|i| (0..n).map(move |j| [m[(i, j)].re, m[(i, j)].im])).collect();
        MatrixJson { n, entries }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        if self.entries.len() != self.n * self.n {
            return Err(Error::DimensionMismatch(format!(
                "matrix of size {} has {} entries",
                self.n,
                self.entries.len()
            )));
        }
        let m = CMatrix::from_fn(self.n, self.n, |i, j| {
            let [re, im] = self.entries[i * self.n + j];
            c(re, im)
        });
        if !super::linalg::is_finite(&m) {
            return Err(Error::Numeric("non-finite matrix entry".into()));
        }
        Ok(m)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessTermJson {
    pub x: MatrixJson,
    pub d: MatrixJson,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessJson {
    pub terms: Vec<WitnessTermJson>,
}

pub fn parse_matrix(text: &str) -> Result<CMatrix> {
    serde_json::from_str::<MatrixJson>(text)?.to_matrix()
}

pub fn matrix_to_json(m: &CMatrix) -> serde_json::Value {
    serde_json::to_value(MatrixJson::from_matrix(m)).expect("serializable")
}

/// Pairs `(x_i, d_i)` of a divisibility witness.
pub fn parse_witness(text: &str) -> Result<Vec<(CMatrix, CMatrix)>> {
    let w: WitnessJson = serde_json::from_str(text)?;
    w.terms.iter().map(|t| Ok((t.x.to_matrix()?, t.d.to_matrix()?))).collect()
}

pub fn witness_to_json(terms: &[(CMatrix, CMatrix)]) -> serde_json::Value {
    let w = WitnessJson {
        terms: terms
            .iter()
            .map(|(x, d)| WitnessTermJson { x: MatrixJson::from_matrix(x), d: MatrixJson::from_matrix(d) })
            .collect(),
    };
    serde_json::to_value(w).expect("serializable")
}
