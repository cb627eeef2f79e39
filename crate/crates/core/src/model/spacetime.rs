//! Space-time codebooks: M codewords, each an n_t×t complex matrix.

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix};
use crate::model::constellation::Constellation;

#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTimeCode {
    n_t: usize,
    t: usize,
    codewords: Vec<ComplexMatrix>,
}

impl SpaceTimeCode {
    pub fn new(codewords: Vec<ComplexMatrix>) -> Result<Self> {
        let first = codewords
            .first()
            .ok_or_else(|| Error::InvalidArgument("codebook is empty".into()))?;
        let (n_t, t) = first.shape();
        if n_t == 0 || t == 0 {
            return Err(Error::Dimension("codewords must be nonempty matrices".into()));
        }
        if codewords.iter().any(|x| x.shape() != (n_t, t)) {
            return Err(Error::Dimension("codewords must share one shape".into()));
        }
        if codewords.iter().any(|x| !linalg::all_finite(x)) {
            return Err(Error::InvalidArgument("non-finite codeword entry".into()));
        }
        for i in 0..codewords.len() {
            for j in (i + 1)..codewords.len() {
                if linalg::fro2(&(&codewords[i] - &codewords[j])) <= 1e-12 {
                    return Err(Error::DuplicatePoint(i, j));
                }
            }
        }
        Ok(Self { n_t, t, codewords })
    }

    /// The t = 1 code whose codewords are the constellation points.
    pub fn from_constellation(c: &Constellation) -> Self {
        let words = c
            .points()
            .iter()
            .map(|p| ComplexMatrix::from_column_slice(c.n_t(), 1, p))
            .collect();
        Self { n_t: c.n_t(), t: 1, codewords: words }
    }

    pub fn n_t(&self) -> usize {
        self.n_t
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn m(&self) -> usize {
        self.codewords.len()
    }

    pub fn codewords(&self) -> &[ComplexMatrix] {
        &self.codewords
    }

    /// Δ_ij = (X_i − X_j)(X_i − X_j)†.
    pub fn difference_gram(&self, i: usize, j: usize) -> ComplexMatrix {
        let e = &self.codewords[i] - &self.codewords[j];
        &e * e.adjoint()
    }
}
