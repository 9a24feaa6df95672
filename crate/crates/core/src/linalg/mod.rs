//! Dense real linear algebra: matrices, alphabets, word products, spectral
//! quantities and monomial lifts.

mod eigen;
mod matrix;
mod monomial;

pub use eigen::{
    eigenvalues, max_eig_sym, min_eig_sym, operator_norm, spectral_radius, sym_eigenvalues,
};
pub use matrix::{Matrix, SymMatrix};
pub use monomial::{binomial, monomial_lift, MonomialBasis};

use serde::{Deserialize, Serialize};

use crate::error::{JsrError, Result};
use crate::graph::Word;

/// A finite set `{A₁, …, A_m}` of `n×n` real matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Matrix>", into = "Vec<Matrix>")]
pub struct MatrixAlphabet {
    n: usize,
    matrices: Vec<Matrix>,
}

impl MatrixAlphabet {
    pub fn new(matrices: Vec<Matrix>) -> Result<Self> {
        let first = matrices
            .first()
            .ok_or_else(|| JsrError::InvalidInput("alphabet needs at least one matrix".into()))?;
        let n = first.rows();
        if n == 0 {
            return Err(JsrError::InvalidInput("matrices must be at least 1x1".into()));
        }
        for (i, a) in matrices.iter().enumerate() {
            if a.rows() != n || a.cols() != n {
                return Err(JsrError::DimensionMismatch(format!(
                    "matrix {} is {}x{}, expected {n}x{n}",
                    i + 1,
                    a.rows(),
                    a.cols()
                )));
            }
        }
        Ok(Self { n, matrices })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.matrices.len()
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    /// The matrix for a 1-based letter.
    pub fn letter(&self, letter: usize) -> Result<&Matrix> {
        if letter == 0 || letter > self.m() {
            return Err(JsrError::InvalidWord {
                letter,
                m: self.m(),
            });
        }
        Ok(&self.matrices[letter - 1])
    }

    /// `{γ·A₁, …, γ·A_m}`.
    pub fn scaled(&self, gamma: f64) -> Self {
        Self {
            n: self.n,
            matrices: self.matrices.iter().map(|a| a.scale(gamma)).collect(),
        }
    }

    pub fn transposed(&self) -> Self {
        Self {
            n: self.n,
            matrices: self.matrices.iter().map(Matrix::transpose).collect(),
        }
    }

    /// `Âᵢ = (Aᵢ + εI)/(1+ε)`, a uniform shift that makes singular members
    /// invertible for small positive `ε`.
    pub fn perturbed(&self, eps: f64) -> Result<Self> {
        if !eps.is_finite() || eps < 0.0 {
            return Err(JsrError::InvalidInput(format!(
                "perturbation must be a finite non-negative number, got {eps}"
            )));
        }
        let shift = Matrix::identity(self.n).scale(eps);
        Ok(Self {
            n: self.n,
            matrices: self
                .matrices
                .iter()
                .map(|a| (a + &shift).scale(1.0 / (1.0 + eps)))
                .collect(),
        })
    }

    /// All `m^len` products of length `len`, words in lexicographic order.
    pub fn power(&self, len: usize) -> Result<Self> {
        let words = Word::all_of_length(self.m(), len);
        let matrices = words
            .iter()
            .map(|w| word_product(self, w))
            .collect::<Result<Vec<_>>>()?;
        Self::new(matrices)
    }
}

impl TryFrom<Vec<Matrix>> for MatrixAlphabet {
    type Error = JsrError;

    fn try_from(m: Vec<Matrix>) -> Result<Self> {
        MatrixAlphabet::new(m)
    }
}

impl From<MatrixAlphabet> for Vec<Matrix> {
    fn from(a: MatrixAlphabet) -> Self {
        a.matrices
    }
}

/// `A_{w_k} ⋯ A_{w_1}` for `w = (w_1, …, w_k)` in application order.
pub fn word_product(alphabet: &MatrixAlphabet, w: &Word) -> Result<Matrix> {
    let mut acc = Matrix::identity(alphabet.n());
    for &letter in w.letters() {
        acc = alphabet.letter(letter)?.matmul(&acc);
    }
    Ok(acc)
}
