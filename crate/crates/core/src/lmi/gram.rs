use crate::linalg::{Matrix, MonomialBasis};

/// Map from Gram matrices on a degree-`d` basis to coefficients of the
/// degree-`2d` form `m_d(x)ᵀ G m_d(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMap {
    dim: usize,
    /// Row-major `dim × dim` table of product monomial indices.
    product: Vec<usize>,
    /// Number of ordered pairs `(a, b)` landing on each product monomial.
    counts: Vec<usize>,
}

impl GramMap {
    pub fn new(basis: &MonomialBasis) -> Self {
        let dim = basis.len();
        let double = MonomialBasis::new(basis.n(), 2 * basis.d())
            .expect("basis dimension is already validated");
        let mut product = Vec::with_capacity(dim * dim);
        let mut counts = vec![0; double.len()];
        for a in basis.monomials() {
            for b in basis.monomials() {
                let sum: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                let idx = double.position(&sum).expect("degree 2d monomial");
                product.push(idx);
                counts[idx] += 1;
            }
        }
        Self {
            dim,
            product,
            counts,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_coeffs(&self) -> usize {
        self.counts.len()
    }

    /// Index of the coefficient that entry `(a, b)` contributes to.
    pub fn product_index(&self, a: usize, b: usize) -> usize {
        self.product[a * self.dim + b]
    }

    pub fn coefficients(&self, g: &Matrix) -> Vec<f64> {
        let mut c = vec![0.0; self.n_coeffs()];
        for a in 0..self.dim {
            for b in 0..self.dim {
                c[self.product_index(a, b)] += g[(a, b)];
            }
        }
        c
    }

    /// The minimum-Frobenius-norm symmetric Gram matrix with the given
    /// coefficients: each coefficient is spread evenly over its pairs.
    pub fn canonical_gram(&self, coeffs: &[f64]) -> Matrix {
        let mut g = Matrix::zeros(self.dim, self.dim);
        for a in 0..self.dim {
            for b in 0..self.dim {
                let k = self.product_index(a, b);
                g[(a, b)] = coeffs[k] / self.counts[k] as f64;
            }
        }
        g
    }
}
