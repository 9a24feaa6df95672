use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::matrix::Matrix;
use crate::error::{JsrError, Result};

/// Homogeneous monomials of degree `d` in `n` variables, graded-lex order.
///
/// Graded-lex on a single degree reduces to lexicographic order on the
/// exponent vectors, largest first: for n=2, d=2 this is `x², xy, y²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BasisShape", into = "BasisShape")]
pub struct MonomialBasis {
    n: usize,
    d: usize,
    monomials: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

#[derive(Serialize, Deserialize)]
struct BasisShape {
    n: usize,
    d: usize,
}

impl TryFrom<BasisShape> for MonomialBasis {
    type Error = JsrError;

    fn try_from(s: BasisShape) -> Result<Self> {
        MonomialBasis::new(s.n, s.d)
    }
}

impl From<MonomialBasis> for BasisShape {
    fn from(b: MonomialBasis) -> Self {
        BasisShape { n: b.n, d: b.d }
    }
}

impl MonomialBasis {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        if n == 0 {
            return Err(JsrError::InvalidInput("monomial basis needs n >= 1".into()));
        }
        let mut monomials = Vec::new();
        let mut cur = vec![0u32; n];
        fill(&mut monomials, &mut cur, 0, d as u32);
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        Ok(Self {
            n,
            d,
            monomials,
            index,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Vec<u32>] {
        &self.monomials
    }

    pub fn position(&self, exps: &[u32]) -> Option<usize> {
        self.index.get(exps).copied()
    }

    /// Evaluates the monomial vector at `x`.
    pub fn evaluate(&self, x: &[f64]) -> Vec<f64> {
        self.monomials
            .iter()
            .map(|e| {
                e.iter()
                    .zip(x)
                    .map(|(&k, &xi)| xi.powi(k as i32))
                    .product()
            })
            .collect()
    }
}

fn fill(out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, var: usize, left: u32) {
    let n = cur.len();
    if var + 1 == n {
        cur[var] = left;
        out.push(cur.clone());
        cur[var] = 0;
        return;
    }
    for k in (0..=left).rev() {
        cur[var] = k;
        fill(out, cur, var + 1, left - k);
    }
    cur[var] = 0;
}

/// Binomial coefficient as usize (small arguments only).
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Matrix `L` with `m_d(Mx) = L · m_d(x)`.
///
/// Row α holds the coefficients of the polynomial `Π_i (M_i · x)^{α_i}`
/// expanded over the basis, built by repeated sparse polynomial products.
/// Ordered maps keep the floating-point summation order reproducible.
pub fn monomial_lift(m: &Matrix, basis: &MonomialBasis) -> Result<Matrix> {
    let n = basis.n();
    if m.rows() != n || m.cols() != n {
        return Err(JsrError::InvalidInput(format!(
            "lift of a {}x{} matrix on a basis in {n} variables",
            m.rows(),
            m.cols()
        )));
    }
    let len = basis.len();
    let mut out = Matrix::zeros(len, len);
    for (a, alpha) in basis.monomials().iter().enumerate() {
        let mut poly: BTreeMap<Vec<u32>, f64> = BTreeMap::from([(vec![0u32; n], 1.0)]);
        for (i, &power) in alpha.iter().enumerate() {
            for _ in 0..power {
                let mut next: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
                for (exps, c) in &poly {
                    for j in 0..n {
                        let mij = m[(i, j)];
                        if mij == 0.0 {
                            continue;
                        }
                        let mut e = exps.clone();
                        e[j] += 1;
                        *next.entry(e).or_insert(0.0) += c * mij;
                    }
                }
                poly = next;
            }
        }
        for (exps, c) in poly {
            let b = basis
                .position(&exps)
                .expect("product of degree-d linear forms stays in the basis");
            out[(a, b)] = c;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_order() {
        let b = MonomialBasis::new(2, 2).unwrap();
        assert_eq!(b.monomials(), &[vec![2, 0], vec![1, 1], vec![0, 2]]);
        let b = MonomialBasis::new(3, 2).unwrap();
        assert_eq!(b.len(), 6);
        assert_eq!(b.monomials()[0], vec![2, 0, 0]);
        assert_eq!(b.monomials()[5], vec![0, 0, 2]);
    }

    #[test]
    fn sizes_match_binomial() {
        for n in 1..=5 {
            for d in 0..=4 {
                assert_eq!(MonomialBasis::new(n, d).unwrap().len(), binomial(n + d - 1, d));
            }
        }
        assert_eq!(binomial(6, 2), 15);
    }

    #[test]
    fn lift_examples() {
        let b = MonomialBasis::new(2, 2).unwrap();
        let l = monomial_lift(&Matrix::identity(2), &b).unwrap();
        assert_eq!(l, Matrix::identity(3));
        let l = monomial_lift(&Matrix::diag(&[2.0, 3.0]), &b).unwrap();
        assert_eq!(l, Matrix::diag(&[4.0, 6.0, 9.0]));
        let swap = Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let l = monomial_lift(&swap, &b).unwrap();
        let want = Matrix::from_rows(&[
            vec![0.0, 0.0, 1.0],
            vec![0.0, 1.0, 0.0],
            vec![1.0, 0.0, 0.0],
        ])
        .unwrap();
        assert_eq!(l, want);
    }

    #[test]
    fn lift_acts_on_evaluations() {
        let b = MonomialBasis::new(3, 3).unwrap();
        let m = Matrix::from_rows(&[
            vec![0.3, -1.2, 0.5],
            vec![2.0, 0.1, -0.7],
            vec![-0.4, 0.9, 1.1],
        ])
        .unwrap();
        let x = [0.7, -0.2, 1.3];
        let mx: Vec<f64> = (0..3).map(|i| (0..3).map(|j| m[(i, j)] * x[j]).sum()).collect();
        let l = monomial_lift(&m, &b).unwrap();
        let mono = b.evaluate(&x);
        let lifted: Vec<f64> = (0..b.len())
            .map(|i| (0..b.len()).map(|j| l[(i, j)] * mono[j]).sum())
            .collect();
        for (u, v) in lifted.iter().zip(b.evaluate(&mx)) {
            assert!((u - v).abs() < 1e-12);
        }
    }

    #[test]
    fn dimension_mismatch() {
        let b = MonomialBasis::new(2, 2).unwrap();
        assert!(monomial_lift(&Matrix::identity(3), &b).is_err());
    }
}
