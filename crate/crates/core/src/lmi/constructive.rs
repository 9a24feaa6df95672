//! Closed-form multi-node certificates built from a common quadratic
//! function of longer products.

use super::{verify_certificate, Certificate, LyapunovTemplate};
use crate::error::{JsrError, Result};
use crate::families::{de_bruijn_id, FamilySpec};
use crate::graph::Word;
use crate::linalg::{min_eig_sym, word_product, Matrix, MatrixAlphabet, SymMatrix};

const PRECONDITION_TOL: f64 = 1e-9;

/// Checks `Q ≻ 0` and `Q − γ^{2l} MᵀQM ⪰ −tol·max(1, ‖Q‖)` for every product
/// `M` of length `l`.
fn check_common_quadratic(a: &MatrixAlphabet, q: &SymMatrix, l: usize, gamma: f64) -> Result<()> {
    if q.dim() != a.n() {
        return Err(JsrError::DimensionMismatch(format!(
            "Q is {}x{}, matrices are {}x{}",
            q.dim(),
            q.dim(),
            a.n(),
            a.n()
        )));
    }
    if !(gamma > 0.0) {
        return Err(JsrError::GammaNonPositive(gamma));
    }
    if min_eig_sym(q)? <= 0.0 {
        return Err(JsrError::PreconditionUnverified("Q is not positive definite".into()));
    }
    let tol = PRECONDITION_TOL * q.as_matrix().max_abs().max(1.0);
    let scaled = a.scaled(gamma);
    for w in Word::all_of_length(a.m(), l) {
        let m = word_product(&scaled, &w)?;
        let gap = q.as_matrix() - &m.congruence(q.as_matrix());
        let e = min_eig_sym(&SymMatrix::symmetrize(&gap))?;
        if e < -tol {
            return Err(JsrError::PreconditionUnverified(format!(
                "Q fails on the length-{l} product {w} by {e:e}"
            )));
        }
    }
    Ok(())
}

/// Rescales so every node matrix satisfies `P ⪰ I` (only scales up).
fn normalize(nodes: &mut [(String, SymMatrix)]) -> Result<()> {
    let mut lo = f64::INFINITY;
    for (_, p) in nodes.iter() {
        lo = lo.min(min_eig_sym(p)?);
    }
    if lo < 1.0 {
        for (_, p) in nodes.iter_mut() {
            *p = p.scale(1.0 / lo);
        }
    }
    Ok(())
}

/// Certificate on G1 from a common quadratic function `Q` of all length-2
/// products: `P_i = Q + γ²AᵢᵀQAᵢ`.
pub fn two_step_certificate(a: &MatrixAlphabet, q: &SymMatrix, gamma: f64) -> Result<Certificate> {
    check_common_quadratic(a, q, 2, gamma)?;
    let scaled = a.scaled(gamma);
    let mut nodes: Vec<(String, SymMatrix)> = scaled
        .matrices()
        .iter()
        .enumerate()
        .map(|(i, ai)| {
            let p = q.as_matrix() + &ai.congruence(q.as_matrix());
            ((i + 1).to_string(), SymMatrix::symmetrize(&p))
        })
        .collect();
    normalize(&mut nodes)?;
    let mut cert = Certificate {
        gamma,
        template: LyapunovTemplate::quadratic(),
        nodes,
        slacks: Vec::new(),
        margin: 0.0,
    };
    cert.margin = verify_certificate(&FamilySpec::G1.build(a.m())?, a, &cert)?;
    Ok(cert)
}

/// Certificate on the dual De Bruijn graph of order `l − 1` from a common
/// quadratic function `Q` of all length-`l` products:
/// `P_{i₁…i_{l−1}} = Σ_{r<l} B_rᵀ Q B_r` with `B_0 = I` and
/// `B_r = A_{i_{l−r}} ⋯ A_{i_{l−1}}` (γ folded into each factor).
pub fn nested_certificate(
    a: &MatrixAlphabet,
    q: &SymMatrix,
    l: usize,
    gamma: f64,
) -> Result<Certificate> {
    if l < 2 {
        return Err(JsrError::InvalidInput(format!(
            "nested certificates need l >= 2, got {l}"
        )));
    }
    check_common_quadratic(a, q, l, gamma)?;
    let scaled = a.scaled(gamma);
    let m = a.m();
    let mut nodes = Vec::new();
    for idx in Word::all_of_length(m, l - 1) {
        let i = idx.letters();
        let mut p = q.as_matrix().clone();
        let mut b = Matrix::identity(a.n());
        for r in 1..l {
            // Extend B_{r-1} on the left by A_{i_{l-r}}.
            b = scaled.letter(i[l - 1 - r])?.matmul(&b);
            p = &p + &b.congruence(q.as_matrix());
        }
        nodes.push((de_bruijn_id(m, i), SymMatrix::symmetrize(&p)));
    }
    normalize(&mut nodes)?;
    let mut cert = Certificate {
        gamma,
        template: LyapunovTemplate::quadratic(),
        nodes,
        slacks: Vec::new(),
        margin: 0.0,
    };
    let g = FamilySpec::DeBruijnDual(l - 1).build(m)?;
    cert.margin = verify_certificate(&g, a, &cert)?;
    Ok(cert)
}
