//! Feasibility of LMI systems by uniform-slack maximization.
//!
//! The system is homogenized: constant terms are multiplied by a scalar
//! `s`, and the solver maximizes `t` subject to
//!
//! ```text
//! F_c(X, s) ⪰ t·I  for every PSD constraint,   s ≥ t,
//! polynomial identities,   Σ tr(X_b) + s = T.
//! ```
//!
//! `t* > 0` exactly when the original system is strictly feasible, and a
//! point with `t > 0` de-homogenizes to the certificate `X/t`. Equalities
//! are eliminated onto an orthonormal null-space basis; the remaining
//! inequality-only problem is solved by a damped Newton log-det barrier
//! method. Everything runs in a fixed order, so results are bit-for-bit
//! reproducible.

use log::debug;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{JsrError, Result};
use crate::linalg::{Matrix, SymMatrix};
use crate::lmi::{Certificate, Constraint, LmiSystem};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub slack_tol: f64,
    pub max_newton_iters: usize,
    /// Trace normalization `T`; defaults to the total block dimension.
    pub trace_norm: Option<f64>,
    /// Largest number of scalar decision variables accepted.
    pub max_vars: usize,
    /// Keep maximizing the slack after it first exceeds `slack_tol`, so
    /// `slack` approximates `t*` instead of a first feasible point.
    pub optimize: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            slack_tol: 1e-7,
            max_newton_iters: 200,
            trace_norm: None,
            max_vars: 2000,
            optimize: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Feasible,
    Infeasible,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub certificate: Option<Certificate>,
    /// Best uniform slack reached (a lower estimate of `t*`).
    pub slack: f64,
    /// Upper estimate of `t*` from the barrier gap.
    pub slack_upper: f64,
    pub newton_iters: usize,
    pub note: Option<String>,
}

/// Layout of the raw variable vector: scaled upper triangles of every block,
/// then `s`. Off-diagonal entries carry a `1/√2` factor so the layout is an
/// isometry for the Frobenius norm.
struct Layout {
    offsets: Vec<usize>,
    dims: Vec<usize>,
    len: usize,
}

impl Layout {
    fn new(sys: &LmiSystem) -> Self {
        let mut offsets = Vec::new();
        let mut dims = Vec::new();
        let mut len = 0;
        for b in &sys.blocks {
            offsets.push(len);
            dims.push(b.dim);
            len += b.dim * (b.dim + 1) / 2;
        }
        Self {
            offsets,
            dims,
            len: len + 1,
        }
    }

    fn s_index(&self) -> usize {
        self.len - 1
    }

    fn unpack(&self, z: &[f64]) -> Vec<Matrix> {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        self.offsets
            .iter()
            .zip(&self.dims)
            .map(|(&off, &d)| {
                let mut x = Matrix::zeros(d, d);
                let mut k = off;
                for p in 0..d {
                    x[(p, p)] = z[k];
                    k += 1;
                    for q in p + 1..d {
                        x[(p, q)] = z[k] * r;
                        x[(q, p)] = z[k] * r;
                        k += 1;
                    }
                }
                x
            })
            .collect()
    }

    /// Unit vectors of block `b` as `(raw index, block matrix)`.
    fn unit_blocks(&self, b: usize) -> Vec<(usize, Matrix)> {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let d = self.dims[b];
        let mut out = Vec::new();
        let mut k = self.offsets[b];
        for p in 0..d {
            for q in p..d {
                let mut x = Matrix::zeros(d, d);
                if p == q {
                    x[(p, p)] = 1.0;
                } else {
                    x[(p, q)] = r;
                    x[(q, p)] = r;
                }
                out.push((k, x));
                k += 1;
            }
        }
        out
    }
}

/// One inequality of the reduced problem: `F0 + Σ_k v_k·G_k ⪰ 0` with the
/// last coordinate of `v` being `t` (coefficient `−I`).
struct Reduced {
    dim: usize,
    f0: DMatrix<f64>,
    /// Column `k` is `vec(G_k)`, column-major `dim × dim`.
    g: DMatrix<f64>,
}

impl Reduced {
    fn value(&self, v: &DVector<f64>) -> DMatrix<f64> {
        let flat = &self.g * v;
        let mut m = self.f0.clone();
        for j in 0..self.dim {
            for i in 0..self.dim {
                m[(i, j)] += flat[j * self.dim + i];
            }
        }
        m
    }
}

fn to_dmatrix(m: &Matrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.data())
}

/// Maps a raw variable vector to the value of every inequality.
fn inequality_values(sys: &LmiSystem, layout: &Layout, z: &[f64]) -> Vec<Matrix> {
    let blocks = layout.unpack(z);
    let s = z[layout.s_index()];
    let mut out: Vec<Matrix> = sys
        .constraints
        .iter()
        .filter(|c| matches!(c, Constraint::Psd { .. }))
        .map(|c| sys.constraint_value(c, &blocks, s))
        .collect();
    out.push(Matrix::new(1, 1, vec![s]).expect("finite"));
    out
}

/// Equality rows `E z = f`: polynomial identities, then the trace row.
fn equality_system(sys: &LmiSystem, layout: &Layout, trace: f64) -> (DMatrix<f64>, DVector<f64>) {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut rhs = Vec::new();
    for c in &sys.constraints {
        let Constraint::SosIdentity { terms, slack, .. } = c else {
            continue;
        };
        let gram = sys.gram.as_ref().expect("SOS systems carry a Gram map");
        let mut block_ids: Vec<usize> = terms.iter().map(|t| t.block).collect();
        block_ids.push(*slack);
        block_ids.sort_unstable();
        block_ids.dedup();
        let mut local = vec![vec![0.0; layout.len]; gram.n_coeffs()];
        let zero_blocks: Vec<Matrix> = layout
            .dims
            .iter()
            .map(|&d| Matrix::zeros(d, d))
            .collect();
        for &b in &block_ids {
            for (k, unit) in layout.unit_blocks(b) {
                let mut blocks = zero_blocks.clone();
                blocks[b] = unit;
                let value = sys.constraint_value(c, &blocks, 0.0);
                for (row, coef) in local.iter_mut().zip(gram.coefficients(&value)) {
                    row[k] += coef;
                }
            }
        }
        for row in local {
            rows.push(row);
            rhs.push(0.0);
        }
    }
    let mut trace_row = vec![0.0; layout.len];
    for (b, &d) in layout.dims.iter().enumerate() {
        let mut k = layout.offsets[b];
        for p in 0..d {
            trace_row[k] = 1.0;
            k += d - p;
        }
    }
    trace_row[layout.s_index()] = 1.0;
    rows.push(trace_row);
    rhs.push(trace);
    let e = DMatrix::from_fn(rows.len(), layout.len, |i, j| rows[i][j]);
    (e, DVector::from_vec(rhs))
}

/// Minimum-norm solution of `E z = f` and an orthonormal basis of ker E.
fn eliminate(e: &DMatrix<f64>, f: &DVector<f64>) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let ete = e.transpose() * e;
    let eig = SymmetricEigen::new(ete);
    let top = eig.eigenvalues.iter().fold(0.0_f64, |m, &v| m.max(v.abs()));
    let cut = top * 1e-14;
    let etf = e.transpose() * f;
    let n = e.ncols();
    let mut z0 = DVector::zeros(n);
    let mut null_cols = Vec::new();
    for (i, &lam) in eig.eigenvalues.iter().enumerate() {
        let v = eig.eigenvectors.column(i);
        if lam > cut {
            z0 += v * (v.dot(&etf) / lam);
        } else {
            null_cols.push(v.into_owned());
        }
    }
    let resid = (e * &z0 - f).amax();
    if resid > 1e-8 * f.amax().max(1.0) {
        return Err(JsrError::NumericalFailure(format!(
            "equality constraints are inconsistent (residual {resid:e})"
        )));
    }
    let null = if null_cols.is_empty() {
        DMatrix::zeros(n, 0)
    } else {
        DMatrix::from_columns(&null_cols)
    };
    Ok((z0, null))
}

struct Problem {
    ineqs: Vec<Reduced>,
    nvars: usize,
    nu: f64,
}

struct Eval {
    value: f64,
    chol: Vec<DMatrix<f64>>,
}

impl Problem {
    /// Barrier value `−τt − Σ log det Z_c`, or `None` outside the domain.
    fn evaluate(&self, v: &DVector<f64>, tau: f64) -> Option<Eval> {
        let t = v[self.nvars - 1];
        let mut value = -tau * t;
        let mut chol = Vec::with_capacity(self.ineqs.len());
        for c in &self.ineqs {
            let z = c.value(v);
            let l = z.cholesky()?.unpack();
            for i in 0..c.dim {
                value -= 2.0 * l[(i, i)].ln();
            }
            chol.push(l);
        }
        value.is_finite().then_some(Eval { value, chol })
    }

    fn newton_direction(
        &self,
        ev: &Eval,
        tau: f64,
    ) -> Option<(DVector<f64>, DVector<f64>)> {
        let nv = self.nvars;
        let mut grad = DVector::zeros(nv);
        grad[nv - 1] = -tau;
        let mut hess = DMatrix::zeros(nv, nv);
        for (c, l) in self.ineqs.iter().zip(&ev.chol) {
            let d = c.dim;
            let linv = l.clone().solve_lower_triangular(&DMatrix::identity(d, d))?;
            let k = linv.kronecker(&linv);
            // Column k of B is vec(L⁻¹ G_k L⁻ᵀ).
            let b = &k * &c.g;
            for j in 0..nv {
                let mut tr = 0.0;
                for i in 0..d {
                    tr += b[(i * d + i, j)];
                }
                grad[j] -= tr;
            }
            hess += b.transpose() * &b;
        }
        let mut reg = 0.0;
        let scale = hess.diagonal().amax().max(1e-300);
        loop {
            let mut h = hess.clone();
            if reg > 0.0 {
                for i in 0..nv {
                    h[(i, i)] += reg;
                }
            }
            if let Some(ch) = h.cholesky() {
                let dir = -ch.solve(&grad);
                return Some((dir, grad));
            }
            reg = if reg == 0.0 { scale * 1e-14 } else { reg * 100.0 };
            if reg > scale {
                return None;
            }
        }
    }
}

/// Solves the feasibility problem; `Feasible` results carry a certificate
/// whose margin has been re-evaluated on the original system.
pub fn solve(sys: &LmiSystem, opts: &SolveOptions) -> Result<SolveResult> {
    if !(opts.slack_tol > 0.0) {
        return Err(JsrError::InvalidInput("slack_tol must be positive".into()));
    }
    let layout = Layout::new(sys);
    if layout.len > opts.max_vars {
        return Err(JsrError::BudgetExceeded(format!(
            "{} scalar variables exceed the solver budget of {}",
            layout.len, opts.max_vars
        )));
    }
    let total_dim: usize = layout.dims.iter().sum();
    let trace = opts.trace_norm.unwrap_or(total_dim as f64);
    let (e, f) = equality_system(sys, &layout, trace);
    let (z0, null) = match eliminate(&e, &f) {
        Ok(x) => x,
        Err(err) => return Ok(inconclusive(err.to_string())),
    };
    let r = null.ncols();

    // Reduced inequalities in the variables v = (y, t).
    let base = inequality_values(sys, &layout, z0.as_slice());
    let mut ineqs: Vec<Reduced> = base
        .iter()
        .map(|m| Reduced {
            dim: m.rows(),
            f0: to_dmatrix(m),
            g: DMatrix::zeros(m.rows() * m.rows(), r + 1),
        })
        .collect();
    let zero = vec![0.0; layout.len];
    let lin0 = inequality_values(sys, &layout, &zero);
    for k in 0..r {
        let col = null.column(k);
        let vals = inequality_values(sys, &layout, col.as_slice());
        for ((c, v), v0) in ineqs.iter_mut().zip(&vals).zip(&lin0) {
            let d = c.dim;
            for j in 0..d {
                for i in 0..d {
                    c.g[(j * d + i, k)] = v[(i, j)] - v0[(i, j)];
                }
            }
        }
    }
    for c in &mut ineqs {
        let d = c.dim;
        for i in 0..d {
            c.g[(i * d + i, r)] = -1.0;
        }
    }
    let nu: f64 = ineqs.iter().map(|c| c.dim as f64).sum();
    let prob = Problem {
        ineqs,
        nvars: r + 1,
        nu,
    };

    let mut t0 = f64::INFINITY;
    for m in &base {
        t0 = t0.min(crate::linalg::min_eig_sym(&SymMatrix::symmetrize(m))?);
    }
    let mut v = DVector::zeros(r + 1);
    v[r] = t0 - 1.0;

    let tol = opts.slack_tol;
    let mut tau = 1.0;
    let mut iters = 0usize;
    let mut upper = f64::INFINITY;
    let finish = |v: &DVector<f64>, upper: f64, iters: usize| -> Result<SolveResult> {
        let t = v[r];
        if t >= tol {
            let z = &z0 + &null * v.rows(0, r);
            return feasible(sys, &layout, z.as_slice(), t, upper, iters);
        }
        let status = if upper <= -tol {
            SolveStatus::Infeasible
        } else {
            SolveStatus::Inconclusive
        };
        Ok(SolveResult {
            status,
            certificate: None,
            slack: t,
            slack_upper: upper,
            newton_iters: iters,
            note: None,
        })
    };

    loop {
        // Centering.
        loop {
            let Some(ev) = prob.evaluate(&v, tau) else {
                return Ok(inconclusive("iterate left the barrier domain".into()));
            };
            let Some((dir, grad)) = prob.newton_direction(&ev, tau) else {
                let mut res = finish(&v, upper, iters)?;
                res.note = Some("singular Newton system".into());
                return Ok(res);
            };
            let dec2 = -grad.dot(&dir);
            if dec2 / 2.0 < 1e-9 {
                break;
            }
            let mut alpha = 1.0;
            let accepted = loop {
                let cand = &v + &dir * alpha;
                if let Some(c) = prob.evaluate(&cand, tau) {
                    if c.value <= ev.value - 0.25 * alpha * dec2 {
                        break Some(cand);
                    }
                }
                alpha *= 0.5;
                if alpha < 1e-12 {
                    break None;
                }
            };
            let Some(next) = accepted else {
                let mut res = finish(&v, upper, iters)?;
                res.note = Some("line search stagnated".into());
                return Ok(res);
            };
            v = next;
            iters += 1;
            debug!(
                "newton {iters}: t={:.6e} tau={tau:.1e} step={alpha:.3e} dec2={dec2:.3e}",
                v[r]
            );
            if !opts.optimize && v[r] >= tol {
                return finish(&v, upper, iters);
            }
            if iters >= opts.max_newton_iters {
                let mut res = finish(&v, upper, iters)?;
                res.note = Some(format!("Newton budget of {iters} iterations reached"));
                return Ok(res);
            }
        }
        let gap = prob.nu / tau;
        upper = upper.min(v[r] + 2.0 * gap);
        if upper <= -tol || gap <= tol / 10.0 {
            return finish(&v, upper, iters);
        }
        tau *= 10.0;
    }
}

fn inconclusive(note: String) -> SolveResult {
    SolveResult {
        status: SolveStatus::Inconclusive,
        certificate: None,
        slack: f64::NAN,
        slack_upper: f64::NAN,
        newton_iters: 0,
        note: Some(note),
    }
}

/// De-homogenizes by `t` and by `s`, keeping whichever verifies better.
fn feasible(
    sys: &LmiSystem,
    layout: &Layout,
    z: &[f64],
    t: f64,
    upper: f64,
    iters: usize,
) -> Result<SolveResult> {
    let blocks = layout.unpack(z);
    let s = z[layout.s_index()];
    let mut best: Option<Certificate> = None;
    for div in [t, s] {
        if !(div > 0.0) {
            continue;
        }
        let scaled: Vec<SymMatrix> = blocks
            .iter()
            .map(|b| SymMatrix::symmetrize(&b.scale(1.0 / div)))
            .collect();
        let margin = sys.evaluate(&scaled)?;
        if best.as_ref().is_none_or(|c| margin > c.margin) {
            let (nodes, slacks) = scaled.split_at(sys.node_blocks);
            best = Some(Certificate {
                gamma: sys.gamma,
                template: sys.template,
                nodes: sys.node_ids.iter().cloned().zip(nodes.iter().cloned()).collect(),
                slacks: slacks.to_vec(),
                margin,
            });
        }
    }
    let cert = best.expect("t > 0 gives at least one candidate");
    let status = if cert.margin > 0.0 {
        SolveStatus::Feasible
    } else {
        SolveStatus::Inconclusive
    };
    Ok(SolveResult {
        status,
        certificate: (status == SolveStatus::Feasible).then_some(cert),
        slack: t,
        slack_upper: upper,
        newton_iters: iters,
        note: (status != SolveStatus::Feasible)
            .then(|| "certificate failed independent verification".into()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::FamilySpec;
    use crate::linalg::MatrixAlphabet;
    use crate::lmi::{build_lmi, verify_certificate, LyapunovTemplate};

    fn alphabet(ms: &[&[&[f64]]]) -> MatrixAlphabet {
        MatrixAlphabet::new(
            ms.iter()
                .map(|m| Matrix::from_rows(&m.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn contradictory_system_is_infeasible() {
        // P − 2P ⪰ 0 together with P ⪰ I.
        let a = MatrixAlphabet::new(vec![Matrix::identity(2).scale(2f64.sqrt())]).unwrap();
        let h1 = FamilySpec::Common.build(1).unwrap();
        let sys = build_lmi(&h1, &a, 1.0, LyapunovTemplate::quadratic()).unwrap();
        let res = solve(&sys, &SolveOptions::default()).unwrap();
        assert_eq!(res.status, SolveStatus::Infeasible);
        assert!(res.slack_upper < -1e-7);
    }

    #[test]
    fn contractive_scalar_is_feasible() {
        let a = MatrixAlphabet::new(vec![Matrix::identity(2).scale(0.5)]).unwrap();
        let h1 = FamilySpec::Common.build(1).unwrap();
        let sys = build_lmi(&h1, &a, 1.0, LyapunovTemplate::quadratic()).unwrap();
        let res = solve(&sys, &SolveOptions::default()).unwrap();
        assert_eq!(res.status, SolveStatus::Feasible);
        let cert = res.certificate.unwrap();
        assert!(verify_certificate(&h1, &a, &cert).unwrap() >= 0.5e-7);
    }

    #[test]
    fn ex52_g1_feasible_below_one() {
        let a = alphabet(&[&[&[1.0, 0.0], &[1.0, 0.0]], &[&[0.0, 1.0], &[0.0, -1.0]]]);
        let g1 = FamilySpec::G1.build(2).unwrap();
        let sys = build_lmi(&g1, &a, 1.0 / 1.1, LyapunovTemplate::quadratic()).unwrap();
        let res = solve(&sys, &SolveOptions::default()).unwrap();
        assert_eq!(res.status, SolveStatus::Feasible);
        let cert = res.certificate.unwrap();
        assert!(verify_certificate(&g1, &a, &cert).unwrap() > 0.0);
    }

    #[test]
    fn sos_system_solves() {
        let a = alphabet(&[&[&[0.5, 0.2], &[0.0, 0.3]], &[&[0.1, 0.0], &[0.4, 0.2]]]);
        let h1 = FamilySpec::Common.build(2).unwrap();
        let sys = build_lmi(&h1, &a, 1.0, LyapunovTemplate::sos(4).unwrap()).unwrap();
        let res = solve(&sys, &SolveOptions::default()).unwrap();
        assert_eq!(res.status, SolveStatus::Feasible);
        let cert = res.certificate.unwrap();
        assert_eq!(cert.slacks.len(), 2);
        assert!(verify_certificate(&h1, &a, &cert).unwrap() > 0.0);
    }

    #[test]
    fn variable_budget() {
        let a = MatrixAlphabet::new(vec![Matrix::identity(2)]).unwrap();
        let h1 = FamilySpec::Common.build(1).unwrap();
        let sys = build_lmi(&h1, &a, 1.0, LyapunovTemplate::quadratic()).unwrap();
        let opts = SolveOptions {
            max_vars: 2,
            ..SolveOptions::default()
        };
        assert!(matches!(solve(&sys, &opts), Err(JsrError::BudgetExceeded(_))));
    }

    #[test]
    fn deterministic() {
        let a = alphabet(&[&[&[0.9, 0.3], &[-0.2, 0.5]], &[&[0.1, -0.7], &[0.6, 0.2]]]);
        let g = FamilySpec::G2.build(2).unwrap();
        let sys = build_lmi(&g, &a, 1.0, LyapunovTemplate::quadratic()).unwrap();
        let r1 = solve(&sys, &SolveOptions::default()).unwrap();
        let r2 = solve(&sys, &SolveOptions::default()).unwrap();
        assert_eq!(r1, r2);
    }
}
