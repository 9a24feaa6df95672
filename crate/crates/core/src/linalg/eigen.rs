//! Eigenvalue kernels.
//!
//! General matrices go through a Householder reduction to upper Hessenberg
//! form followed by Francis double-shift QR sweeps (the EISPACK `hqr`
//! scheme, eigenvalues only). Symmetric matrices use cyclic Jacobi
//! rotations, which give small absolute errors on the little Gram and
//! constraint matrices this crate verifies.

use super::matrix::{Matrix, SymMatrix};
use crate::error::{JsrError, Result};

struct Dense {
    n: usize,
    a: Vec<f64>,
}

impl Dense {
    fn at(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.n + j] = v;
    }
}

/// Householder reduction to upper Hessenberg form (similarity transform).
fn hessenberg(m: &Matrix) -> Dense {
    let n = m.rows();
    let mut h = Dense {
        n,
        a: m.data().to_vec(),
    };
    if n < 3 {
        return h;
    }
    let mut v = vec![0.0; n];
    for k in 0..n - 2 {
        let scale: f64 = (k + 1..n).map(|i| h.at(i, k).abs()).sum();
        if scale == 0.0 {
            continue;
        }
        let mut sigma = 0.0;
        for i in k + 1..n {
            v[i] = h.at(i, k) / scale;
            sigma += v[i] * v[i];
        }
        let mut g = sigma.sqrt();
        if v[k + 1] > 0.0 {
            g = -g;
        }
        let hh = sigma - v[k + 1] * g;
        v[k + 1] -= g;

        // Left application: rows k+1..n.
        for j in 0..n {
            let f: f64 = (k + 1..n).map(|i| v[i] * h.at(i, j)).sum::<f64>() / hh;
            for i in k + 1..n {
                let val = h.at(i, j) - f * v[i];
                h.set(i, j, val);
            }
        }
        // Right application: columns k+1..n.
        for i in 0..n {
            let f: f64 = (k + 1..n).map(|j| v[j] * h.at(i, j)).sum::<f64>() / hh;
            for j in k + 1..n {
                let val = h.at(i, j) - f * v[j];
                h.set(i, j, val);
            }
        }
        h.set(k + 1, k, scale * g);
        for i in k + 2..n {
            h.set(i, k, 0.0);
        }
    }
    h
}

/// All eigenvalues of a square matrix as `(re, im)` pairs.
///
/// Fails with `NumericalFailure` when the QR sweeps exceed `100·n²`
/// iterations in total.
pub fn eigenvalues(m: &Matrix) -> Result<Vec<(f64, f64)>> {
    if !m.is_square() {
        return Err(JsrError::DimensionMismatch(format!(
            "eigenvalues need a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if m.data().iter().any(|v| !v.is_finite()) {
        return Err(JsrError::InvalidInput("matrix has non-finite entries".into()));
    }
    let nn = m.rows();
    if nn == 0 {
        return Ok(Vec::new());
    }
    let mut h = hessenberg(m);
    let cap = 100 * nn * nn;
    let mut total_iters = 0usize;
    let mut wr = vec![0.0; nn];
    let mut wi = vec![0.0; nn];
    let eps = f64::EPSILON;

    let mut norm = 0.0;
    for i in 0..nn {
        for j in i.saturating_sub(1)..nn {
            norm += h.at(i, j).abs();
        }
    }
    if norm == 0.0 {
        return Ok(vec![(0.0, 0.0); nn]);
    }

    let mut n: isize = nn as isize - 1;
    let mut exshift = 0.0;
    let mut iter = 0usize;
    let (mut p, mut q, mut r): (f64, f64, f64);
    let (mut x, mut y, mut w, mut z): (f64, f64, f64, f64);

    while n >= 0 {
        let nu = n as usize;
        // Find a negligible subdiagonal entry.
        let mut l = nu;
        while l > 0 {
            let mut s = h.at(l - 1, l - 1).abs() + h.at(l, l).abs();
            if s == 0.0 {
                s = norm;
            }
            if h.at(l, l - 1).abs() < eps * s {
                break;
            }
            l -= 1;
        }

        if l == nu {
            wr[nu] = h.at(nu, nu) + exshift;
            wi[nu] = 0.0;
            n -= 1;
            iter = 0;
        } else if l + 1 == nu {
            w = h.at(nu, nu - 1) * h.at(nu - 1, nu);
            p = (h.at(nu - 1, nu - 1) - h.at(nu, nu)) / 2.0;
            q = p * p + w;
            z = q.abs().sqrt();
            x = h.at(nu, nu) + exshift;
            if q >= 0.0 {
                z = if p >= 0.0 { p + z } else { p - z };
                wr[nu - 1] = x + z;
                wr[nu] = if z != 0.0 { x - w / z } else { x + z };
                wi[nu - 1] = 0.0;
                wi[nu] = 0.0;
            } else {
                wr[nu - 1] = x + p;
                wr[nu] = x + p;
                wi[nu - 1] = z;
                wi[nu] = -z;
            }
            n -= 2;
            iter = 0;
        } else {
            total_iters += 1;
            if total_iters > cap {
                return Err(JsrError::NumericalFailure(format!(
                    "QR iteration did not converge within {cap} iterations"
                )));
            }
            x = h.at(nu, nu);
            y = h.at(nu - 1, nu - 1);
            w = h.at(nu, nu - 1) * h.at(nu - 1, nu);

            // Exceptional shifts break cycles on pathological inputs.
            if iter == 10 {
                exshift += x;
                for i in 0..=nu {
                    let v = h.at(i, i) - x;
                    h.set(i, i, v);
                }
                let s = h.at(nu, nu - 1).abs() + h.at(nu - 1, nu - 2).abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            if iter == 30 {
                let mut s = (y - x) / 2.0;
                s = s * s + w;
                if s > 0.0 {
                    s = s.sqrt();
                    if y < x {
                        s = -s;
                    }
                    s = x - w / ((y - x) / 2.0 + s);
                    for i in 0..=nu {
                        let v = h.at(i, i) - s;
                        h.set(i, i, v);
                    }
                    exshift += s;
                    x = 0.964;
                    y = x;
                    w = x;
                }
            }
            iter += 1;

            // Look for two consecutive small subdiagonal entries.
            let mut mm = nu - 2;
            loop {
                z = h.at(mm, mm);
                r = x - z;
                let s0 = y - z;
                p = (r * s0 - w) / h.at(mm + 1, mm) + h.at(mm, mm + 1);
                q = h.at(mm + 1, mm + 1) - z - r - s0;
                r = h.at(mm + 2, mm + 1);
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if mm == l {
                    break;
                }
                let lhs = h.at(mm, mm - 1).abs() * (q.abs() + r.abs());
                let rhs = eps
                    * (p.abs() * (h.at(mm - 1, mm - 1).abs() + z.abs() + h.at(mm + 1, mm + 1).abs()));
                if lhs < rhs {
                    break;
                }
                mm -= 1;
            }

            for i in mm + 2..=nu {
                h.set(i, i - 2, 0.0);
                if i > mm + 2 {
                    h.set(i, i - 3, 0.0);
                }
            }

            // Double QR step on rows l..=n, columns mm..=n.
            let mut k = mm;
            while k < nu {
                let notlast = k != nu - 1;
                let mut skip = false;
                x = 0.0;
                if k != mm {
                    p = h.at(k, k - 1);
                    q = h.at(k + 1, k - 1);
                    r = if notlast { h.at(k + 2, k - 1) } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x == 0.0 {
                        skip = true;
                    } else {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                if !skip {
                    let mut s = (p * p + q * q + r * r).sqrt();
                    if p < 0.0 {
                        s = -s;
                    }
                    if s != 0.0 {
                        if k != mm {
                            h.set(k, k - 1, -s * x);
                        } else if l != mm {
                            let v = -h.at(k, k - 1);
                            h.set(k, k - 1, v);
                        }
                        p += s;
                        x = p / s;
                        y = q / s;
                        z = r / s;
                        q /= p;
                        r /= p;

                        for j in k..nn {
                            let mut pp = h.at(k, j) + q * h.at(k + 1, j);
                            if notlast {
                                pp += r * h.at(k + 2, j);
                                let v = h.at(k + 2, j) - pp * z;
                                h.set(k + 2, j, v);
                            }
                            let v = h.at(k, j) - pp * x;
                            h.set(k, j, v);
                            let v = h.at(k + 1, j) - pp * y;
                            h.set(k + 1, j, v);
                        }
                        for i in l..=nu.min(k + 3) {
                            let mut pp = x * h.at(i, k) + y * h.at(i, k + 1);
                            if notlast {
                                pp += z * h.at(i, k + 2);
                                let v = h.at(i, k + 2) - pp * r;
                                h.set(i, k + 2, v);
                            }
                            let v = h.at(i, k) - pp;
                            h.set(i, k, v);
                            let v = h.at(i, k + 1) - pp * q;
                            h.set(i, k + 1, v);
                        }
                    }
                }
                k += 1;
            }
        }
    }
    Ok(wr.into_iter().zip(wi).collect())
}

/// Largest eigenvalue modulus.
pub fn spectral_radius(m: &Matrix) -> Result<f64> {
    Ok(eigenvalues(m)?
        .into_iter()
        .map(|(re, im)| re.hypot(im))
        .fold(0.0, f64::max))
}

/// Eigenvalues of a symmetric matrix in ascending order (cyclic Jacobi).
pub fn sym_eigenvalues(s: &SymMatrix) -> Result<Vec<f64>> {
    let n = s.dim();
    let mut a = s.as_matrix().data().to_vec();
    if a.iter().any(|v| !v.is_finite()) {
        return Err(JsrError::InvalidInput("matrix has non-finite entries".into()));
    }
    let fro: f64 = a.iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut sweep = 0;
    if n >= 2 && fro > 0.0 {
        loop {
            let off: f64 = (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| a[i * n + j] * a[i * n + j])
                .sum::<f64>()
                .sqrt();
            if off <= 1e-15 * fro {
                break;
            }
            sweep += 1;
            if sweep > 100 {
                return Err(JsrError::NumericalFailure(
                    "Jacobi sweeps did not converge".into(),
                ));
            }
            for p in 0..n - 1 {
                for q in p + 1..n {
                    let apq = a[p * n + q];
                    if apq == 0.0 {
                        continue;
                    }
                    let app = a[p * n + p];
                    let aqq = a[q * n + q];
                    let theta = (aqq - app) / (2.0 * apq);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let sn = t * c;
                    for k in 0..n {
                        let akp = a[k * n + p];
                        let akq = a[k * n + q];
                        a[k * n + p] = c * akp - sn * akq;
                        a[k * n + q] = sn * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[p * n + k];
                        let aqk = a[q * n + k];
                        a[p * n + k] = c * apk - sn * aqk;
                        a[q * n + k] = sn * apk + c * aqk;
                    }
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

pub fn min_eig_sym(s: &SymMatrix) -> Result<f64> {
    Ok(sym_eigenvalues(s)?.first().copied().unwrap_or(f64::INFINITY))
}

pub fn max_eig_sym(s: &SymMatrix) -> Result<f64> {
    Ok(sym_eigenvalues(s)?.last().copied().unwrap_or(f64::NEG_INFINITY))
}

/// Largest singular value, `sqrt(λmax(MᵀM))`.
pub fn operator_norm(m: &Matrix) -> Result<f64> {
    if m.data().iter().any(|v| !v.is_finite()) {
        return Err(JsrError::InvalidInput("matrix has non-finite entries".into()));
    }
    let gram = SymMatrix::symmetrize(&m.transpose().matmul(m));
    Ok(max_eig_sym(&gram)?.max(0.0).sqrt())
}
