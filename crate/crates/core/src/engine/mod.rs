//! Bounds on the joint spectral radius.
//!
//! Upper bounds bisect on `γ`: a graph Lyapunov function for the alphabet
//! scaled by `γ` on a path-complete graph certifies `ρ ≤ 1/γ`. Every
//! feasible probe is re-verified from scratch before it may move the
//! bracket, so a reported bound always comes with a checked certificate.

mod compare;
mod relations;

pub use compare::{compare, ComparisonRow, ComparisonTable, PairCheck};
pub use relations::{expected_relation, Relation};

use log::{debug, warn};
use serde::{Deserialize, Serialize};

use crate::error::{JsrError, Result};
use crate::families::FamilySpec;
use crate::graph::{is_path_complete, LabeledGraph, Word};
use crate::linalg::{binomial, operator_norm, spectral_radius, Matrix, MatrixAlphabet};
use crate::lmi::{build_lmi, verify_certificate, Certificate, LyapunovTemplate, TemplateKind};
use crate::sdp::{solve, SolveOptions, SolveStatus};

pub const DEFAULT_ENUMERATION_BUDGET: usize = 1 << 14;
const MAX_HALVINGS: usize = 60;

/// Product enumeration cap, overridable through `JSR_BUDGET`.
pub fn default_enumeration_budget() -> usize {
    std::env::var("JSR_BUDGET")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&b: &usize| b > 0)
        .unwrap_or(DEFAULT_ENUMERATION_BUDGET)
}

/// A graph together with the display name and family it came from.
#[derive(Debug, Clone)]
pub struct NamedGraph {
    pub name: String,
    pub graph: LabeledGraph,
    pub family: Option<FamilySpec>,
}

impl NamedGraph {
    pub fn family(spec: FamilySpec, m: usize) -> Result<Self> {
        Ok(Self {
            name: spec.to_string(),
            graph: spec.build(m)?,
            family: Some(spec),
        })
    }

    pub fn custom(name: impl Into<String>, graph: LabeledGraph) -> Self {
        let family = FamilySpec::classify(&graph);
        Self {
            name: name.into(),
            graph,
            family,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundOptions {
    /// Relative width `(γ_hi − γ_lo)/γ_lo` at which bisection stops.
    pub tol: f64,
    pub solve: SolveOptions,
    /// Word length used for the lower bound that caps the bracket.
    pub lower_len: usize,
}

impl Default for BoundOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            solve: SolveOptions::default(),
            lower_len: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub gamma: f64,
    pub status: SolveStatus,
    pub slack: f64,
    /// Independently re-verified margin, for feasible probes.
    pub margin: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub rho_hat: f64,
    pub gamma_star: f64,
    pub graph_name: String,
    pub template: LyapunovTemplate,
    pub certificate: Certificate,
    pub bisection_trace: Vec<TraceEntry>,
    pub guarantee_factor: Option<f64>,
    pub lower_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundReport {
    pub value: f64,
    pub witness_word: Word,
    pub method: String,
}

fn check_budget(m: usize, max_len: usize, exact_only: bool) -> Result<()> {
    let budget = default_enumeration_budget();
    let mut total: usize = 0;
    let mut layer: usize = 1;
    for k in 1..=max_len {
        layer = layer
            .checked_mul(m)
            .ok_or_else(|| JsrError::BudgetExceeded(format!("{m}^{k} products")))?;
        if !exact_only || k == max_len {
            total = total.saturating_add(layer);
        }
    }
    if total > budget {
        return Err(JsrError::BudgetExceeded(format!(
            "{total} products exceed the enumeration budget of {budget}"
        )));
    }
    Ok(())
}

/// Longest word length up to `max_len` whose enumeration fits the budget.
pub(crate) fn affordable_len(m: usize, max_len: usize) -> usize {
    (1..=max_len.max(1))
        .rev()
        .find(|&k| check_budget(m, k, false).is_ok())
        .unwrap_or(1)
}

/// Products of every word of each length up to `max_len`, by length and
/// then lexicographically, calling `visit(word, product)`.
fn for_each_product(
    a: &MatrixAlphabet,
    max_len: usize,
    mut visit: impl FnMut(&[usize], &Matrix) -> Result<()>,
) -> Result<()> {
    let mut layer: Vec<(Vec<usize>, Matrix)> = vec![(Vec::new(), Matrix::identity(a.n()))];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * a.m());
        for (w, p) in &layer {
            for (i, ai) in a.matrices().iter().enumerate() {
                let mut wl = w.clone();
                wl.push(i + 1);
                let prod = ai.matmul(p);
                visit(&wl, &prod)?;
                next.push((wl, prod));
            }
        }
        layer = next;
    }
    Ok(())
}

/// `max ρ(A_w)^{1/|w|}` over nonempty words of length at most `max_len`.
/// Ties keep the shortest, then lexicographically smallest, word.
pub fn lower_bound(a: &MatrixAlphabet, max_len: usize) -> Result<LowerBoundReport> {
    if max_len == 0 {
        return Err(JsrError::InvalidInput("max_len must be at least 1".into()));
    }
    check_budget(a.m(), max_len, false)?;
    let mut best = (-1.0_f64, Vec::new());
    for_each_product(a, max_len, |w, p| {
        let v = spectral_radius(p)?.powf(1.0 / w.len() as f64);
        if v > best.0 * (1.0 + 1e-9) || best.1.is_empty() {
            best = (v, w.to_vec());
        }
        Ok(())
    })?;
    Ok(LowerBoundReport {
        value: best.0,
        witness_word: Word::new(best.1),
        method: "spectral_radius_of_product".into(),
    })
}

/// `max ‖A_w‖^{1/len}` over words of length exactly `len`.
pub fn norm_upper_bound(a: &MatrixAlphabet, len: usize) -> Result<f64> {
    if len == 0 {
        return Err(JsrError::InvalidInput("len must be at least 1".into()));
    }
    check_budget(a.m(), len, true)?;
    let mut best = 0.0_f64;
    for_each_product(a, len, |w, p| {
        if w.len() == len {
            best = best.max(operator_norm(p)?.powf(1.0 / len as f64));
        }
        Ok(())
    })?;
    Ok(best)
}

pub fn transpose_alphabet(a: &MatrixAlphabet) -> MatrixAlphabet {
    a.transposed()
}

/// Proven worst-case ratio `c` with `ρ̂/c ≤ ρ ≤ ρ̂` for a method.
pub fn guarantee_factor(
    tpl: &LyapunovTemplate,
    family: &FamilySpec,
    n: usize,
    m: usize,
) -> Result<f64> {
    let nf = n as f64;
    let unknown = || {
        Err(JsrError::UnknownGuarantee(format!(
            "{family} with the {tpl} template"
        )))
    };
    let root = |l: usize| nf.powf(1.0 / (2.0 * l as f64));
    match tpl.kind {
        TemplateKind::SosHomogeneous => match family {
            FamilySpec::Common => {
                let d = tpl.d();
                let eta = m.min(binomial(n + d - 1, d)) as f64;
                Ok(eta.powf(1.0 / tpl.degree as f64))
            }
            _ => unknown(),
        },
        TemplateKind::Quadratic => match family {
            FamilySpec::Common => Ok(nf.sqrt()),
            FamilySpec::CommonPower(t) => Ok(root(*t)),
            FamilySpec::G1 | FamilySpec::G1Dual => Ok(nf.powf(0.25)),
            FamilySpec::DeBruijn(k) | FamilySpec::DeBruijnDual(k) => Ok(root(k + 1)),
            FamilySpec::H3
            | FamilySpec::H3Bar
            | FamilySpec::H3Dual
            | FamilySpec::H3BarDual
            | FamilySpec::H4 => Ok(root(1)),
            FamilySpec::OneNodeWords(ws) => match ws.iter().map(Word::len).min() {
                Some(l) if l > 0 => Ok(root(l)),
                _ => unknown(),
            },
            _ => unknown(),
        },
    }
}

struct Probe {
    feasible: bool,
    cert: Option<Certificate>,
}

fn probe(
    g: &LabeledGraph,
    a: &MatrixAlphabet,
    tpl: LyapunovTemplate,
    gamma: f64,
    opts: &BoundOptions,
    trace: &mut Vec<TraceEntry>,
) -> Result<Probe> {
    let sys = build_lmi(g, a, gamma, tpl)?;
    let res = solve(&sys, &opts.solve)?;
    let mut entry = TraceEntry {
        gamma,
        status: res.status,
        slack: res.slack,
        margin: None,
    };
    let mut out = Probe {
        feasible: false,
        cert: None,
    };
    if let (SolveStatus::Feasible, Some(cert)) = (res.status, res.certificate) {
        let margin = verify_certificate(g, a, &cert)?;
        entry.margin = Some(margin);
        if margin >= opts.solve.slack_tol / 2.0 {
            out = Probe {
                feasible: true,
                cert: Some(cert),
            };
        } else {
            warn!("solver certificate at gamma={gamma} failed re-verification ({margin:e})");
            entry.status = SolveStatus::Inconclusive;
        }
    }
    debug!(
        "probe gamma={gamma:.9} status={:?} slack={:.3e} iters={}",
        entry.status, entry.slack, res.newton_iters
    );
    trace.push(entry);
    Ok(out)
}

/// Certified upper bound `1/γ*` from graph Lyapunov functions on `g`.
pub fn upper_bound(
    g: &NamedGraph,
    a: &MatrixAlphabet,
    tpl: LyapunovTemplate,
    opts: &BoundOptions,
) -> Result<BoundReport> {
    if g.graph.m() != a.m() {
        return Err(JsrError::DimensionMismatch(format!(
            "graph {} is over {} letters, alphabet has {} matrices",
            g.name,
            g.graph.m(),
            a.m()
        )));
    }
    let pc = is_path_complete(&g.graph)?;
    if !pc.is_complete {
        return Err(JsrError::GraphNotPathComplete {
            witness: pc.witness.map(|w| w.to_string()).unwrap_or_default(),
        });
    }
    let mut trace = Vec::new();

    let nb = norm_upper_bound(a, 1)?;
    let mut lo = if nb > 0.0 { 1.0 / nb } else { 1.0 };
    let mut halvings = 0;
    let mut best = loop {
        let p = probe(&g.graph, a, tpl, lo, opts, &mut trace)?;
        if p.feasible {
            break p.cert.expect("feasible probes carry certificates");
        }
        if halvings == MAX_HALVINGS {
            return Err(JsrError::BracketFailure {
                halvings: MAX_HALVINGS,
            });
        }
        lo /= 2.0;
        halvings += 1;
    };

    let lb = lower_bound(a, affordable_len(a.m(), opts.lower_len))?;
    let mut hi = if lb.value > 0.0 {
        1.0 / lb.value
    } else {
        // Nothing caps γ from above: grow until infeasible.
        let mut h = lo;
        for _ in 0..MAX_HALVINGS {
            h *= 2.0;
            let p = probe(&g.graph, a, tpl, h, opts, &mut trace)?;
            if !p.feasible {
                break;
            }
            lo = h;
            best = p.cert.expect("feasible probes carry certificates");
        }
        h
    };
    if hi <= lo {
        hi = lo * (1.0 + opts.tol);
    }

    while (hi - lo) / lo > opts.tol {
        let mid = 0.5 * (lo + hi);
        let p = probe(&g.graph, a, tpl, mid, opts, &mut trace)?;
        if p.feasible {
            lo = mid;
            best = p.cert.expect("feasible probes carry certificates");
        } else {
            hi = mid;
        }
    }

    let rho_hat = 1.0 / lo;
    if rho_hat < lb.value * (1.0 - 1e-9) {
        warn!(
            "upper bound {rho_hat} for {} is below the lower bound {}",
            g.name, lb.value
        );
    }
    let guarantee = g
        .family
        .as_ref()
        .and_then(|f| guarantee_factor(&tpl, f, a.n(), a.m()).ok());
    Ok(BoundReport {
        rho_hat,
        gamma_star: lo,
        graph_name: g.name.clone(),
        template: tpl,
        certificate: best,
        bisection_trace: trace,
        guarantee_factor: guarantee,
        lower_bound: lb.value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex52() -> MatrixAlphabet {
        MatrixAlphabet::new(vec![
            Matrix::from_rows(&[vec![1.0, 0.0], vec![1.0, 0.0]]).unwrap(),
            Matrix::from_rows(&[vec![0.0, 1.0], vec![0.0, -1.0]]).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn scalar_alphabet_bounds() {
        let a = MatrixAlphabet::new(vec![Matrix::identity(2).scale(0.5)]).unwrap();
        let lb = lower_bound(&a, 3).unwrap();
        assert!((lb.value - 0.5).abs() < 1e-12);
        assert_eq!(lb.witness_word, Word::new(vec![1]));
        assert!((norm_upper_bound(&a, 1).unwrap() - 0.5).abs() < 1e-12);
        let g = NamedGraph::family(FamilySpec::Common, 1).unwrap();
        let r = upper_bound(&g, &a, LyapunovTemplate::quadratic(), &BoundOptions::default())
            .unwrap();
        assert!((r.rho_hat - 0.5).abs() < 1e-5, "{}", r.rho_hat);
        assert!(verify_certificate(&g.graph, &a, &r.certificate).unwrap() > 0.0);
    }

    #[test]
    fn ex52_norms() {
        let a = ex52();
        assert!((norm_upper_bound(&a, 1).unwrap() - 2f64.sqrt()).abs() < 1e-12);
        assert!(norm_upper_bound(&a, 4).unwrap() <= norm_upper_bound(&a, 1).unwrap());
        let lb = lower_bound(&a, 1).unwrap();
        assert!((lb.value - 1.0).abs() < 1e-9);
        assert_eq!(lb.witness_word, Word::new(vec![1]));
    }

    #[test]
    fn incomplete_graph_rejected() {
        let g = LabeledGraph::new(2, &["1"], &[("1", "1", vec![1])]).unwrap();
        let e = upper_bound(
            &NamedGraph::custom("a1 only", g),
            &ex52(),
            LyapunovTemplate::quadratic(),
            &BoundOptions::default(),
        )
        .unwrap_err();
        assert_eq!(
            e,
            JsrError::GraphNotPathComplete {
                witness: "(2)".into()
            }
        );
    }

    #[test]
    fn guarantee_values() {
        let q = LyapunovTemplate::quadratic();
        assert_eq!(guarantee_factor(&q, &FamilySpec::Common, 4, 2).unwrap(), 2.0);
        assert!((guarantee_factor(&q, &FamilySpec::G1, 16, 2).unwrap() - 2.0).abs() < 1e-15);
        let s = LyapunovTemplate::sos(4).unwrap();
        let f = guarantee_factor(&s, &FamilySpec::Common, 3, 4).unwrap();
        assert!((f - 2f64.sqrt()).abs() < 1e-15);
        let f = guarantee_factor(&q, &FamilySpec::DeBruijnDual(2), 8, 2).unwrap();
        assert!((f - 8f64.powf(1.0 / 6.0)).abs() < 1e-15);
        let f = guarantee_factor(&q, &FamilySpec::CommonPower(2), 16, 2).unwrap();
        assert!((f - 2.0).abs() < 1e-15);
        assert!(matches!(
            guarantee_factor(&q, &FamilySpec::G2, 3, 2),
            Err(JsrError::UnknownGuarantee(_))
        ));
        assert!(guarantee_factor(&s, &FamilySpec::G1, 3, 2).is_err());
    }

    #[test]
    fn enumeration_budget() {
        let a = MatrixAlphabet::new(vec![Matrix::identity(1); 4]).unwrap();
        assert!(matches!(lower_bound(&a, 12), Err(JsrError::BudgetExceeded(_))));
    }
}
