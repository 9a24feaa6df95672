use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    affordable_len, expected_relation, lower_bound, upper_bound, BoundOptions,
    LowerBoundReport, NamedGraph, Relation,
};
use crate::error::Result;
use crate::linalg::MatrixAlphabet;
use crate::lmi::LyapunovTemplate;

/// Relative slack allowed when checking expected relations.
pub const RELATION_TOL: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub name: String,
    pub rho_hat: Option<f64>,
    pub guarantee_factor: Option<f64>,
    pub probes: usize,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairCheck {
    pub first: String,
    pub second: String,
    pub relation: Relation,
    /// `None` when either bound is missing.
    pub holds: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub template: LyapunovTemplate,
    pub lower_bound: Option<LowerBoundReport>,
    pub rows: Vec<ComparisonRow>,
    pub pairs: Vec<PairCheck>,
    pub violations: usize,
}

impl ComparisonTable {
    pub fn row(&self, name: &str) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| r.name == name)
    }

    pub fn render_text(&self) -> String {
        let width = self.rows.iter().map(|r| r.name.len()).max().unwrap_or(5).max(5);
        let mut out = format!("template: {}\n", self.template);
        if let Some(lb) = &self.lower_bound {
            out += &format!("lower bound: {:.6} (word {})\n", lb.value, lb.witness_word);
        }
        out += &format!("{:<width$}  {:>12}  {:>10}\n", "graph", "rho_hat", "guarantee");
        for r in &self.rows {
            let rho = r.rho_hat.map_or("-".into(), |v| format!("{v:.6}"));
            let gf = r.guarantee_factor.map_or("-".into(), |v| format!("{v:.4}"));
            out += &format!("{:<width$}  {rho:>12}  {gf:>10}", r.name);
            if let Some(e) = &r.error {
                out += &format!("  error: {e}");
            }
            out.push('\n');
        }
        if !self.pairs.is_empty() {
            out += "expected relations:\n";
        }
        for p in &self.pairs {
            let op = match p.relation {
                Relation::Equal => "=",
                Relation::FirstAtMost => "<=",
                Relation::SecondAtMost => ">=",
                Relation::Unrelated => "?",
            };
            let verdict = match p.holds {
                Some(true) => "ok",
                Some(false) => "VIOLATION",
                None => "not checked",
            };
            out += &format!("  {} {op} {}  {verdict}\n", p.first, p.second);
        }
        out += &format!("violations: {}\n", self.violations);
        out
    }
}

/// Bounds for several graphs on one alphabet, with the known relations
/// between them checked.
pub fn compare(
    graphs: &[NamedGraph],
    a: &MatrixAlphabet,
    tpl: LyapunovTemplate,
    opts: &BoundOptions,
) -> Result<ComparisonTable> {
    let rows: Vec<ComparisonRow> = graphs
        .par_iter()
        .map(|g| match upper_bound(g, a, tpl, opts) {
            Ok(r) => ComparisonRow {
                name: g.name.clone(),
                rho_hat: Some(r.rho_hat),
                guarantee_factor: r.guarantee_factor,
                probes: r.bisection_trace.len(),
                error: None,
            },
            Err(e) => ComparisonRow {
                name: g.name.clone(),
                rho_hat: None,
                guarantee_factor: None,
                probes: 0,
                error: Some(e.to_string()),
            },
        })
        .collect();

    let mut pairs = Vec::new();
    for i in 0..graphs.len() {
        for j in i + 1..graphs.len() {
            let relation =
                expected_relation(graphs[i].family.as_ref(), graphs[j].family.as_ref(), &tpl);
            if relation == Relation::Unrelated {
                continue;
            }
            let holds = match (rows[i].rho_hat, rows[j].rho_hat) {
                (Some(x), Some(y)) => Some(relation.holds(x, y, RELATION_TOL)),
                _ => None,
            };
            pairs.push(PairCheck {
                first: graphs[i].name.clone(),
                second: graphs[j].name.clone(),
                relation,
                holds,
            });
        }
    }
    let violations = pairs.iter().filter(|p| p.holds == Some(false)).count();

    let lower = lower_bound(a, affordable_len(a.m(), opts.lower_len)).ok();

    Ok(ComparisonTable {
        template: tpl,
        lower_bound: lower,
        rows,
        pairs,
        violations,
    })
}
