//! Reproduction of the bundled regression examples.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::engine::{lower_bound, transpose_alphabet, upper_bound, BoundOptions, NamedGraph};
use crate::error::{JsrError, Result};
use crate::families::FamilySpec;
use crate::fixtures;
use crate::graph::Word;
use crate::linalg::MatrixAlphabet;
use crate::lmi::LyapunovTemplate;

pub const EXAMPLES: [&str; 3] = ["ex4.1", "ex5.2", "ex5.3"];

/// What a computed value is compared against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Target {
    Relative { value: f64, tol: f64 },
    Absolute { value: f64, tol: f64 },
    Range { lo: f64, hi: f64 },
    AtLeast { value: f64 },
    Word { word: Word },
}

impl Target {
    fn accepts(&self, x: f64) -> bool {
        match *self {
            Target::Relative { value, tol } => (x - value).abs() <= tol * value.abs(),
            Target::Absolute { value, tol } => (x - value).abs() <= tol,
            Target::Range { lo, hi } => lo <= x && x <= hi,
            Target::AtLeast { value } => x >= value,
            Target::Word { .. } => false,
        }
    }

    fn describe(&self) -> String {
        match self {
            Target::Relative { value, tol } => format!("{value} ± {}%", tol * 100.0),
            Target::Absolute { value, tol } => format!("{value} ± {tol:e}"),
            Target::Range { lo, hi } => format!("[{lo}, {hi}]"),
            Target::AtLeast { value } => format!(">= {value}"),
            Target::Word { word } => word.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReproRow {
    pub label: String,
    pub computed: String,
    pub value: Option<f64>,
    pub target: Target,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reproduction {
    pub name: String,
    pub rows: Vec<ReproRow>,
    pub elapsed_seconds: f64,
    pub passed: bool,
}

impl Reproduction {
    pub fn row(&self, label: &str) -> Option<&ReproRow> {
        self.rows.iter().find(|r| r.label == label)
    }

    pub fn render_text(&self) -> String {
        let lw = self.rows.iter().map(|r| r.label.len()).max().unwrap_or(0);
        let cw = self.rows.iter().map(|r| r.computed.len()).max().unwrap_or(0);
        let mut out = format!("{} ({:.1} s)\n", self.name, self.elapsed_seconds);
        for r in &self.rows {
            out += &format!(
                "  {:<lw$}  {:>cw$}  expected {:<20}  {}\n",
                r.label,
                r.computed,
                r.target.describe(),
                if r.pass { "PASS" } else { "FAIL" }
            );
        }
        out
    }
}

fn value_row(label: &str, x: f64, target: Target) -> ReproRow {
    ReproRow {
        label: label.into(),
        computed: format!("{x:.6}"),
        value: Some(x),
        pass: target.accepts(x),
        target,
    }
}

fn word_row(label: &str, got: &Word, want: Word) -> ReproRow {
    ReproRow {
        label: label.into(),
        computed: got.to_string(),
        value: None,
        pass: *got == want,
        target: Target::Word { word: want },
    }
}

fn bound(a: &MatrixAlphabet, f: FamilySpec, tpl: LyapunovTemplate, opts: &BoundOptions) -> Result<f64> {
    let g = NamedGraph::family(f, a.m())?;
    Ok(upper_bound(&g, a, tpl, opts)?.rho_hat)
}

fn rel(value: f64) -> Target {
    Target::Relative { value, tol: 5e-3 }
}

/// Runs the bound suite for a bundled example and checks it against the
/// reference values.
pub fn reproduce(name: &str, opts: &BoundOptions) -> Result<Reproduction> {
    let a = fixtures::by_name(name).ok_or_else(|| {
        JsrError::InvalidInput(format!(
            "unknown example {name:?}; expected one of {}",
            EXAMPLES.join(", ")
        ))
    })?;
    let start = Instant::now();
    let q = LyapunovTemplate::quadratic();
    let sos4 = LyapunovTemplate::sos(4)?;
    let mut rows = Vec::new();
    match name {
        "ex5.2" => {
            #[allow(clippy::approx_constant)]
            let h1_ref = 1.41421;
            let h1 = bound(&a, FamilySpec::Common, q, opts)?;
            rows.push(value_row("h1 quadratic", h1, Target::Absolute { value: h1_ref, tol: 1e-3 }));
            let g1 = bound(&a, FamilySpec::G1, q, opts)?;
            rows.push(value_row("g1 quadratic", g1, Target::Range { lo: 0.999, hi: 1.001 }));
            let lb = lower_bound(&a, 1)?;
            rows.push(value_row(
                "lower bound (length 1)",
                lb.value,
                Target::Absolute { value: 1.0, tol: 1e-9 },
            ));
        }
        "ex5.3" => {
            let h1 = bound(&a, FamilySpec::Common, q, opts)?;
            rows.push(value_row("h1 quadratic", h1, rel(12.5683)));
            let sq = bound(&a.power(2)?, FamilySpec::Common, q, opts)?.sqrt();
            rows.push(value_row("sqrt of h1 quadratic on products of length 2", sq, rel(11.9575)));
            let g1 = bound(&a, FamilySpec::G1, q, opts)?;
            rows.push(value_row("g1 quadratic", g1, rel(11.8097)));
            let s = bound(&a, FamilySpec::Common, sos4, opts)?;
            rows.push(value_row("h1 sos:4", s, rel(11.8015)));
            let lb = lower_bound(&a, 3)?;
            rows.push(value_row(
                "lower bound (length 3)",
                lb.value,
                Target::Absolute { value: 11.8015, tol: 1e-2 },
            ));
            rows.push(word_row("lower bound witness", &lb.witness_word, Word::new(vec![1, 2, 2])));
        }
        _ => {
            let fwd = bound(&a, FamilySpec::Common, sos4, opts)?;
            rows.push(value_row("h1 sos:4", fwd, rel(21.411)));
            let tr = bound(&transpose_alphabet(&a), FamilySpec::Common, sos4, opts)?;
            rows.push(value_row("h1 sos:4 on transposes", tr, rel(21.214)));
            rows.push(value_row(
                "difference under transposition",
                (fwd - tr).abs(),
                Target::AtLeast { value: 0.1 },
            ));
        }
    }
    let passed = rows.iter().all(|r| r.pass);
    Ok(Reproduction {
        name: name.into(),
        rows,
        elapsed_seconds: start.elapsed().as_secs_f64(),
        passed,
    })
}
