//! LMI systems for graph Lyapunov functions.
//!
//! An edge `(i, j, w)` asks that node `j`'s function composed with the
//! product of `w` stays below node `i`'s function. With quadratic functions
//! `xᵀP x` this is `P_i − MᵀP_jM ⪰ 0`; with SOS forms `m_d(x)ᵀQ m_d(x)` it
//! is the polynomial identity `Q_i − LᵀQ_jL ≡ S_e` with a Gram slack
//! `S_e ⪰ 0`, where `L` is the monomial lift of `M`. Every node block is
//! normalized by `P_i ⪰ I` since the system is otherwise homogeneous.
//! `γ` is folded into every letter before products are formed.

mod constructive;
mod gram;

pub use constructive::{nested_certificate, two_step_certificate};
pub use gram::GramMap;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{JsrError, Result};
use crate::graph::LabeledGraph;
use crate::linalg::{
    binomial, min_eig_sym, monomial_lift, word_product, Matrix, MatrixAlphabet, MonomialBasis,
    SymMatrix,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TemplateKind {
    Quadratic,
    SosHomogeneous,
}

/// Lyapunov function class; `degree` is the polynomial degree `2d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LyapunovTemplate {
    pub kind: TemplateKind,
    pub degree: usize,
}

impl LyapunovTemplate {
    pub fn quadratic() -> Self {
        Self {
            kind: TemplateKind::Quadratic,
            degree: 2,
        }
    }

    pub fn sos(degree: usize) -> Result<Self> {
        if degree < 2 || !degree.is_multiple_of(2) {
            return Err(JsrError::InvalidInput(format!(
                "SOS degree must be even and at least 2, got {degree}"
            )));
        }
        Ok(Self {
            kind: TemplateKind::SosHomogeneous,
            degree,
        })
    }

    /// Half degree `d`.
    pub fn d(&self) -> usize {
        self.degree / 2
    }

    /// Node block dimension for state dimension `n`.
    pub fn block_dim(&self, n: usize) -> usize {
        match self.kind {
            TemplateKind::Quadratic => n,
            TemplateKind::SosHomogeneous => binomial(n + self.d() - 1, self.d()),
        }
    }
}

impl fmt::Display for LyapunovTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            TemplateKind::Quadratic => write!(f, "quadratic"),
            TemplateKind::SosHomogeneous => write!(f, "sos:{}", self.degree),
        }
    }
}

impl FromStr for LyapunovTemplate {
    type Err = JsrError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "quadratic" {
            return Ok(Self::quadratic());
        }
        let deg = s
            .strip_prefix("sos:")
            .ok_or_else(|| JsrError::Parse(format!("template must be quadratic or sos:<2d>, got {s:?}")))?;
        let deg: usize = deg
            .parse()
            .map_err(|_| JsrError::Parse(format!("SOS degree must be an integer, got {deg:?}")))?;
        Self::sos(deg).map_err(|e| JsrError::Parse(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub name: String,
    pub dim: usize,
}

/// `coeff · multᵀ X_block mult`, or `coeff · X_block` when `mult` is absent.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub block: usize,
    pub mult: Option<Matrix>,
    pub coeff: f64,
}

impl Term {
    fn out_dim(&self, blocks: &[Block]) -> usize {
        self.mult.as_ref().map_or(blocks[self.block].dim, Matrix::cols)
    }

    fn eval(&self, x: &Matrix) -> Matrix {
        match &self.mult {
            None => x.scale(self.coeff),
            Some(l) => l.congruence(x).scale(self.coeff),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Constraint {
    /// `Σ terms + constant ⪰ 0`.
    Psd {
        label: String,
        dim: usize,
        terms: Vec<Term>,
        constant: Option<Matrix>,
    },
    /// The polynomial with Gram matrix `Σ terms` equals the one with Gram
    /// matrix `X_slack`, coefficient by coefficient.
    SosIdentity {
        label: String,
        terms: Vec<Term>,
        slack: usize,
    },
}

impl Constraint {
    pub fn label(&self) -> &str {
        match self {
            Constraint::Psd { label, .. } | Constraint::SosIdentity { label, .. } => label,
        }
    }

    pub fn terms(&self) -> &[Term] {
        match self {
            Constraint::Psd { terms, .. } | Constraint::SosIdentity { terms, .. } => terms,
        }
    }
}

fn sum_terms(terms: &[Term], dim: usize, blocks: &[Matrix]) -> Matrix {
    terms
        .iter()
        .fold(Matrix::zeros(dim, dim), |acc, t| &acc + &t.eval(&blocks[t.block]))
}

#[derive(Debug, Clone)]
pub struct LmiSystem {
    pub gamma: f64,
    pub template: LyapunovTemplate,
    pub n: usize,
    pub blocks: Vec<Block>,
    /// The first `node_blocks` blocks belong to graph nodes, in graph order;
    /// the rest are per-edge Gram slacks.
    pub node_blocks: usize,
    pub node_ids: Vec<String>,
    pub constraints: Vec<Constraint>,
    pub gram: Option<GramMap>,
}

impl LmiSystem {
    pub fn block_index(&self, name: &str) -> Option<usize> {
        self.blocks.iter().position(|b| b.name == name)
    }

    /// Evaluates a constraint's affine expression, with constants scaled by
    /// `s` (the solver's homogenizing variable; `1` for plain evaluation).
    pub fn constraint_value(&self, c: &Constraint, blocks: &[Matrix], s: f64) -> Matrix {
        match c {
            Constraint::Psd {
                dim,
                terms,
                constant,
                ..
            } => {
                let v = sum_terms(terms, *dim, blocks);
                match constant {
                    Some(k) => &v + &k.scale(s),
                    None => v,
                }
            }
            Constraint::SosIdentity { terms, slack, .. } => {
                let dim = self.blocks[*slack].dim;
                &sum_terms(terms, dim, blocks) - &blocks[*slack]
            }
        }
    }

    /// Smallest eigenvalue slack over all constraints at the given blocks.
    ///
    /// An SOS identity is scored as `λmin(S_e + R_e)` where `R_e` is the
    /// canonical Gram matrix of the coefficient residual, so a floating
    /// residual can only count against the certificate through the Gram
    /// matrix it actually represents.
    pub fn evaluate(&self, blocks: &[SymMatrix]) -> Result<f64> {
        if blocks.len() != self.blocks.len() {
            return Err(JsrError::DimensionMismatch(format!(
                "{} blocks supplied, system has {}",
                blocks.len(),
                self.blocks.len()
            )));
        }
        for (b, x) in self.blocks.iter().zip(blocks) {
            if b.dim != x.dim() {
                return Err(JsrError::DimensionMismatch(format!(
                    "block {} has dimension {}, expected {}",
                    b.name,
                    x.dim(),
                    b.dim
                )));
            }
        }
        let mats: Vec<Matrix> = blocks.iter().map(|b| b.as_matrix().clone()).collect();
        let mut margin = f64::INFINITY;
        for c in &self.constraints {
            let value = self.constraint_value(c, &mats, 1.0);
            let m = match c {
                Constraint::Psd { .. } => min_eig_sym(&SymMatrix::symmetrize(&value))?,
                Constraint::SosIdentity { slack, .. } => {
                    let gram = self.gram.as_ref().expect("SOS systems carry a Gram map");
                    let residual = gram.canonical_gram(&gram.coefficients(&value));
                    let s = &mats[*slack] + &residual;
                    min_eig_sym(&SymMatrix::symmetrize(&s))?
                }
            };
            margin = margin.min(m);
        }
        Ok(margin)
    }

    /// JSON view for debugging: blocks with dimensions and each constraint
    /// as a list of `(block, left, right, coefficient)` terms.
    pub fn to_json(&self) -> serde_json::Value {
        let term = |t: &Term| {
            json!({
                "block": self.blocks[t.block].name,
                "left": t.mult.as_ref().map(Matrix::transpose),
                "right": t.mult,
                "coeff": t.coeff,
            })
        };
        let constraints: Vec<_> = self
            .constraints
            .iter()
            .map(|c| match c {
                Constraint::Psd {
                    label,
                    terms,
                    constant,
                    ..
                } => json!({
                    "kind": "psd",
                    "label": label,
                    "terms": terms.iter().map(term).collect::<Vec<_>>(),
                    "constant": constant,
                }),
                Constraint::SosIdentity {
                    label,
                    terms,
                    slack,
                } => json!({
                    "kind": "sos_identity",
                    "label": label,
                    "terms": terms.iter().map(term).collect::<Vec<_>>(),
                    "slack": self.blocks[*slack].name,
                }),
            })
            .collect();
        json!({
            "gamma": self.gamma,
            "template": self.template.to_string(),
            "blocks": self.blocks.iter().map(|b| json!({"name": b.name, "dim": b.dim})).collect::<Vec<_>>(),
            "constraints": constraints,
        })
    }
}

/// Builds the LMI system of `g` for the alphabet scaled by `gamma`.
pub fn build_lmi(
    g: &LabeledGraph,
    a: &MatrixAlphabet,
    gamma: f64,
    tpl: LyapunovTemplate,
) -> Result<LmiSystem> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(JsrError::GammaNonPositive(gamma));
    }
    if g.m() != a.m() {
        return Err(JsrError::DimensionMismatch(format!(
            "graph is over {} letters, alphabet has {} matrices",
            g.m(),
            a.m()
        )));
    }
    let n = a.n();
    let scaled = a.scaled(gamma);
    let dim = tpl.block_dim(n);
    let prefix = match tpl.kind {
        TemplateKind::Quadratic => "P",
        TemplateKind::SosHomogeneous => "Q",
    };
    let mut blocks: Vec<Block> = g
        .nodes()
        .iter()
        .map(|id| Block {
            name: format!("{prefix}[{id}]"),
            dim,
        })
        .collect();
    let node_blocks = blocks.len();
    let mut constraints = Vec::new();
    for (i, id) in g.nodes().iter().enumerate() {
        constraints.push(Constraint::Psd {
            label: format!("node {id}"),
            dim,
            terms: vec![Term {
                block: i,
                mult: None,
                coeff: 1.0,
            }],
            constant: Some(Matrix::identity(dim).scale(-1.0)),
        });
    }
    let basis = match tpl.kind {
        TemplateKind::Quadratic => None,
        TemplateKind::SosHomogeneous => Some(MonomialBasis::new(n, tpl.d())?),
    };
    for (k, e) in g.edges().iter().enumerate() {
        let m = word_product(&scaled, &e.label)?;
        let mult = match &basis {
            None => m,
            Some(b) => monomial_lift(&m, b)?,
        };
        let terms = vec![
            Term {
                block: e.from,
                mult: None,
                coeff: 1.0,
            },
            Term {
                block: e.to,
                mult: Some(mult),
                coeff: -1.0,
            },
        ];
        let label = format!(
            "edge {k} {}->{} {}",
            g.nodes()[e.from],
            g.nodes()[e.to],
            e.label
        );
        match tpl.kind {
            TemplateKind::Quadratic => constraints.push(Constraint::Psd {
                label,
                dim,
                terms,
                constant: None,
            }),
            TemplateKind::SosHomogeneous => {
                let slack = blocks.len();
                blocks.push(Block {
                    name: format!("S[e{k}]"),
                    dim,
                });
                constraints.push(Constraint::SosIdentity {
                    label: label.clone(),
                    terms,
                    slack,
                });
                constraints.push(Constraint::Psd {
                    label: format!("{label} slack"),
                    dim,
                    terms: vec![Term {
                        block: slack,
                        mult: None,
                        coeff: 1.0,
                    }],
                    constant: None,
                });
            }
        }
    }
    debug_assert!(constraints
        .iter()
        .all(|c| c.terms().iter().all(|t| t.block < blocks.len() && t.out_dim(&blocks) == dim)));
    Ok(LmiSystem {
        gamma,
        template: tpl,
        n,
        blocks,
        node_blocks,
        node_ids: g.nodes().to_vec(),
        constraints,
        gram: basis.as_ref().map(GramMap::new),
    })
}

/// A candidate graph Lyapunov function at a given `γ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub gamma: f64,
    pub template: LyapunovTemplate,
    /// Node id and its matrix (`P_i`, or the Gram matrix `Q_i` for SOS).
    pub nodes: Vec<(String, SymMatrix)>,
    /// Per-edge Gram slacks, SOS only, in edge order.
    pub slacks: Vec<SymMatrix>,
    pub margin: f64,
}

impl Certificate {
    pub fn blocks(&self) -> Vec<SymMatrix> {
        self.nodes
            .iter()
            .map(|(_, p)| p.clone())
            .chain(self.slacks.iter().cloned())
            .collect()
    }
}

/// Rebuilds the system at the certificate's `γ` and returns the smallest
/// eigenvalue slack. A positive value certifies `ρ(A) ≤ 1/γ` when `g` is
/// path-complete.
pub fn verify_certificate(g: &LabeledGraph, a: &MatrixAlphabet, cert: &Certificate) -> Result<f64> {
    let sys = build_lmi(g, a, cert.gamma, cert.template)?;
    if cert.nodes.len() != g.node_count() {
        return Err(JsrError::DimensionMismatch(format!(
            "certificate has {} node matrices, graph has {} nodes",
            cert.nodes.len(),
            g.node_count()
        )));
    }
    let mut blocks = Vec::with_capacity(sys.blocks.len());
    for id in g.nodes() {
        let p = cert
            .nodes
            .iter()
            .find(|(name, _)| name == id)
            .ok_or_else(|| JsrError::DimensionMismatch(format!("certificate lacks node {id}")))?;
        blocks.push(p.1.clone());
    }
    if cert.slacks.len() != sys.blocks.len() - sys.node_blocks {
        return Err(JsrError::DimensionMismatch(format!(
            "certificate has {} slack blocks, system needs {}",
            cert.slacks.len(),
            sys.blocks.len() - sys.node_blocks
        )));
    }
    blocks.extend(cert.slacks.iter().cloned());
    sys.evaluate(&blocks)
}
