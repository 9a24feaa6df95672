//! Named path-complete graphs.
//!
//! Two-node graphs use nodes `"1"` and `"2"`. A `b` suffix swaps the two
//! letters in every label and a `d` suffix takes the dual graph. De Bruijn
//! nodes are the length-`k` words themselves, written as digit strings (or
//! dot-separated when `m > 9`).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{JsrError, Result};
use crate::graph::{LabeledGraph, Word};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum FamilySpec {
    /// H1: one node, one self-loop per letter.
    Common,
    /// H2(t): one node, a self-loop for every word of length t.
    CommonPower(usize),
    H3,
    H3Bar,
    H3Dual,
    H3BarDual,
    H4,
    G1,
    G1Dual,
    G2,
    G2Bar,
    G2Dual,
    G2BarDual,
    G3,
    G3Bar,
    G4,
    DeBruijn(usize),
    DeBruijnDual(usize),
    /// One node with a self-loop per listed word; not checked for completeness.
    OneNodeWords(Vec<Word>),
}

impl FamilySpec {
    pub fn is_two_letter_only(&self) -> bool {
        !matches!(
            self,
            FamilySpec::Common
                | FamilySpec::CommonPower(_)
                | FamilySpec::G1
                | FamilySpec::G1Dual
                | FamilySpec::DeBruijn(_)
                | FamilySpec::DeBruijnDual(_)
                | FamilySpec::OneNodeWords(_)
        )
    }

    /// Recognizes single-node graphs as word families; anything else is
    /// unclassified.
    pub fn classify(g: &LabeledGraph) -> Option<FamilySpec> {
        if g.node_count() != 1 {
            return None;
        }
        let words = g.edges().iter().map(|e| e.label.clone()).collect();
        Some(FamilySpec::OneNodeWords(words))
    }

    pub fn build(&self, m: usize) -> Result<LabeledGraph> {
        if m == 0 {
            return Err(JsrError::UnsupportedCombination("alphabet size 0".into()));
        }
        if self.is_two_letter_only() && m != 2 {
            return Err(JsrError::UnsupportedCombination(format!(
                "{self} is defined only for two matrices, got m={m}"
            )));
        }
        use FamilySpec::*;
        match self {
            Common => one_node(m, &Word::all_of_length(m, 1)),
            CommonPower(t) => {
                if *t == 0 {
                    return Err(JsrError::UnsupportedCombination("h2 needs t >= 1".into()));
                }
                one_node(m, &Word::all_of_length(m, *t))
            }
            H3 => one_node(m, &words(&[&[1], &[1, 2], &[2, 2]])),
            H3Bar => H3.build(m)?.swap_labels(&[2, 1]),
            H3Dual => Ok(H3.build(m)?.dual()),
            H3BarDual => Ok(H3Bar.build(m)?.dual()),
            H4 => one_node(m, &words(&[&[1], &[1, 2], &[1, 2, 2], &[2, 2, 2]])),
            G1 => {
                let nodes: Vec<String> = (1..=m).map(|i| i.to_string()).collect();
                let mut edges = Vec::new();
                for i in 1..=m {
                    for j in 1..=m {
                        edges.push((i.to_string(), j.to_string(), vec![i]));
                    }
                }
                LabeledGraph::new(m, &nodes, &edges)
            }
            G1Dual => Ok(G1.build(m)?.dual()),
            G2 => two_node(&[("1", "1", 1), ("1", "2", 1), ("1", "2", 2), ("2", "1", 2)]),
            G2Bar => G2.build(m)?.swap_labels(&[2, 1]),
            G2Dual => Ok(G2.build(m)?.dual()),
            G2BarDual => Ok(G2Bar.build(m)?.dual()),
            G3 => two_node(&[("1", "1", 1), ("2", "2", 1), ("1", "2", 2), ("2", "1", 2)]),
            G3Bar => G3.build(m)?.swap_labels(&[2, 1]),
            G4 => two_node(&[("1", "2", 1), ("1", "2", 2), ("2", "1", 1), ("2", "1", 2)]),
            DeBruijn(k) => de_bruijn(m, *k),
            DeBruijnDual(k) => Ok(de_bruijn(m, *k)?.dual()),
            OneNodeWords(ws) => one_node(m, ws),
        }
    }
}

fn words(ls: &[&[usize]]) -> Vec<Word> {
    ls.iter().map(|l| Word::new(l.to_vec())).collect()
}

fn one_node(m: usize, ws: &[Word]) -> Result<LabeledGraph> {
    let edges: Vec<(String, String, Vec<usize>)> = ws
        .iter()
        .map(|w| ("1".to_string(), "1".to_string(), w.letters().to_vec()))
        .collect();
    LabeledGraph::new(m, &["1".to_string()], &edges)
}

fn two_node(edges: &[(&str, &str, usize)]) -> Result<LabeledGraph> {
    let edges: Vec<(&str, &str, Vec<usize>)> =
        edges.iter().map(|&(f, t, l)| (f, t, vec![l])).collect();
    LabeledGraph::new(2, &["1", "2"], &edges)
}

/// Node id of a De Bruijn word.
pub fn de_bruijn_id(m: usize, w: &[usize]) -> String {
    let parts: Vec<String> = w.iter().map(usize::to_string).collect();
    parts.join(if m > 9 { "." } else { "" })
}

/// Order-`k` De Bruijn graph: an edge labeled `j` from `i₁…i_k` to `i₂…i_k j`.
fn de_bruijn(m: usize, k: usize) -> Result<LabeledGraph> {
    if k == 0 {
        return Err(JsrError::UnsupportedCombination(
            "De Bruijn graphs need order k >= 1".into(),
        ));
    }
    let count = m.checked_pow(k as u32).filter(|&c| c <= 1 << 16).ok_or_else(|| {
        JsrError::BudgetExceeded(format!("De Bruijn graph with {m}^{k} nodes"))
    })?;
    let ws = Word::all_of_length(m, k);
    debug_assert_eq!(ws.len(), count);
    let nodes: Vec<String> = ws.iter().map(|w| de_bruijn_id(m, w.letters())).collect();
    let mut edges = Vec::with_capacity(count * m);
    for w in &ws {
        for j in 1..=m {
            let mut next = w.letters()[1..].to_vec();
            next.push(j);
            edges.push((
                de_bruijn_id(m, w.letters()),
                de_bruijn_id(m, &next),
                vec![j],
            ));
        }
    }
    LabeledGraph::new(m, &nodes, &edges)
}

/// The nine two-node, four-edge topologies for two matrices.
pub fn catalog_two_node() -> Vec<(String, LabeledGraph)> {
    use FamilySpec::*;
    [G1, G1Dual, G2, G2Bar, G2Dual, G2BarDual, G3, G3Bar, G4]
        .into_iter()
        .map(|f| {
            let g = f.build(2).expect("catalog graphs are well formed");
            (f.to_string(), g)
        })
        .collect()
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use FamilySpec::*;
        match self {
            Common => write!(f, "h1"),
            CommonPower(t) => write!(f, "h2:t={t}"),
            H3 => write!(f, "h3"),
            H3Bar => write!(f, "h3b"),
            H3Dual => write!(f, "h3d"),
            H3BarDual => write!(f, "h3bd"),
            H4 => write!(f, "h4"),
            G1 => write!(f, "g1"),
            G1Dual => write!(f, "g1d"),
            G2 => write!(f, "g2"),
            G2Bar => write!(f, "g2b"),
            G2Dual => write!(f, "g2d"),
            G2BarDual => write!(f, "g2bd"),
            G3 => write!(f, "g3"),
            G3Bar => write!(f, "g3b"),
            G4 => write!(f, "g4"),
            DeBruijn(k) => write!(f, "debruijn:k={k}"),
            DeBruijnDual(k) => write!(f, "debruijnd:k={k}"),
            OneNodeWords(ws) => {
                let parts: Vec<String> = ws.iter().map(Word::to_string).collect();
                write!(f, "words:{}", parts.join(""))
            }
        }
    }
}

fn parse_param(rest: &str, key: &str) -> Result<usize> {
    let value = rest
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| JsrError::Parse(format!("expected {key}=<int>, got {rest:?}")))?;
    value
        .parse()
        .map_err(|_| JsrError::Parse(format!("{key} must be a non-negative integer, got {value:?}")))
}

impl FromStr for FamilySpec {
    type Err = JsrError;

    /// Parses `h1 | h2:t=N | h3 | h3b | h3d | h3bd | h4 | g1 | g1d | g2 | g2b |
    /// g2d | g2bd | g3 | g3b | g4 | debruijn:k=N | debruijnd:k=N`.
    fn from_str(s: &str) -> Result<Self> {
        use FamilySpec::*;
        let s = s.trim();
        let (head, rest) = match s.split_once(':') {
            Some((h, r)) => (h, Some(r)),
            None => (s, None),
        };
        let plain = |f: FamilySpec| match rest {
            None => Ok(f),
            Some(_) => Err(JsrError::Parse(format!("{head} takes no parameters"))),
        };
        let need = |key: &str| {
            rest.ok_or_else(|| JsrError::Parse(format!("{head} needs :{key}=<int>")))
                .and_then(|r| parse_param(r, key))
        };
        match head {
            "h1" => plain(Common),
            "h2" => Ok(CommonPower(need("t")?)),
            "h3" => plain(H3),
            "h3b" => plain(H3Bar),
            "h3d" => plain(H3Dual),
            "h3bd" => plain(H3BarDual),
            "h4" => plain(H4),
            "g1" => plain(G1),
            "g1d" => plain(G1Dual),
            "g2" => plain(G2),
            "g2b" => plain(G2Bar),
            "g2d" => plain(G2Dual),
            "g2bd" => plain(G2BarDual),
            "g3" => plain(G3),
            "g3b" => plain(G3Bar),
            "g4" => plain(G4),
            "debruijn" => Ok(DeBruijn(need("k")?)),
            "debruijnd" => Ok(DeBruijnDual(need("k")?)),
            _ => Err(JsrError::Parse(format!("unknown graph family {s:?}"))),
        }
    }
}
