//! Labeled directed multigraphs over a matrix alphabet.
//!
//! An edge `(i, j, w)` reads "node `j`'s function, composed with the
//! product of `w`, is dominated by node `i`'s function". Graphs are
//! immutable once built; every constructor validates.

mod completeness;
mod word;

pub use completeness::{
    default_subset_budget, is_path_complete, is_path_complete_bruteforce,
    is_path_complete_with_budget, PathCompletenessResult, DEFAULT_SUBSET_BUDGET,
};
pub use word::Word;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{JsrError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub label: Word,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledGraph {
    m: usize,
    nodes: Vec<String>,
    edges: Vec<Edge>,
}

/// Wire format: `{"m", "nodes", "edges": [{"from", "to", "label"}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphFile {
    pub m: usize,
    pub nodes: Vec<String>,
    pub edges: Vec<EdgeFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeFile {
    pub from: String,
    pub to: String,
    pub label: Vec<usize>,
}

impl LabeledGraph {
    /// Builds a graph from node ids and `(from, to, label)` triples.
    pub fn new<S: AsRef<str>>(
        m: usize,
        nodes: &[S],
        edges: &[(S, S, Vec<usize>)],
    ) -> Result<Self> {
        let file = GraphFile {
            m,
            nodes: nodes.iter().map(|s| s.as_ref().to_string()).collect(),
            edges: edges
                .iter()
                .map(|(f, t, l)| EdgeFile {
                    from: f.as_ref().to_string(),
                    to: t.as_ref().to_string(),
                    label: l.clone(),
                })
                .collect(),
        };
        Self::from_file(file)
    }

    pub fn from_file(file: GraphFile) -> Result<Self> {
        if file.m == 0 {
            return Err(JsrError::InvalidInput("alphabet size must be at least 1".into()));
        }
        let mut index = HashMap::new();
        for (i, id) in file.nodes.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(JsrError::DuplicateNode(id.clone()));
            }
        }
        let mut edges = Vec::with_capacity(file.edges.len());
        for (k, e) in file.edges.into_iter().enumerate() {
            let (Some(&from), Some(&to)) = (index.get(&e.from), index.get(&e.to)) else {
                return Err(JsrError::DanglingEdge {
                    edge: k,
                    from: e.from,
                    to: e.to,
                });
            };
            if e.label.is_empty() {
                return Err(JsrError::EmptyLabel {
                    edge: k,
                    from: e.from,
                    to: e.to,
                });
            }
            if let Some(&letter) = e.label.iter().find(|&&l| l == 0 || l > file.m) {
                return Err(JsrError::LetterOutOfRange {
                    edge: k,
                    from: e.from,
                    to: e.to,
                    letter,
                    m: file.m,
                });
            }
            edges.push(Edge {
                from,
                to,
                label: Word::new(e.label),
            });
        }
        Ok(Self {
            m: file.m,
            nodes: file.nodes,
            edges,
        })
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            m: self.m,
            nodes: self.nodes.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeFile {
                    from: self.nodes[e.from].clone(),
                    to: self.nodes[e.to].clone(),
                    label: e.label.letters().to_vec(),
                })
                .collect(),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: GraphFile =
            serde_json::from_str(s).map_err(|e| JsrError::Parse(format!("graph JSON: {e}")))?;
        Self::from_file(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("graph serialization cannot fail")
    }

    /// Re-checks every structural invariant.
    pub fn validate(&self) -> Result<()> {
        Self::from_file(self.to_file()).map(|_| ())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n == id)
    }

    pub fn max_label_len(&self) -> usize {
        self.edges.iter().map(|e| e.label.len()).max().unwrap_or(0)
    }

    /// Replaces each label of length `k > 1` by a chain of `k` single-letter
    /// edges through `k − 1` fresh nodes; the first-applied letter leaves the
    /// source. Fresh ids are `{from}~{to}~e{edge}~{q}`.
    pub fn expand(&self) -> Self {
        let mut nodes = self.nodes.clone();
        let mut edges = Vec::new();
        for (k, e) in self.edges.iter().enumerate() {
            let letters = e.label.letters();
            if letters.len() == 1 {
                edges.push(e.clone());
                continue;
            }
            let mut prev = e.from;
            for (q, &letter) in letters.iter().enumerate() {
                let next = if q + 1 == letters.len() {
                    e.to
                } else {
                    nodes.push(format!(
                        "{}~{}~e{}~{}",
                        self.nodes[e.from],
                        self.nodes[e.to],
                        k,
                        q + 1
                    ));
                    nodes.len() - 1
                };
                edges.push(Edge {
                    from: prev,
                    to: next,
                    label: Word::new(vec![letter]),
                });
                prev = next;
            }
        }
        Self {
            m: self.m,
            nodes,
            edges,
        }
    }

    /// Reverses every edge and every label.
    pub fn dual(&self) -> Self {
        Self {
            m: self.m,
            nodes: self.nodes.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| Edge {
                    from: e.to,
                    to: e.from,
                    label: e.label.reversed(),
                })
                .collect(),
        }
    }

    /// Renames letters: letter `k` becomes `perm[k − 1]`.
    pub fn swap_labels(&self, perm: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.m];
        if perm.len() != self.m {
            return Err(JsrError::InvalidInput(format!(
                "permutation has {} entries, alphabet has {}",
                perm.len(),
                self.m
            )));
        }
        for &p in perm {
            if p == 0 || p > self.m || seen[p - 1] {
                return Err(JsrError::InvalidInput(format!(
                    "{perm:?} is not a permutation of 1..={}",
                    self.m
                )));
            }
            seen[p - 1] = true;
        }
        Ok(Self {
            m: self.m,
            nodes: self.nodes.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| Edge {
                    from: e.from,
                    to: e.to,
                    label: Word::new(e.label.letters().iter().map(|&l| perm[l - 1]).collect()),
                })
                .collect(),
        })
    }

    /// Same node ids and the same multiset of edges, ignoring edge order.
    pub fn same_as(&self, other: &Self) -> bool {
        if self.m != other.m {
            return false;
        }
        let mut a = self.nodes.clone();
        let mut b = other.nodes.clone();
        a.sort();
        b.sort();
        a == b && self.edge_keys() == other.edge_keys()
    }

    fn edge_keys(&self) -> Vec<(String, String, Vec<usize>)> {
        let mut k: Vec<_> = self
            .edges
            .iter()
            .map(|e| {
                (
                    self.nodes[e.from].clone(),
                    self.nodes[e.to].clone(),
                    e.label.letters().to_vec(),
                )
            })
            .collect();
        k.sort();
        k
    }

    /// Graph isomorphism by backtracking over node bijections.
    pub fn is_isomorphic(&self, other: &Self) -> bool {
        if self.m != other.m
            || self.node_count() != other.node_count()
            || self.edges.len() != other.edges.len()
        {
            return false;
        }
        let ca = self.edge_counts();
        let cb = other.edge_counts();
        let sa = self.signatures();
        let sb = other.signatures();
        let mut map = vec![usize::MAX; self.node_count()];
        let mut used = vec![false; other.node_count()];
        iso_extend(0, &mut map, &mut used, &ca, &cb, &sa, &sb)
    }

    fn edge_counts(&self) -> HashMap<(usize, usize, Word), usize> {
        let mut c = HashMap::new();
        for e in &self.edges {
            *c.entry((e.from, e.to, e.label.clone())).or_insert(0) += 1;
        }
        c
    }

    fn signatures(&self) -> Vec<(Vec<Word>, Vec<Word>)> {
        let mut s = vec![(Vec::new(), Vec::new()); self.node_count()];
        for e in &self.edges {
            s[e.from].0.push(e.label.clone());
            s[e.to].1.push(e.label.clone());
        }
        for (o, i) in &mut s {
            o.sort();
            i.sort();
        }
        s
    }
}

type Counts = HashMap<(usize, usize, Word), usize>;

fn iso_extend(
    u: usize,
    map: &mut [usize],
    used: &mut [bool],
    ca: &Counts,
    cb: &Counts,
    sa: &[(Vec<Word>, Vec<Word>)],
    sb: &[(Vec<Word>, Vec<Word>)],
) -> bool {
    if u == map.len() {
        return true;
    }
    for v in 0..used.len() {
        if used[v] || sa[u] != sb[v] {
            continue;
        }
        map[u] = v;
        let consistent = (0..=u).all(|w| {
            let mw = map[w];
            pair_matches(ca, cb, (u, w), (v, mw)) && pair_matches(ca, cb, (w, u), (mw, v))
        });
        if consistent {
            used[v] = true;
            if iso_extend(u + 1, map, used, ca, cb, sa, sb) {
                return true;
            }
            used[v] = false;
        }
        map[u] = usize::MAX;
    }
    false
}

fn pair_matches(ca: &Counts, cb: &Counts, a: (usize, usize), b: (usize, usize)) -> bool {
    let pick = |c: &Counts, (x, y): (usize, usize)| {
        let mut v: Vec<(Word, usize)> = c
            .iter()
            .filter(|((f, t, _), _)| *f == x && *t == y)
            .map(|((_, _, w), n)| (w.clone(), *n))
            .collect();
        v.sort();
        v
    };
    pick(ca, a) == pick(cb, b)
}

impl Serialize for LabeledGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_file().serialize(s)
    }
}

impl<'de> Deserialize<'de> for LabeledGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let file = GraphFile::deserialize(d)?;
        LabeledGraph::from_file(file).map_err(serde::de::Error::custom)
    }
}
