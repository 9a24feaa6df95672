//! Path-completeness by subset construction.
//!
//! The expanded graph is read as a nondeterministic automaton in which every
//! node is both initial and accepting. The graph is path-complete iff the
//! automaton accepts every word, i.e. iff the empty subset is unreachable
//! from the full node set.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{LabeledGraph, Word};
use crate::error::{JsrError, Result};

pub const DEFAULT_SUBSET_BUDGET: usize = 1 << 20;

/// The subset cap, overridable through the `JSR_BUDGET` environment variable.
pub fn default_subset_budget() -> usize {
    std::env::var("JSR_BUDGET")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&b: &usize| b > 0)
        .unwrap_or(DEFAULT_SUBSET_BUDGET)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathCompletenessResult {
    pub is_complete: bool,
    pub witness: Option<Word>,
    pub subsets_explored: usize,
}

type Bits = Vec<u64>;

fn words_for(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

pub fn is_path_complete(g: &LabeledGraph) -> Result<PathCompletenessResult> {
    is_path_complete_with_budget(g, default_subset_budget())
}

pub fn is_path_complete_with_budget(
    g: &LabeledGraph,
    budget: usize,
) -> Result<PathCompletenessResult> {
    let e = g.expand();
    let n = e.node_count();
    let m = e.m();
    let nw = words_for(n);

    // succ[letter][node] = heads of letter-labeled edges leaving node.
    let mut succ = vec![vec![Vec::new(); n]; m];
    for edge in e.edges() {
        succ[edge.label.letters()[0] - 1][edge.from].push(edge.to);
    }

    let mut full = vec![0u64; nw];
    for i in 0..n {
        full[i / 64] |= 1 << (i % 64);
    }
    if n == 0 {
        return Ok(PathCompletenessResult {
            is_complete: false,
            witness: Some(Word::empty()),
            subsets_explored: 1,
        });
    }

    let mut states: Vec<Bits> = vec![full.clone()];
    let mut parent: Vec<(usize, usize)> = vec![(usize::MAX, 0)];
    let mut seen: HashMap<Bits, usize> = HashMap::from([(full, 0)]);
    let mut queue = VecDeque::from([0usize]);

    while let Some(cur) = queue.pop_front() {
        for letter in 1..=m {
            let mut next = vec![0u64; nw];
            let src = &states[cur];
            for (wi, &word) in src.iter().enumerate() {
                let mut bits = word;
                while bits != 0 {
                    let node = wi * 64 + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    for &h in &succ[letter - 1][node] {
                        next[h / 64] |= 1 << (h % 64);
                    }
                }
            }
            if next.iter().all(|&b| b == 0) {
                let mut letters = vec![letter];
                let mut at = cur;
                while parent[at].0 != usize::MAX {
                    letters.push(parent[at].1);
                    at = parent[at].0;
                }
                letters.reverse();
                return Ok(PathCompletenessResult {
                    is_complete: false,
                    witness: Some(Word::new(letters)),
                    subsets_explored: states.len(),
                });
            }
            if seen.contains_key(&next) {
                continue;
            }
            if states.len() >= budget {
                return Err(JsrError::StateBudgetExceeded { budget });
            }
            seen.insert(next.clone(), states.len());
            states.push(next);
            parent.push((cur, letter));
            queue.push_back(states.len() - 1);
        }
    }
    Ok(PathCompletenessResult {
        is_complete: true,
        witness: None,
        subsets_explored: states.len(),
    })
}

/// Enumerates every word up to `max_len` and searches for a spelling path in
/// the expanded graph by depth-first backtracking.
pub fn is_path_complete_bruteforce(g: &LabeledGraph, max_len: usize) -> bool {
    let e = g.expand();
    let n = e.node_count();
    let mut out: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for edge in e.edges() {
        out[edge.from].push((edge.label.letters()[0], edge.to));
    }
    (1..=max_len).all(|len| {
        Word::all_of_length(e.m(), len)
            .iter()
            .all(|w| (0..n).any(|start| spells(&out, start, w.letters())))
    })
}

fn spells(out: &[Vec<(usize, usize)>], node: usize, rest: &[usize]) -> bool {
    match rest.split_first() {
        None => true,
        Some((&letter, tail)) => out[node]
            .iter()
            .any(|&(l, to)| l == letter && spells(out, to, tail)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_node(m: usize, labels: &[&[usize]]) -> LabeledGraph {
        let edges: Vec<(&str, &str, Vec<usize>)> =
            labels.iter().map(|l| ("1", "1", l.to_vec())).collect();
        LabeledGraph::new(m, &["1"], &edges).unwrap()
    }

    #[test]
    fn h1_and_h3_complete() {
        assert!(is_path_complete(&one_node(2, &[&[1], &[2]])).unwrap().is_complete);
        let h3 = one_node(2, &[&[1], &[1, 2], &[2, 2]]);
        assert!(is_path_complete(&h3).unwrap().is_complete);
        assert!(is_path_complete_bruteforce(&h3, 8));
    }

    #[test]
    fn missing_letter_witness() {
        let g = one_node(2, &[&[1]]);
        let r = is_path_complete(&g).unwrap();
        assert!(!r.is_complete);
        assert_eq!(r.witness, Some(Word::new(vec![2])));
        assert!(!is_path_complete_bruteforce(&g, 1));
    }

    #[test]
    fn witness_is_shortest() {
        // Only the words avoiding "22" are spelled.
        let g = one_node(2, &[&[1], &[1, 2]]);
        let r = is_path_complete(&g).unwrap();
        assert_eq!(r.witness, Some(Word::new(vec![2, 2])));
        assert!(is_path_complete_bruteforce(&g, 1));
        assert!(!is_path_complete_bruteforce(&g, 2));
    }

    #[test]
    fn budget_is_enforced() {
        let g = one_node(2, &[&[1], &[1, 2], &[2, 2]]);
        let err = is_path_complete_with_budget(&g, 1).unwrap_err();
        assert_eq!(err, JsrError::StateBudgetExceeded { budget: 1 });
    }
}
