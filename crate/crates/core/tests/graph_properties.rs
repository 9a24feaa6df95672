use jsr_core::families::FamilySpec;
use jsr_core::graph::{is_path_complete, is_path_complete_bruteforce, LabeledGraph, Word};
use proptest::prelude::*;

type RawEdge = (usize, usize, Vec<usize>);

fn raw_graph(m: usize, max_nodes: usize, max_label: usize) -> impl Strategy<Value = (usize, Vec<RawEdge>)> {
    (1..=max_nodes).prop_flat_map(move |k| {
        let edge = (0..k, 0..k, prop::collection::vec(1..=m, 1..=max_label));
        (Just(k), prop::collection::vec(edge, 1..=2 * k + 2))
    })
}

fn build(m: usize, k: usize, edges: &[RawEdge]) -> LabeledGraph {
    let names: Vec<String> = (1..=k).map(|i| i.to_string()).collect();
    let edges: Vec<(String, String, Vec<usize>)> = edges
        .iter()
        .map(|(f, t, l)| (names[*f].clone(), names[*t].clone(), l.clone()))
        .collect();
    LabeledGraph::new(m, &names, &edges).unwrap()
}

fn graph(m: usize, max_nodes: usize, max_label: usize) -> impl Strategy<Value = LabeledGraph> {
    raw_graph(m, max_nodes, max_label).prop_map(move |(k, e)| build(m, k, &e))
}

/// Adds edges (to random targets) until every node has outgoing edges, or
/// incoming edges when `incoming`, with every letter. Meant for graphs with
/// single-letter labels.
fn cover_letters(m: usize, k: usize, mut edges: Vec<RawEdge>, targets: &[usize], incoming: bool) -> Vec<RawEdge> {
    let mut pick = targets.iter().cycle();
    for node in 0..k {
        for letter in 1..=m {
            let has = edges.iter().any(|(f, t, l)| {
                let (at, end) = if incoming { (*t, l[l.len() - 1]) } else { (*f, l[0]) };
                at == node && end == letter
            });
            if !has {
                let other = pick.next().copied().unwrap_or(0) % k;
                edges.push(if incoming {
                    (other, node, vec![letter])
                } else {
                    (node, other, vec![letter])
                });
            }
        }
    }
    edges
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn completeness_is_invariant_under_duality(g in graph(2, 4, 2)) {
        prop_assert_eq!(
            is_path_complete(&g).unwrap().is_complete,
            is_path_complete(&g.dual()).unwrap().is_complete
        );
    }

    #[test]
    fn checker_agrees_with_enumeration(g in graph(2, 4, 2)) {
        let res = is_path_complete(&g).unwrap();
        if !is_path_complete_bruteforce(&g, 8) {
            prop_assert!(!res.is_complete);
        }
        if let Some(w) = &res.witness {
            prop_assert!(!res.is_complete);
            // The witness is uncovered and every shorter word is covered.
            prop_assert!(!is_path_complete_bruteforce(&g, w.len()));
            prop_assert!(is_path_complete_bruteforce(&g, w.len() - 1));
        } else {
            prop_assert!(res.is_complete);
            prop_assert!(is_path_complete_bruteforce(&g, 8));
        }
    }

    #[test]
    fn all_letters_out_or_in_suffices(
        (k, edges) in raw_graph(3, 4, 1),
        targets in prop::collection::vec(0usize..4, 1..8),
        incoming in any::<bool>(),
    ) {
        let g = build(3, k, &cover_letters(3, k, edges, &targets, incoming));
        prop_assert!(is_path_complete(&g).unwrap().is_complete);
    }

    #[test]
    fn expansion_is_idempotent(g in graph(3, 4, 3)) {
        let e = g.expand();
        prop_assert!(e.expand().is_isomorphic(&e));
        prop_assert_eq!(e.max_label_len(), 1);
    }

    #[test]
    fn expansion_commutes_with_duality(g in graph(3, 3, 3)) {
        prop_assert!(g.expand().dual().is_isomorphic(&g.dual().expand()));
    }

    #[test]
    fn json_round_trip(g in graph(3, 4, 3)) {
        let back = LabeledGraph::from_json(&g.to_json()).unwrap();
        prop_assert_eq!(back.to_json(), g.to_json());
    }
}

#[test]
fn de_bruijn_sizes() {
    for m in [2usize, 3] {
        for k in 1..=3u32 {
            let g = FamilySpec::DeBruijn(k as usize).build(m).unwrap();
            assert_eq!(g.node_count(), m.pow(k));
            assert_eq!(g.edges().len(), m.pow(k + 1));
            let d = FamilySpec::DeBruijnDual(k as usize).build(m).unwrap();
            assert!(g.dual().is_isomorphic(&d));
        }
    }
}

#[test]
fn every_family_is_path_complete() {
    let specs = [
        "h1", "h2:t=2", "h2:t=3", "h3", "h3b", "h3d", "h3bd", "h4", "g1", "g1d", "g2", "g2b",
        "g2d", "g2bd", "g3", "g3b", "g4", "debruijn:k=1", "debruijn:k=2", "debruijnd:k=3",
    ];
    for s in specs {
        let g = s.parse::<FamilySpec>().unwrap().build(2).unwrap();
        assert!(is_path_complete(&g).unwrap().is_complete, "{s}");
    }
    for (name, g) in jsr_core::families::catalog_two_node() {
        assert!(is_path_complete(&g).unwrap().is_complete, "{name}");
    }
}

#[test]
fn g1_dual_is_dual_of_g1() {
    for m in 2..=4 {
        let g1 = FamilySpec::G1.build(m).unwrap();
        assert!(g1.dual().is_isomorphic(&FamilySpec::G1Dual.build(m).unwrap()));
    }
}

#[test]
fn staircase_words_are_complete() {
    // {A1, A1 then A2, A1 then A2 twice, ..., A2^k}
    for k in 1..=5 {
        let mut words: Vec<Word> = (0..k)
            .map(|j| {
                let mut w = vec![1];
                w.extend(std::iter::repeat_n(2, j));
                Word::new(w)
            })
            .collect();
        words.push(Word::new(vec![2; k]));
        let g = FamilySpec::OneNodeWords(words).build(2).unwrap();
        assert!(is_path_complete(&g).unwrap().is_complete, "k={k}");
    }
}
