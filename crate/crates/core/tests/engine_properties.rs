mod common;

use jsr_core::engine::{
    compare, guarantee_factor, lower_bound, transpose_alphabet, upper_bound, BoundOptions,
    NamedGraph,
};
use jsr_core::families::{catalog_two_node, FamilySpec};
use jsr_core::lmi::LyapunovTemplate;
use jsr_core::JsrError;
use rand::Rng;

fn rho_hat(spec: &FamilySpec, a: &jsr_core::linalg::MatrixAlphabet, tpl: LyapunovTemplate) -> f64 {
    let g = NamedGraph::family(spec.clone(), a.m()).unwrap();
    upper_bound(&g, a, tpl, &BoundOptions::default()).unwrap().rho_hat
}

fn rel_eq(x: f64, y: f64) -> bool {
    (x - y).abs() <= 1e-3 * x.max(y)
}

#[test]
fn lower_bounds_never_exceed_upper_bounds() {
    let mut rng = common::rng(11);
    let q = LyapunovTemplate::quadratic();
    for _ in 0..10 {
        let a = common::random_alphabet(&mut rng, 3, 2);
        let tol = BoundOptions::default().tol;
        for spec in [FamilySpec::Common, FamilySpec::G1, FamilySpec::H4] {
            let up = rho_hat(&spec, &a, q);
            for k in 1..=6 {
                let lb = lower_bound(&a, k).unwrap().value;
                assert!(lb <= up * (1.0 + tol), "{spec}: {lb} > {up}");
            }
        }
    }
}

#[test]
fn g1_bounds_are_transposition_invariant() {
    let q = LyapunovTemplate::quadratic();
    let mut rng = common::rng(12);
    for k in 0..20 {
        let a = common::random_alphabet(&mut rng, 3 + k % 2, 2);
        let at = transpose_alphabet(&a);
        let vals = [
            rho_hat(&FamilySpec::G1, &a, q),
            rho_hat(&FamilySpec::G1, &at, q),
            rho_hat(&FamilySpec::G1Dual, &a, q),
            rho_hat(&FamilySpec::G1Dual, &at, q),
        ];
        for v in &vals[1..] {
            assert!(rel_eq(vals[0], *v), "instance {k}: {vals:?}");
        }
        let h1 = rho_hat(&FamilySpec::Common, &a, q);
        assert!(rel_eq(h1, rho_hat(&FamilySpec::Common, &at, q)), "instance {k}");
    }
}

#[test]
fn transposing_matches_the_dual_graph() {
    let q = LyapunovTemplate::quadratic();
    let opts = BoundOptions::default();
    let mut rng = common::rng(13);
    let catalog = catalog_two_node();
    for k in 0..10 {
        let a = common::random_alphabet(&mut rng, 3, 2);
        let (name, g) = &catalog[rng.gen_range(0..catalog.len())];
        let on_transpose = upper_bound(&NamedGraph::custom(name.clone(), g.clone()), &transpose_alphabet(&a), q, &opts)
            .unwrap()
            .rho_hat;
        let on_dual = upper_bound(&NamedGraph::custom(format!("{name} dual"), g.dual()), &a, q, &opts)
            .unwrap()
            .rho_hat;
        assert!(rel_eq(on_transpose, on_dual), "instance {k} ({name}): {on_transpose} vs {on_dual}");
    }
}

#[test]
fn ex52_guarantees_bracket_one() {
    let a = jsr_core::fixtures::ex52();
    let q = LyapunovTemplate::quadratic();
    let tol = 1e-6;
    for spec in ["h1", "h2:t=2", "g1", "g1d", "h3", "h3d", "h4", "debruijnd:k=2"] {
        let f: FamilySpec = spec.parse().unwrap();
        let r = rho_hat(&f, &a, q);
        let c = guarantee_factor(&q, &f, 2, 2).unwrap();
        assert!(r / c <= 1.0 + tol && 1.0 <= r + tol, "{spec}: {r} / {c}");
    }
}

#[test]
fn compare_flags_nothing_on_ex52() {
    let a = jsr_core::fixtures::ex52();
    let graphs: Vec<NamedGraph> = ["h1", "h2:t=2", "g1", "g1d", "g2", "h3", "g3", "g4"]
        .iter()
        .map(|s| NamedGraph::family(s.parse().unwrap(), 2).unwrap())
        .collect();
    let table = compare(&graphs, &a, LyapunovTemplate::quadratic(), &BoundOptions::default()).unwrap();
    assert_eq!(table.violations, 0, "{}", table.render_text());
    assert!(table.pairs.iter().all(|p| p.holds.is_some()));
    let json = serde_json::to_string(&table).unwrap();
    assert!(json.contains("\"rows\""));
    assert!(table.render_text().contains("g1"));
}

#[test]
fn incomplete_graphs_and_missing_guarantees_are_errors() {
    let a = jsr_core::fixtures::ex52();
    let words = FamilySpec::OneNodeWords(vec![jsr_core::graph::Word::new(vec![1, 2])]);
    let g = NamedGraph::family(words, 2).unwrap();
    let err = upper_bound(&g, &a, LyapunovTemplate::quadratic(), &BoundOptions::default()).unwrap_err();
    assert!(matches!(err, JsrError::GraphNotPathComplete { .. }));
    assert!(matches!(
        guarantee_factor(&LyapunovTemplate::quadratic(), &FamilySpec::G3, 3, 2),
        Err(JsrError::UnknownGuarantee(_))
    ));
}

/// G2 and its dual need not give the same bound; search random pairs for
/// a separating instance and report what was found.
#[test]
fn g2_versus_dual_search() {
    let q = LyapunovTemplate::quadratic();
    let mut rng = common::rng(14);
    let mut best = (0.0f64, None);
    for k in 0..30 {
        let a = common::random_alphabet(&mut rng, 3, 2);
        let x = rho_hat(&FamilySpec::G2, &a, q);
        let y = rho_hat(&FamilySpec::G2Dual, &a, q);
        let gap = (x - y).abs() / x.max(y);
        if gap > best.0 {
            best = (gap, Some((k, x, y)));
        }
    }
    match best.1 {
        Some((k, x, y)) if best.0 > 1e-3 => {
            println!("separating instance #{k}: g2 = {x:.6}, g2d = {y:.6}, gap {:.3}%", best.0 * 100.0)
        }
        _ => println!("no separating instance found; largest relative gap {:.2e}", best.0),
    }
}
