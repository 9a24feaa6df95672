#![allow(dead_code)]

use jsr_core::graph::LabeledGraph;
use jsr_core::linalg::{Matrix, MatrixAlphabet, SymMatrix};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Entries uniform in `[-1, 1]`.
pub fn random_matrix(rng: &mut impl Rng, n: usize) -> Matrix {
    let data = (0..n * n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    Matrix::new(n, n, data).unwrap()
}

pub fn random_alphabet(rng: &mut impl Rng, n: usize, m: usize) -> MatrixAlphabet {
    MatrixAlphabet::new((0..m).map(|_| random_matrix(rng, n)).collect()).unwrap()
}

/// `BᵀB + I/n`, comfortably positive definite.
pub fn random_spd(rng: &mut impl Rng, n: usize) -> SymMatrix {
    let b = random_matrix(rng, n);
    let p = &b.transpose().matmul(&b) + &Matrix::identity(n).scale(1.0 / n as f64);
    SymMatrix::symmetrize(&p)
}

/// A graph on 1..=max_nodes nodes with random edges and labels of
/// length 1..=max_label.
pub fn random_graph(rng: &mut impl Rng, m: usize, max_nodes: usize, max_label: usize) -> LabeledGraph {
    let k = rng.gen_range(1..=max_nodes);
    let names: Vec<String> = (1..=k).map(|i| i.to_string()).collect();
    let n_edges = rng.gen_range(1..=2 * k + 2);
    let edges: Vec<(String, String, Vec<usize>)> = (0..n_edges)
        .map(|_| {
            let len = rng.gen_range(1..=max_label);
            (
                names[rng.gen_range(0..k)].clone(),
                names[rng.gen_range(0..k)].clone(),
                (0..len).map(|_| rng.gen_range(1..=m)).collect(),
            )
        })
        .collect();
    LabeledGraph::new(m, &names, &edges).unwrap()
}
