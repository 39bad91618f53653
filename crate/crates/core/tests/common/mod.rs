#![allow(dead_code)]

use budget_graph::{BudgetGraph, RootedTree};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rel(a: f64, b: f64) -> f64 {
    budget_graph::tol::relative_error(a, b)
}

/// Random tree on `n` vertices: vertex `i` hangs under `i - 1` half of the
/// time (long chains) and under a uniform earlier vertex otherwise.
pub fn random_tree_graph(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> BudgetGraph {
    let edges: Vec<_> = (1..n)
        .map(|i| {
            let p = if rng.gen_bool(0.5) { i - 1 } else { rng.gen_range(0..i) };
            (p, i, rng.gen_range(lo..=hi))
        })
        .collect();
    BudgetGraph::new(n, edges).unwrap()
}

pub fn random_tree(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> RootedTree {
    let g = random_tree_graph(rng, n, lo, hi);
    let root = rng.gen_range(0..n);
    RootedTree::new(g, root).unwrap()
}

/// Random connected graph: a random tree plus each remaining pair with
/// probability `p`.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64, lo: f64, hi: f64) -> BudgetGraph {
    let mut edges: Vec<(usize, usize, f64)> = (1..n)
        .map(|i| (rng.gen_range(0..i), i, rng.gen_range(lo..=hi)))
        .collect();
    for i in 0..n {
        for j in (i + 1)..n {
            let present = edges.iter().any(|&(a, b, _)| (a, b) == (i, j));
            if !present && rng.gen_bool(p) {
                edges.push((i, j, rng.gen_range(lo..=hi)));
            }
        }
    }
    BudgetGraph::new(n, edges).unwrap()
}
