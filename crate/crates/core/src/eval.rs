//! Evaluation of arbitrary allocations: edge weights, weighted distances,
//! radius and median objectives.
//!
//! This is the reference every solver in the crate is checked against, so it
//! knows nothing about trees or optimality.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::alloc::Allocation;
use crate::graph::{BudgetGraph, EdgeId, VertexId};

/// Weight of an edge of length `length` holding fraction `fraction` of budget
/// `budget`: `length / (fraction * budget)`, or `+inf` for zero budget.
pub fn edge_weight(length: f64, fraction: f64, budget: f64) -> f64 {
    let b = fraction * budget;
    if b <= 0.0 {
        f64::INFINITY
    } else {
        length / b
    }
}

/// Weight of every edge of `g` under `alloc`.
pub fn edge_weights(g: &BudgetGraph, alloc: &Allocation) -> Vec<f64> {
    g.edges()
        .iter()
        .zip(alloc.fractions())
        .map(|(e, &b)| edge_weight(e.length, b, alloc.budget()))
        .collect()
}

#[derive(Clone, Copy, PartialEq)]
struct Key(f64);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Single-source shortest paths with the predecessor edge of every vertex.
#[derive(Clone, Debug)]
pub struct ShortestPaths {
    pub dist: Vec<f64>,
    pub pred: Vec<Option<EdgeId>>,
}

impl ShortestPaths {
    /// Edges on the shortest path from the source to `v`, ending at `v`.
    pub fn path_edges(&self, g: &BudgetGraph, mut v: VertexId) -> Vec<EdgeId> {
        let mut out = Vec::new();
        while let Some(e) = self.pred[v] {
            out.push(e);
            v = g.edge(e).other(v);
        }
        out
    }
}

/// Dijkstra over explicit edge weights. Infinite-weight edges are never used,
/// unreachable vertices stay at `+inf`. Among equal-length paths the first
/// one discovered (smallest vertex popped first) is kept.
pub fn dijkstra(g: &BudgetGraph, weights: &[f64], src: VertexId) -> ShortestPaths {
    let n = g.n();
    let mut dist = vec![f64::INFINITY; n];
    let mut pred = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[src] = 0.0;
    heap.push(Reverse((Key(0.0), src)));
    while let Some(Reverse((Key(d), x))) = heap.pop() {
        if done[x] {
            continue;
        }
        done[x] = true;
        for &(y, e) in g.neighbors(x) {
            let w = weights[e];
            if !w.is_finite() || done[y] {
                continue;
            }
            let nd = d + w;
            if nd < dist[y] {
                dist[y] = nd;
                pred[y] = Some(e);
                heap.push(Reverse((Key(nd), y)));
            }
        }
    }
    ShortestPaths { dist, pred }
}

/// Weighted distance from `src` to every vertex under `alloc`.
pub fn weighted_distances(g: &BudgetGraph, alloc: &Allocation, src: VertexId) -> Vec<f64> {
    dijkstra(g, &edge_weights(g, alloc), src).dist
}

/// Largest weighted distance from `root`; `0` on a single vertex.
pub fn evaluate_radius(g: &BudgetGraph, alloc: &Allocation, root: VertexId) -> f64 {
    radius_of(&weighted_distances(g, alloc, root))
}

/// Sum and average of the weighted distances from `root`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MedianValue {
    pub sum: f64,
    pub average: f64,
}

pub fn evaluate_median(g: &BudgetGraph, alloc: &Allocation, root: VertexId) -> MedianValue {
    let sum = median_of(&weighted_distances(g, alloc, root));
    MedianValue {
        sum,
        average: sum / g.n() as f64,
    }
}

pub(crate) fn radius_of(dist: &[f64]) -> f64 {
    dist.iter().copied().fold(0.0, f64::max)
}

pub(crate) fn median_of(dist: &[f64]) -> f64 {
    dist.iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_definition() {
        assert_eq!(edge_weight(1.0, 0.5, 1.0), 2.0);
        assert_eq!(edge_weight(1.0, 0.0, 1.0), f64::INFINITY);
        assert_eq!(edge_weight(3.0, 0.25, 2.0), 6.0);
    }

    #[test]
    fn path_distances() {
        let g = BudgetGraph::parse("a b 1\nb c 1").unwrap();
        let a = Allocation::new(vec![0.5, 0.5], 1.0).unwrap();
        assert_eq!(weighted_distances(&g, &a, 0), vec![0.0, 2.0, 4.0]);
    }

    #[test]
    fn zero_budget_spoke_is_unreachable() {
        let g = BudgetGraph::parse("c a 1\nc b 1\nc d 1").unwrap();
        let a = Allocation::new(vec![0.5, 0.5, 0.0], 1.0).unwrap();
        let c = g.vertex("c").unwrap();
        let d = weighted_distances(&g, &a, c);
        assert_eq!(d[g.vertex("d").unwrap()], f64::INFINITY);
        assert_eq!(evaluate_radius(&g, &a, c), f64::INFINITY);
    }

    #[test]
    fn two_leaf_tree_with_thirds() {
        let g = BudgetGraph::parse("r v 1\nv l1 1\nv l2 1").unwrap();
        let a = Allocation::new(vec![1.0 / 3.0; 3], 1.0).unwrap();
        let r = g.vertex("r").unwrap();
        let d = weighted_distances(&g, &a, r);
        assert!((radius_of(&d) - 6.0).abs() < 1e-12);
    }

    #[test]
    fn single_vertex() {
        let g = BudgetGraph::new(1, []).unwrap();
        let a = Allocation::new(vec![], 1.0).unwrap();
        assert_eq!(evaluate_radius(&g, &a, 0), 0.0);
        assert_eq!(
            evaluate_median(&g, &a, 0),
            MedianValue {
                sum: 0.0,
                average: 0.0
            }
        );
    }

    #[test]
    fn median_sum_and_average() {
        let g = BudgetGraph::parse("r a 1\na b 1").unwrap();
        let s2 = std::f64::consts::SQRT_2;
        let b = s2 / (1.0 + s2);
        let ra = g.edge_between(g.vertex("r").unwrap(), g.vertex("a").unwrap()).unwrap();
        let mut f = vec![0.0; 2];
        f[ra] = b;
        f[1 - ra] = 1.0 - b;
        let a = Allocation::new(f, 1.0).unwrap();
        let m = evaluate_median(&g, &a, g.vertex("r").unwrap());
        assert!((m.sum - (3.0 + 2.0 * s2)).abs() < 1e-12);
        assert!((m.average - m.sum / 3.0).abs() < 1e-15);
    }

    #[test]
    fn shortcut_through_cheaper_route() {
        let g = BudgetGraph::parse("a b 10\nb c 1\na c 1").unwrap();
        let a = Allocation::uniform(3);
        let sp = dijkstra(&g, &edge_weights(&g, &a), 0);
        assert_eq!(sp.dist[1], 6.0);
        assert_eq!(sp.path_edges(&g, 1).len(), 2);
    }
}
