//! Exact budget median on trees.
//!
//! The objective counts every vertex once, so an edge `(p, c)` carries the
//! traffic of the `n_c` vertices below it. For the augmented subtree of `c`
//! the best split between the edge and the subtree gives
//!
//! ```text
//! aug(c) = (sqrt(n_c * l) + sqrt(down(c)))^2
//! ```
//!
//! and siblings combine through `min sum X_i / B_i` over `sum B_i = 1`, whose
//! minimizer is `B_i ∝ sqrt(X_i)` with value `(sum sqrt(X_i))^2`. Everything is
//! therefore additive in the square-root domain:
//! `sqrt(down(p)) = sum over children c of (sqrt(n_c * l_c) + sqrt(down(c)))`.

use crate::error::Result;
use crate::graph::VertexId;
use crate::report::{Objective, SolveReport};
use crate::split::{argmin_smallest_id, exclusive_sums, split_budget};
use crate::tol::Tolerance;
use crate::tree::RootedTree;

/// Bottom-up tables of the median recurrence, stored as square roots.
#[derive(Clone, Debug)]
pub struct MedianDp {
    /// `sqrt` of the optimal median sum of the subtree of `v` from `v`.
    pub root_down: Vec<f64>,
    /// `sqrt` of the optimal median sum of the augmented subtree of `v`, from
    /// its parent. Zero at the root.
    pub root_aug: Vec<f64>,
}

impl MedianDp {
    pub fn compute(t: &RootedTree) -> Self {
        let n = t.n();
        let mut root_down = vec![0.0; n];
        let mut root_aug = vec![0.0; n];
        for &v in t.top_down().iter().rev() {
            if let Some(p) = t.parent(v) {
                root_aug[v] = edge_term(t, v) + root_down[v];
                root_down[p] += root_aug[v];
            }
        }
        Self {
            root_down,
            root_aug,
        }
    }

    pub fn bm_down(&self, v: VertexId) -> f64 {
        self.root_down[v] * self.root_down[v]
    }

    pub fn bm_aug(&self, v: VertexId) -> f64 {
        self.root_aug[v] * self.root_aug[v]
    }
}

/// `sqrt(n_v * l(parent(v), v))`.
fn edge_term(t: &RootedTree, v: VertexId) -> f64 {
    (t.subtree_size(v) as f64 * t.parent_length(v)).sqrt()
}

/// Optimal allocation and budget median sum of `t` from its root.
pub fn solve_rooted_median(t: &RootedTree) -> SolveReport {
    let dp = MedianDp::compute(t);
    let shares: Vec<f64> = (0..t.n())
        .map(|v| {
            if t.parent(v).is_none() {
                0.0
            } else {
                edge_term(t, v) / dp.root_aug[v]
            }
        })
        .collect();
    let alloc = split_budget(t, &dp.root_aug, &shares);
    let mut report = SolveReport::evaluated(t.graph(), Objective::Median, alloc, t.root());
    report.objective = dp.bm_down(t.root());
    report
}

/// Budget median sum for every root in two passes.
pub fn solve_all_roots_median(t: &RootedTree) -> Vec<f64> {
    let dp = MedianDp::compute(t);
    let n = t.n();
    // sqrt-domain value of everything outside the subtree of v, seen from v
    let mut up = vec![0.0; n];
    let mut total = vec![0.0; n];
    total[t.root()] = dp.root_down[t.root()];
    let mut sibling = Vec::new();
    let mut rest = Vec::new();
    for &u in t.top_down() {
        let kids = t.children(u);
        if kids.is_empty() {
            continue;
        }
        sibling.clear();
        sibling.extend(kids.iter().map(|&c| dp.root_aug[c]));
        exclusive_sums(&sibling, up[u], &mut rest);
        for (&c, &r) in kids.iter().zip(&rest) {
            let outside = (n - t.subtree_size(c)) as f64;
            up[c] = (outside * t.parent_length(c)).sqrt() + r;
            total[c] = dp.root_down[c] + up[c];
        }
    }
    total.into_iter().map(|s| s * s).collect()
}

/// Unrooted budget median with a cross-check against the unweighted median.
#[derive(Clone, Debug)]
pub struct UnrootedMedian {
    /// Best root's solution (smallest id among ties).
    pub report: SolveReport,
    /// Budget median sum for every root.
    pub values: Vec<f64>,
    /// All roots within tolerance of the minimum, increasing id.
    pub argmin: Vec<VertexId>,
    /// Vertices minimizing the hop-count distance sum, increasing id.
    pub unweighted_medians: Vec<VertexId>,
    /// Whether every budget-median root is also an unweighted median.
    pub coincides: bool,
}

pub fn solve_unrooted_median(t: &RootedTree) -> Result<UnrootedMedian> {
    let tol = Tolerance::default();
    let values = solve_all_roots_median(t);
    let best = argmin_smallest_id(&values, tol);
    let min = values[best];
    let argmin: Vec<VertexId> = (0..t.n()).filter(|&v| tol.eq(values[v], min)).collect();
    let unweighted_medians = unweighted_medians(t);
    let coincides = argmin.iter().all(|v| unweighted_medians.contains(v));
    let report = solve_rooted_median(&t.reroot(best)?);
    Ok(UnrootedMedian {
        report,
        values,
        argmin,
        unweighted_medians,
        coincides,
    })
}

/// Vertices minimizing the sum of hop distances to all other vertices.
pub fn unweighted_medians(t: &RootedTree) -> Vec<VertexId> {
    let n = t.n();
    let depth = t.depths();
    let mut sum = vec![0usize; n];
    sum[t.root()] = depth.iter().sum();
    for &u in t.top_down() {
        for &c in t.children(u) {
            // moving the root across (u, c) brings n_c vertices closer
            sum[c] = sum[u] + n - 2 * t.subtree_size(c);
        }
    }
    let min = sum.iter().copied().min().unwrap_or(0);
    (0..n).filter(|&v| sum[v] == min).collect()
}
