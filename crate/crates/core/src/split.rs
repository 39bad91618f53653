//! Shared plumbing for the tree solvers: top-down budget splitting and
//! sibling-exclusive sums used by rerooting.

use crate::alloc::Allocation;
use crate::tree::RootedTree;

/// Turns per-vertex split rules into an allocation in one top-down pass.
///
/// For a non-root vertex `c` with parent `p`, the augmented subtree of `c`
/// (its subtree plus the edge to `p`) receives the part of `p`'s subtree share
/// proportional to `sibling_weight[c]` among `p`'s children. The edge `(p, c)`
/// takes `edge_share[c]` of that, the rest flows into `c`'s own subtree.
pub(crate) fn split_budget(
    t: &RootedTree,
    sibling_weight: &[f64],
    edge_share: &[f64],
) -> Allocation {
    let n = t.n();
    let mut fractions = vec![0.0; t.graph().edge_count()];
    let mut subtree_share = vec![0.0; n];
    subtree_share[t.root()] = 1.0;
    for &u in t.top_down() {
        let kids = t.children(u);
        if kids.is_empty() {
            continue;
        }
        let total: f64 = kids.iter().map(|&c| sibling_weight[c]).sum();
        for &c in kids {
            let share = if total > 0.0 {
                subtree_share[u] * sibling_weight[c] / total
            } else {
                subtree_share[u] / kids.len() as f64
            };
            let e = t.parent_edge(c).expect("child has a parent edge");
            fractions[e] = share * edge_share[c];
            subtree_share[c] = share * (1.0 - edge_share[c]);
        }
    }
    Allocation::normalized(fractions)
}

/// `out[i] = extra + sum of values[j] for j != i`, without subtraction.
pub(crate) fn exclusive_sums(values: &[f64], extra: f64, out: &mut Vec<f64>) {
    out.clear();
    let mut prefix = extra;
    for &v in values {
        out.push(prefix);
        prefix += v;
    }
    let mut suffix = 0.0;
    for (slot, &v) in out.iter_mut().zip(values).rev() {
        *slot += suffix;
        suffix += v;
    }
}

/// Smallest vertex whose value is within `tol` of the minimum.
pub(crate) fn argmin_smallest_id(values: &[f64], tol: crate::tol::Tolerance) -> usize {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    values
        .iter()
        .position(|&v| tol.eq(v, min))
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exclusive_sums_match_brute_force() {
        let vals = [1.0, 2.0, 4.0, 8.0];
        let mut out = Vec::new();
        exclusive_sums(&vals, 16.0, &mut out);
        assert_eq!(out, vec![30.0, 29.0, 27.0, 23.0]);
        exclusive_sums(&[], 3.0, &mut out);
        assert!(out.is_empty());
    }
}
