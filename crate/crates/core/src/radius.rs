//! Exact budget radius on trees.
//!
//! For a child `c` hanging below `p` by an edge of length `l`, write
//! `down(c)` for the budget radius of the subtree of `c` rooted at `c`. Adding
//! the edge `(p, c)` gives the augmented subtree, whose budget radius from `p`
//! is
//!
//! ```text
//! aug(c) = (sqrt(l) + sqrt(down(c)))^2
//! ```
//!
//! obtained by putting `sqrt(l) / (sqrt(l) + sqrt(down(c)))` of the share on
//! the edge. Sibling augmented subtrees share a common root, their optimal
//! shares are proportional to their `aug` values and the radii add up:
//! `down(p) = sum of aug(c)` over the children of `p`. Under the resulting
//! allocation every leaf sits at exactly the optimal radius.
//!
//! [`solve_all_roots_radius`] reroots this recurrence to get the budget radius
//! for every choice of root in linear total time.

use crate::error::Result;
use crate::graph::VertexId;
use crate::report::{Objective, SolveReport};
use crate::split::{argmin_smallest_id, exclusive_sums, split_budget};
use crate::tol::Tolerance;
use crate::tree::RootedTree;

/// Bottom-up tables of the radius recurrence for a fixed root.
#[derive(Clone, Debug)]
pub struct RadiusDp {
    /// Budget radius of the subtree below `v`, rooted at `v`.
    pub br_down: Vec<f64>,
    /// Budget radius of the augmented subtree of `v`, measured from its parent.
    /// Zero at the root.
    pub br_aug: Vec<f64>,
}

impl RadiusDp {
    pub fn compute(t: &RootedTree) -> Self {
        let n = t.n();
        let mut br_down = vec![0.0; n];
        let mut br_aug = vec![0.0; n];
        for &v in t.top_down().iter().rev() {
            if let Some(p) = t.parent(v) {
                br_aug[v] = augment(t.parent_length(v), br_down[v]);
                br_down[p] += br_aug[v];
            }
        }
        Self { br_down, br_aug }
    }

    /// Fraction of an augmented subtree's share placed on its top edge.
    fn edge_shares(&self, t: &RootedTree) -> Vec<f64> {
        (0..t.n())
            .map(|v| {
                if t.parent(v).is_none() {
                    return 0.0;
                }
                let sl = t.parent_length(v).sqrt();
                let sd = self.br_down[v].sqrt();
                sl / (sl + sd)
            })
            .collect()
    }
}

fn augment(length: f64, down: f64) -> f64 {
    let s = length.sqrt() + down.sqrt();
    s * s
}

/// Optimal allocation and budget radius of `t` from its root.
///
/// The report's lower bound is the total edge length and the ratio
/// certificate is `radius / lower_bound`.
pub fn solve_rooted_radius(t: &RootedTree) -> SolveReport {
    let dp = RadiusDp::compute(t);
    let alloc = split_budget(t, &dp.br_aug, &dp.edge_shares(t));
    let mut report = SolveReport::evaluated(t.graph(), Objective::Radius, alloc, t.root());
    // the recurrence value is exact; evaluation only adds rounding
    report.objective = dp.br_down[t.root()];
    let lb = radius_lower_bound(t);
    report.lower_bound = Some(lb);
    report.ratio_certificate = (lb > 0.0).then(|| report.objective / lb);
    report
}

/// Budget radius for every root, plus the best root's full solution.
#[derive(Clone, Debug)]
pub struct AllRootsRadius {
    /// `values[v]` is the budget radius of the tree rooted at `v`.
    pub values: Vec<f64>,
    /// Vertex with the smallest value, smallest id among ties.
    pub best: VertexId,
    pub report: SolveReport,
}

/// Per-vertex budget radius via two passes over the tree.
pub fn all_roots_radius_values(t: &RootedTree) -> Vec<f64> {
    let dp = RadiusDp::compute(t);
    let n = t.n();
    let mut total = vec![0.0; n];
    // radius of everything outside the subtree of v, seen from v through its
    // parent edge
    let mut up_aug = vec![0.0; n];
    total[t.root()] = dp.br_down[t.root()];
    let mut sibling_aug = Vec::new();
    let mut rest = Vec::new();
    for &u in t.top_down() {
        let kids = t.children(u);
        if kids.is_empty() {
            continue;
        }
        sibling_aug.clear();
        sibling_aug.extend(kids.iter().map(|&c| dp.br_aug[c]));
        exclusive_sums(&sibling_aug, up_aug[u], &mut rest);
        for (&c, &r) in kids.iter().zip(&rest) {
            up_aug[c] = augment(t.parent_length(c), r);
            total[c] = dp.br_down[c] + up_aug[c];
        }
    }
    total
}

pub fn solve_all_roots_radius(t: &RootedTree) -> Result<AllRootsRadius> {
    let values = all_roots_radius_values(t);
    let best = argmin_smallest_id(&values, Tolerance::default());
    let report = solve_rooted_radius(&t.reroot(best)?);
    Ok(AllRootsRadius {
        values,
        best,
        report,
    })
}

/// Total edge length, a lower bound on the budget radius from any root.
pub fn radius_lower_bound(t: &RootedTree) -> f64 {
    t.graph().total_length()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::weighted_distances;

    fn rel(a: f64, b: f64) -> f64 {
        crate::tol::relative_error(a, b)
    }

    #[test]
    fn two_leaves_under_one_edge() {
        let t = RootedTree::parse("r v 1\nv l1 1\nv l2 1", "r").unwrap();
        let rep = solve_rooted_radius(&t);
        let s2 = 2f64.sqrt();
        assert!(rel(rep.objective, 3.0 + 2.0 * s2) < 1e-12);
        let g = t.graph();
        let v = g.vertex("v").unwrap();
        let root_edge = g.edge_between(t.root(), v).unwrap();
        assert!(rel(rep.allocation.fraction(root_edge), 1.0 / (1.0 + s2)) < 1e-12);
        for l in ["l1", "l2"] {
            let e = g.edge_between(v, g.vertex(l).unwrap()).unwrap();
            assert!(rel(rep.allocation.fraction(e), 1.0 / (2.0 + s2)) < 1e-12);
        }
        assert!((rep.allocation.fraction(root_edge) - 0.414).abs() < 1e-3);
    }

    #[test]
    fn three_leaves_under_one_edge() {
        let t = RootedTree::parse("r v 1\nv a 1\nv b 1\nv c 1", "r").unwrap();
        let rep = solve_rooted_radius(&t);
        let s3 = 3f64.sqrt();
        assert!(rel(rep.objective, 4.0 + 2.0 * s3) < 1e-12);
        let g = t.graph();
        let e = g.edge_between(g.vertex("v").unwrap(), g.vertex("a").unwrap()).unwrap();
        assert!(rel(rep.allocation.fraction(e), 1.0 / (3.0 + s3)) < 1e-12);
    }

    #[test]
    fn star_and_path() {
        let star = RootedTree::parse("c a 1\nc b 1\nc d 1\nc e 1", "c").unwrap();
        let rep = solve_rooted_radius(&star);
        assert!(rel(rep.objective, 4.0) < 1e-12);
        assert!(rep.allocation.fractions().iter().all(|&b| rel(b, 0.25) < 1e-12));

        let path = RootedTree::parse("a b 1\nb c 1\nc d 1", "a").unwrap();
        let rep = solve_rooted_radius(&path);
        assert!(rel(rep.objective, 9.0) < 1e-12);
        assert!(rep
            .allocation
            .fractions()
            .iter()
            .all(|&b| rel(b, 1.0 / 3.0) < 1e-12));
    }

    #[test]
    fn path_closed_form_with_uneven_lengths() {
        let t = RootedTree::parse("a b 4\nb c 9\nc d 0.25", "a").unwrap();
        let expect = (2.0f64 + 3.0 + 0.5).powi(2);
        assert!(rel(solve_rooted_radius(&t).objective, expect) < 1e-12);
    }

    #[test]
    fn single_vertex_and_single_edge() {
        let g = crate::graph::BudgetGraph::new(1, []).unwrap();
        let t = RootedTree::new(g, 0).unwrap();
        let rep = solve_rooted_radius(&t);
        assert_eq!(rep.objective, 0.0);
        assert!(rep.allocation.is_empty());
        assert_eq!(all_roots_radius_values(&t), vec![0.0]);

        let t = RootedTree::parse("a b 7", "a").unwrap();
        let rep = solve_rooted_radius(&t);
        assert!(rel(rep.objective, 7.0) < 1e-15);
        assert_eq!(radius_lower_bound(&t), 7.0);
        assert_eq!(rep.allocation.fractions(), &[1.0]);
    }

    #[test]
    fn leaves_are_equidistant() {
        let t = RootedTree::parse(
            "r a 2\nr b 0.5\na c 1\na d 3\nd e 0.1\nb f 4\nr g 1",
            "r",
        )
        .unwrap();
        let rep = solve_rooted_radius(&t);
        let d = weighted_distances(t.graph(), &rep.allocation, t.root());
        for leaf in t.leaves() {
            assert!(rel(d[leaf], rep.objective) < 1e-12, "leaf {leaf}");
        }
    }

    #[test]
    fn all_roots_on_path() {
        let t = RootedTree::parse("a b 1\nb c 1", "a").unwrap();
        let all = solve_all_roots_radius(&t).unwrap();
        assert!(rel(all.values[0], 4.0) < 1e-12);
        assert!(rel(all.values[1], 2.0) < 1e-12);
        assert!(rel(all.values[2], 4.0) < 1e-12);
        assert_eq!(all.best, 1);
        assert!(rel(all.report.objective, 2.0) < 1e-12);
        assert_eq!(all.report.root, 1);
    }

    #[test]
    fn ties_pick_smallest_id() {
        let t = RootedTree::parse("a b 1\nb c 1\nc d 1", "d").unwrap();
        let all = solve_all_roots_radius(&t).unwrap();
        assert!(rel(all.values[1], 5.0) < 1e-12);
        assert!(rel(all.values[2], 5.0) < 1e-12);
        assert_eq!(all.best, 1);
    }
}
