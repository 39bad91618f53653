use crate::alloc::Allocation;
use crate::error::{Error, Result};
use crate::graph::{BudgetGraph, EdgeId, VertexId};
use crate::median::solve_rooted_median;
use crate::radius::solve_rooted_radius;
use crate::report::{Objective, SolveReport};
use crate::tree::RootedTree;

/// Default refusal threshold for [`exact_small_graph_radius`].
pub const DEFAULT_TREE_CAP: u64 = 1_000_000;

/// Number of spanning trees by the matrix-tree theorem (a float estimate for
/// large graphs).
pub fn spanning_tree_count(g: &BudgetGraph) -> f64 {
    let n = g.n();
    if n <= 1 {
        return 1.0;
    }
    let k = n - 1;
    // Laplacian with the last row and column removed
    let mut a = vec![0.0f64; k * k];
    for e in g.edges() {
        for (x, y) in [(e.u, e.v), (e.v, e.u)] {
            if x < k {
                a[x * k + x] += 1.0;
                if y < k {
                    a[x * k + y] -= 1.0;
                }
            }
        }
    }
    let mut det = 1.0;
    for col in 0..k {
        let pivot = (col..k)
            .max_by(|&i, &j| a[i * k + col].abs().total_cmp(&a[j * k + col].abs()))
            .unwrap();
        if a[pivot * k + col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for j in 0..k {
                a.swap(pivot * k + j, col * k + j);
            }
            det = -det;
        }
        let p = a[col * k + col];
        det *= p;
        for i in (col + 1)..k {
            let factor = a[i * k + col] / p;
            if factor != 0.0 {
                for j in col..k {
                    a[i * k + j] -= factor * a[col * k + j];
                }
            }
        }
    }
    det.abs().round()
}

/// Calls `visit` with the edge set of every spanning tree of `g`, in
/// lexicographic include-first order over edges sorted by endpoints.
///
/// Refuses up front when the matrix-tree count exceeds `cap`.
pub fn for_each_spanning_tree<F>(g: &BudgetGraph, cap: u64, mut visit: F) -> Result<u64>
where
    F: FnMut(&[EdgeId]),
{
    let estimate = spanning_tree_count(g);
    if estimate > cap as f64 {
        return Err(Error::TooManySpanningTrees { estimate, cap });
    }
    let mut order: Vec<EdgeId> = (0..g.edge_count()).collect();
    order.sort_by_key(|&e| (g.edge(e).u, g.edge(e).v));
    let mut search = Search {
        g,
        order,
        chosen: Vec::with_capacity(g.n()),
        count: 0,
    };
    search.run(0, &mut visit);
    Ok(search.count)
}

struct Search<'a> {
    g: &'a BudgetGraph,
    order: Vec<EdgeId>,
    chosen: Vec<EdgeId>,
    count: u64,
}

impl Search<'_> {
    fn run<F: FnMut(&[EdgeId])>(&mut self, idx: usize, visit: &mut F) {
        if self.chosen.len() + 1 == self.g.n() {
            self.count += 1;
            visit(&self.chosen);
            return;
        }
        if idx == self.order.len() {
            return;
        }
        let e = self.order[idx];
        let edge = *self.g.edge(e);
        if !self.connected(edge.u, edge.v, &self.chosen, &[]) {
            self.chosen.push(e);
            self.run(idx + 1, visit);
            self.chosen.pop();
        }
        if self.spans_without(idx) {
            self.run(idx + 1, visit);
        }
    }

    /// Whether `chosen` plus the edges after `idx` still connect the graph.
    fn spans_without(&self, idx: usize) -> bool {
        let n = self.g.n();
        let mut dsu = Dsu::new(n);
        let mut parts = n;
        for &e in self.chosen.iter().chain(&self.order[idx + 1..]) {
            let edge = self.g.edge(e);
            if dsu.union(edge.u, edge.v) {
                parts -= 1;
            }
        }
        parts == 1
    }

    fn connected(&self, a: VertexId, b: VertexId, edges: &[EdgeId], extra: &[EdgeId]) -> bool {
        let mut dsu = Dsu::new(self.g.n());
        for &e in edges.iter().chain(extra) {
            let edge = self.g.edge(e);
            dsu.union(edge.u, edge.v);
        }
        dsu.find(a) == dsu.find(b)
    }
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Best spanning tree found by exhaustive search.
#[derive(Clone, Debug)]
pub struct ExactOutcome {
    /// Solution on the full graph, zero budget off the best tree.
    pub report: SolveReport,
    /// Edges of the best tree (first in enumeration order among ties).
    pub tree: Vec<EdgeId>,
    /// Number of spanning trees examined.
    pub trees: u64,
}

/// Minimum budget radius from `root` over all spanning trees of `g`, each
/// solved exactly.
pub fn exact_small_graph_radius(g: &BudgetGraph, root: VertexId, cap: u64) -> Result<ExactOutcome> {
    exact_small_graph(g, root, Objective::Radius, cap)
}

/// Same search for the median objective.
pub fn exact_small_graph_median(g: &BudgetGraph, root: VertexId, cap: u64) -> Result<ExactOutcome> {
    exact_small_graph(g, root, Objective::Median, cap)
}

fn exact_small_graph(
    g: &BudgetGraph,
    root: VertexId,
    kind: Objective,
    cap: u64,
) -> Result<ExactOutcome> {
    if root >= g.n() {
        return Err(Error::VertexOutOfRange(root));
    }
    let mut best: Option<(f64, Vec<EdgeId>, Allocation)> = None;
    let mut failure = None;
    let trees = for_each_spanning_tree(g, cap, |edges| {
        if failure.is_some() {
            return;
        }
        let tree = match g
            .spanning_subgraph(edges)
            .and_then(|sub| RootedTree::new(sub, root))
        {
            Ok(t) => t,
            Err(e) => {
                failure = Some(e);
                return;
            }
        };
        let rep = match kind {
            Objective::Radius => solve_rooted_radius(&tree),
            Objective::Median => solve_rooted_median(&tree),
        };
        if best.as_ref().is_none_or(|(v, _, _)| rep.objective < *v) {
            best = Some((rep.objective, edges.to_vec(), rep.allocation));
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    let (value, tree, tree_alloc) = best.expect("connected graphs have a spanning tree");
    let mut fractions = vec![0.0; g.edge_count()];
    for (i, &e) in tree.iter().enumerate() {
        fractions[e] = tree_alloc.fraction(i);
    }
    let alloc = if fractions.is_empty() {
        Allocation::uniform(0)
    } else {
        Allocation::new(fractions, 1.0)?
    };
    let mut report = SolveReport::evaluated(g, kind, alloc, root);
    report.objective = value;
    if kind == Objective::Radius {
        report.lower_bound = Some(
            tree.iter().map(|&e| g.edge(e).length).sum::<f64>(),
        );
    }
    Ok(ExactOutcome {
        report,
        tree,
        trees,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tol::relative_error as rel;

    fn complete(n: usize) -> BudgetGraph {
        let edges = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j, 1.0)));
        BudgetGraph::new(n, edges).unwrap()
    }

    #[test]
    fn cayley_counts() {
        for n in 1..=6 {
            let g = complete(n);
            let expect = (n as f64).powi(n as i32 - 2).max(1.0);
            assert_eq!(spanning_tree_count(&g), expect);
            let counted = for_each_spanning_tree(&g, DEFAULT_TREE_CAP, |t| {
                assert_eq!(t.len() + 1, n);
            })
            .unwrap();
            assert_eq!(counted as f64, expect);
        }
    }

    #[test]
    fn unit_triangle_prefers_star() {
        let g = BudgetGraph::parse("r a 1\nr b 1\na b 1").unwrap();
        let [r, a, b] = ["r", "a", "b"].map(|l| g.vertex(l).unwrap());
        let out = exact_small_graph_radius(&g, r, DEFAULT_TREE_CAP).unwrap();
        assert_eq!(out.trees, 3);
        assert!(rel(out.report.objective, 2.0) < 1e-12);
        let ab = g.edge_between(a, b).unwrap();
        assert_eq!(out.report.allocation.fraction(ab), 0.0);
    }

    #[test]
    fn k4_star_at_root() {
        let g = complete(4);
        for root in 0..4 {
            let out = exact_small_graph_radius(&g, root, DEFAULT_TREE_CAP).unwrap();
            assert_eq!(out.trees, 16);
            assert!(rel(out.report.objective, 3.0) < 1e-12);
        }
    }

    #[test]
    fn tree_input_matches_tree_solver() {
        let g = BudgetGraph::parse("r a 2\na b 1\nr c 0.5").unwrap();
        let r = g.vertex("r").unwrap();
        let out = exact_small_graph_radius(&g, r, DEFAULT_TREE_CAP).unwrap();
        let t = RootedTree::new(g.clone(), r).unwrap();
        assert_eq!(out.trees, 1);
        assert_eq!(out.report.objective, solve_rooted_radius(&t).objective);
    }

    #[test]
    fn refuses_above_cap() {
        let g = complete(6);
        assert!(matches!(
            exact_small_graph_radius(&g, 0, 100),
            Err(Error::TooManySpanningTrees { cap: 100, .. })
        ));
    }
}
