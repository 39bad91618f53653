use serde_json::{json, Value};

use super::{hamiltonian_path, mst, unfold_to_line, MetricSpace, SpanningTree};
use crate::alloc::Allocation;
use crate::error::{Error, Result};
use crate::eval::evaluate_radius;
use crate::graph::BudgetGraph;
use crate::radius::solve_rooted_radius;
use crate::report::number;
use crate::tree::RootedTree;

/// Balanced binary search tree over sorted positions.
///
/// Vertex `i` of the result is `positions[i]`. Each range `[lo, hi)` is rooted
/// at index `lo + (hi - lo) / 2`, edge lengths are
/// position differences, and the height is at most `floor(log2 n)`.
pub fn balanced_tree(positions: &[f64]) -> Result<RootedTree> {
    let n = positions.len();
    if n == 0 {
        return Err(Error::Degenerate("no positions".into()));
    }
    if positions.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Degenerate(
            "positions must be strictly increasing".into(),
        ));
    }
    let mid = |lo: usize, hi: usize| lo + (hi - lo) / 2;
    let root = mid(0, n);
    let mut edges = Vec::with_capacity(n - 1);
    let mut stack = vec![(0, root, root), (root + 1, n, root)];
    while let Some((lo, hi, parent)) = stack.pop() {
        if lo >= hi {
            continue;
        }
        let m = mid(lo, hi);
        edges.push((parent, m, (positions[m] - positions[parent]).abs()));
        stack.push((lo, m, m));
        stack.push((m + 1, hi, m));
    }
    let g = BudgetGraph::new(n, edges)?;
    RootedTree::new(g, root)
}

/// Level-uniform allocation on a rooted tree: each of the `h` edge levels
/// (edges whose lower endpoint has depth `i + 1`) gets `1 / h` of the budget,
/// split within the level proportionally to length.
pub fn level_allocation(t: &RootedTree) -> Allocation {
    let m = t.graph().edge_count();
    if m == 0 {
        return Allocation::normalized(Vec::new());
    }
    let depth = t.depths();
    let height = t.height();
    let mut level_len = vec![0.0; height];
    for v in 0..t.n() {
        if t.parent(v).is_some() {
            level_len[depth[v] - 1] += t.parent_length(v);
        }
    }
    let mut fractions = vec![0.0; m];
    for v in 0..t.n() {
        if let Some(e) = t.parent_edge(v) {
            fractions[e] = t.parent_length(v) / level_len[depth[v] - 1] / height as f64;
        }
    }
    Allocation::normalized(fractions)
}

/// Certified factor `2 * ceil(log2 n)^2`.
pub fn ratio_bound(n: usize) -> f64 {
    let levels = if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    } as f64;
    2.0 * levels * levels
}

/// Output of the metric approximation pipeline.
///
/// Tree vertices are indices into the Hamiltonian path: tree vertex `i` is
/// metric point `order[i]` at line position `positions[i]`.
#[derive(Clone, Debug)]
pub struct ApproxReport {
    pub n: usize,
    pub mst: SpanningTree,
    /// Minimum spanning tree weight, a lower bound on the optimal radius.
    pub lb: f64,
    pub order: Vec<usize>,
    pub hp_weight: f64,
    pub positions: Vec<f64>,
    /// Balanced tree over the unfolded, normalized line.
    pub tree: RootedTree,
    /// Exact optimal allocation of `tree`, by tree edge id.
    pub tree_allocation: Allocation,
    /// Metric point at the root of the balanced tree.
    pub root: usize,
    /// Complete graph on the metric points.
    pub graph: BudgetGraph,
    /// `tree_allocation` carried over to `graph`, zero off the tree.
    pub allocation: Allocation,
    /// Radius of `allocation` on the complete graph from `root`.
    pub radius: f64,
    /// Budget radius of the balanced tree with unfolded lengths, an upper
    /// bound on `radius`.
    pub tree_radius: f64,
    pub ratio_bound: f64,
    /// `radius / lb`; `None` for a single point.
    pub achieved_ratio_vs_lb: Option<f64>,
}

impl ApproxReport {
    /// `radius <= ratio_bound * lb`, up to rounding.
    pub fn certified(&self) -> bool {
        self.radius <= self.ratio_bound * self.lb * (1.0 + 1e-12)
    }

    pub fn to_json(&self, budget: f64) -> Value {
        let tree_edges: Vec<Value> = self
            .tree
            .top_down()
            .iter()
            .filter_map(|&v| {
                let p = self.tree.parent(v)?;
                let e = self.tree.parent_edge(v)?;
                let (a, b) = (self.order[p], self.order[v]);
                Some(json!({
                    "u": a.to_string(),
                    "v": b.to_string(),
                    "line_length": self.tree.parent_length(v) * self.hp_weight,
                    "metric_length": self.graph.edge(self.graph.edge_between(a, b)?).length,
                    "fraction": self.tree_allocation.fraction(e),
                }))
            })
            .collect();
        let fractions: serde_json::Map<String, Value> = self
            .allocation
            .support()
            .map(|e| (self.graph.edge_key(e), json!(self.allocation.fraction(e))))
            .collect();
        json!({
            "n": self.n,
            "root": self.root.to_string(),
            "budget": budget,
            "radius": number(self.radius / budget),
            "tree_radius": number(self.tree_radius / budget),
            "lb": self.lb,
            "hp_weight": self.hp_weight,
            "ratio_bound": self.ratio_bound,
            "achieved_ratio_vs_lb": self.achieved_ratio_vs_lb,
            "certified": self.certified(),
            "order": self.order,
            "positions": self.positions,
            "tree_edges": tree_edges,
            "allocation": { "budget": budget, "fractions": fractions },
        })
    }
}

/// Runs the full pipeline on a metric.
pub fn approx_metric_radius(m: &MetricSpace) -> Result<ApproxReport> {
    let n = m.n();
    let tree_mst = mst(m);
    let lb = tree_mst.weight;
    let hp = hamiltonian_path(m, &tree_mst)?;
    let graph = m.complete_graph()?;
    if n == 1 {
        let tree = RootedTree::new(BudgetGraph::new(1, [])?, 0)?;
        return Ok(ApproxReport {
            n,
            mst: tree_mst,
            lb,
            order: hp.order,
            hp_weight: 0.0,
            positions: vec![0.0],
            tree,
            tree_allocation: Allocation::normalized(Vec::new()),
            root: 0,
            graph,
            allocation: Allocation::normalized(Vec::new()),
            radius: 0.0,
            tree_radius: 0.0,
            ratio_bound: ratio_bound(n),
            achieved_ratio_vs_lb: None,
        });
    }
    let positions = unfold_to_line(m, &hp)?;
    let tree = balanced_tree(&positions)?;
    let solved = solve_rooted_radius(&tree);
    let tree_radius = solved.objective * hp.weight;
    let mut fractions = vec![0.0; graph.edge_count()];
    for (e, edge) in tree.graph().edges().iter().enumerate() {
        let (a, b) = (hp.order[edge.u], hp.order[edge.v]);
        let ge = graph
            .edge_between(a, b)
            .expect("complete graph has every pair");
        fractions[ge] = solved.allocation.fraction(e);
    }
    let allocation = Allocation::new(fractions, 1.0)?;
    let root = hp.order[tree.root()];
    let radius = evaluate_radius(&graph, &allocation, root);
    Ok(ApproxReport {
        n,
        mst: tree_mst,
        lb,
        order: hp.order,
        hp_weight: hp.weight,
        positions,
        tree,
        tree_allocation: solved.allocation,
        root,
        graph,
        allocation,
        radius,
        tree_radius,
        ratio_bound: ratio_bound(n),
        achieved_ratio_vs_lb: Some(radius / lb),
    })
}
