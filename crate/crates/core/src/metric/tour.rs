use super::MetricSpace;
use crate::error::{Error, Result};

/// Spanning tree over metric points as `(parent, child)` pairs, rooted at 0.
#[derive(Clone, Debug)]
pub struct SpanningTree {
    pub edges: Vec<(usize, usize)>,
    pub weight: f64,
}

impl SpanningTree {
    fn children(&self, n: usize) -> Vec<Vec<usize>> {
        let mut children = vec![Vec::new(); n];
        for &(p, c) in &self.edges {
            children[p].push(c);
        }
        for list in &mut children {
            list.sort_unstable();
        }
        children
    }
}

/// Dense Prim, `O(n^2)`. The next vertex is the one with the smallest key,
/// ties to the smaller index; a key only changes on strict improvement, so
/// the earliest-attached (smallest index) parent wins ties.
pub fn mst(m: &MetricSpace) -> SpanningTree {
    let n = m.n();
    let mut in_tree = vec![false; n];
    let mut key = vec![f64::INFINITY; n];
    let mut parent = vec![usize::MAX; n];
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    let mut weight = 0.0;
    key[0] = 0.0;
    for _ in 0..n {
        let mut next = usize::MAX;
        for v in 0..n {
            if !in_tree[v] && (next == usize::MAX || key[v] < key[next]) {
                next = v;
            }
        }
        in_tree[next] = true;
        if parent[next] != usize::MAX {
            edges.push((parent[next], next));
            weight += key[next];
        }
        for v in 0..n {
            if !in_tree[v] {
                let d = m.d(next, v);
                if d < key[v] {
                    key[v] = d;
                    parent[v] = next;
                }
            }
        }
    }
    SpanningTree { edges, weight }
}

/// Visiting order of all points and its length under the metric.
#[derive(Clone, Debug)]
pub struct HamiltonianPath {
    pub order: Vec<usize>,
    pub weight: f64,
}

/// Preorder of the tree (children by index) from point 0, i.e. the doubled
/// tree walk with repeated vertices skipped.
///
/// When the metric validates the triangle inequality, every shortcut hop is
/// checked against the tree walk it replaces.
pub fn hamiltonian_path(m: &MetricSpace, tree: &SpanningTree) -> Result<HamiltonianPath> {
    let n = m.n();
    let children = tree.children(n);
    let mut tree_parent = vec![usize::MAX; n];
    for &(p, c) in &tree.edges {
        tree_parent[c] = p;
    }
    // weighted depth along tree edges
    let mut depth = vec![0.0; n];
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![0];
    while let Some(v) = stack.pop() {
        if let Some(&p) = tree_parent.get(v).filter(|&&p| p != usize::MAX) {
            depth[v] = depth[p] + m.d(p, v);
        }
        order.push(v);
        stack.extend(children[v].iter().rev());
    }
    if order.len() != n {
        return Err(Error::Degenerate("tree does not span the metric".into()));
    }
    let scale = tree.weight.max(f64::MIN_POSITIVE);
    let mut weight = 0.0;
    for w in order.windows(2) {
        let (a, b) = (w[0], w[1]);
        let hop = m.d(a, b);
        if m.validates_triangle() {
            // the parent of b lies on the root path of a
            let p = tree_parent[b];
            let walked = depth[a] - depth[p] + m.d(p, b);
            if hop > walked + 1e-9 * scale {
                return Err(Error::TriangleViolation {
                    a,
                    c: b,
                    direct: hop,
                    detour: walked,
                });
            }
        }
        weight += hop;
    }
    Ok(HamiltonianPath { order, weight })
}

/// Positions on `[0, 1]` proportional to arc length along the path.
pub fn unfold_to_line(m: &MetricSpace, path: &HamiltonianPath) -> Result<Vec<f64>> {
    if path.order.len() < 2 || !(path.weight > 0.0) {
        return Err(Error::Degenerate(
            "a path needs at least two points to unfold".into(),
        ));
    }
    let mut positions = Vec::with_capacity(path.order.len());
    let mut acc = 0.0;
    positions.push(0.0);
    for w in path.order.windows(2) {
        acc += m.d(w[0], w[1]);
        positions.push(acc / path.weight);
    }
    *positions.last_mut().unwrap() = 1.0;
    Ok(positions)
}
