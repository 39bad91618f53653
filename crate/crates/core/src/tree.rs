//! Rooted view of a tree-shaped [`BudgetGraph`].

use crate::error::{Error, Result};
use crate::graph::{BudgetGraph, EdgeId, VertexId};

/// A tree with a designated root.
///
/// `order` lists vertices so that every parent precedes its children; walking
/// it backwards visits children before parents. Children are kept in
/// increasing id order.
#[derive(Clone, Debug)]
pub struct RootedTree {
    graph: BudgetGraph,
    root: VertexId,
    parent: Vec<Option<VertexId>>,
    parent_edge: Vec<Option<EdgeId>>,
    children: Vec<Vec<VertexId>>,
    subtree_size: Vec<usize>,
    order: Vec<VertexId>,
}

impl RootedTree {
    pub fn new(graph: BudgetGraph, root: VertexId) -> Result<Self> {
        let n = graph.n();
        if root >= n {
            return Err(Error::VertexOutOfRange(root));
        }
        if !graph.is_tree() {
            return Err(Error::NotATree(format!(
                "{} vertices but {} edges",
                n,
                graph.edge_count()
            )));
        }
        let mut parent = vec![None; n];
        let mut parent_edge = vec![None; n];
        let mut children = vec![Vec::new(); n];
        let mut order = Vec::with_capacity(n);
        let mut visited = vec![false; n];
        visited[root] = true;
        order.push(root);
        let mut head = 0;
        while head < order.len() {
            let x = order[head];
            head += 1;
            for &(y, e) in graph.neighbors(x) {
                if Some(y) == parent[x] {
                    continue;
                }
                if visited[y] {
                    return Err(Error::NotATree("cycle detected".into()));
                }
                visited[y] = true;
                parent[y] = Some(x);
                parent_edge[y] = Some(e);
                children[x].push(y);
                order.push(y);
            }
        }
        // connected graphs with n - 1 edges always reach every vertex
        debug_assert_eq!(order.len(), n);
        let mut subtree_size = vec![1; n];
        for &v in order.iter().rev() {
            if let Some(p) = parent[v] {
                subtree_size[p] += subtree_size[v];
            }
        }
        Ok(Self {
            graph,
            root,
            parent,
            parent_edge,
            children,
            subtree_size,
            order,
        })
    }

    /// Parses a graph and roots it at the vertex with the given label.
    pub fn parse(source: &str, root: &str) -> Result<Self> {
        let g = BudgetGraph::parse(source)?;
        let r = g.vertex(root)?;
        Self::new(g, r)
    }

    /// Same tree, rooted elsewhere.
    pub fn reroot(&self, root: VertexId) -> Result<Self> {
        Self::new(self.graph.clone(), root)
    }

    pub fn graph(&self) -> &BudgetGraph {
        &self.graph
    }

    pub fn into_graph(self) -> BudgetGraph {
        self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        self.parent[v]
    }

    pub fn parent_edge(&self, v: VertexId) -> Option<EdgeId> {
        self.parent_edge[v]
    }

    /// Length of the edge to the parent, `0` at the root.
    pub fn parent_length(&self, v: VertexId) -> f64 {
        self.parent_edge[v].map_or(0.0, |e| self.graph.edge(e).length)
    }

    pub fn children(&self, v: VertexId) -> &[VertexId] {
        &self.children[v]
    }

    pub fn subtree_size(&self, v: VertexId) -> usize {
        self.subtree_size[v]
    }

    pub fn is_leaf(&self, v: VertexId) -> bool {
        self.children[v].is_empty()
    }

    /// Parents before children.
    pub fn top_down(&self) -> &[VertexId] {
        &self.order
    }

    pub fn leaves(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.n()).filter(move |&v| self.is_leaf(v) && (v != self.root || self.n() == 1))
    }

    /// Number of edges on the path from the root to `v`, for every vertex.
    pub fn depths(&self) -> Vec<usize> {
        let mut depth = vec![0; self.n()];
        for &v in &self.order {
            if let Some(p) = self.parent[v] {
                depth[v] = depth[p] + 1;
            }
        }
        depth
    }

    /// Height in edges.
    pub fn height(&self) -> usize {
        self.depths().into_iter().max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structure() {
        let t = RootedTree::parse("r v 1\nv a 1\nv b 1", "r").unwrap();
        let r = t.root();
        let v = t.graph().vertex("v").unwrap();
        assert_eq!(t.children(r), &[v]);
        assert_eq!(t.subtree_size(r), 4);
        assert_eq!(t.subtree_size(v), 3);
        assert_eq!(t.children(v).len(), 2);
        assert_eq!(t.leaves().count(), 2);
        assert_eq!(t.height(), 2);
        for x in 0..t.n() {
            let sum: usize = t.children(x).iter().map(|&c| t.subtree_size(c)).sum();
            assert_eq!(t.subtree_size(x), 1 + sum);
        }
    }

    #[test]
    fn rejects_non_trees() {
        let g = BudgetGraph::parse("a b 1\nb c 1\na c 1").unwrap();
        assert!(matches!(RootedTree::new(g, 0), Err(Error::NotATree(_))));
        let g = BudgetGraph::parse("a b 1").unwrap();
        assert!(matches!(RootedTree::new(g, 5), Err(Error::VertexOutOfRange(5))));
    }

    #[test]
    fn single_vertex() {
        let g = BudgetGraph::new(1, []).unwrap();
        let t = RootedTree::new(g, 0).unwrap();
        assert_eq!(t.leaves().collect::<Vec<_>>(), vec![0]);
        assert_eq!(t.height(), 0);
    }

    #[test]
    fn deep_path_does_not_recurse() {
        let n = 200_000;
        let g = BudgetGraph::new(n, (1..n).map(|i| (i - 1, i, 1.0))).unwrap();
        let t = RootedTree::new(g, 0).unwrap();
        assert_eq!(t.height(), n - 1);
        assert_eq!(t.subtree_size(0), n);
    }
}
