//! Undirected graphs with positive edge lengths.
//!
//! Two text formats are accepted by [`BudgetGraph::parse`]:
//!
//! * an edge list, one `<u> <v> <length>` triple per line, `#` starting a comment;
//! * JSON, `{"nodes": [...], "edges": [{"u": .., "v": .., "len": ..}]}`, optionally
//!   wrapped as `{"graph": {...}}`.
//!
//! Vertex labels are mapped to dense ids `0..n` in sorted label order, so the
//! same input always produces the same ids.

use std::collections::{BTreeSet, HashMap};

use serde_json::{json, Value};

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;

/// An undirected edge, stored with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub length: f64,
}

impl Edge {
    /// The endpoint opposite to `x`.
    pub fn other(&self, x: VertexId) -> VertexId {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Clone, Debug)]
pub struct BudgetGraph {
    labels: Vec<String>,
    index: HashMap<String, VertexId>,
    edges: Vec<Edge>,
    adj: Vec<Vec<(VertexId, EdgeId)>>,
}

impl BudgetGraph {
    /// Builds a graph on `n` vertices labelled `"0".."n-1"`.
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId, f64)>,
    {
        let labels = (0..n).map(|i| i.to_string()).collect();
        Self::with_labels(labels, edges)
    }

    /// Builds a graph whose vertex `i` carries `labels[i]`. Ids are kept as given.
    pub fn with_labels<I>(labels: Vec<String>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId, f64)>,
    {
        let n = labels.len();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut index = HashMap::with_capacity(n);
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::Parse {
                    line: 0,
                    message: format!("duplicate vertex label {l:?}"),
                });
            }
        }
        let mut g = Self {
            labels,
            index,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        };
        let mut seen = HashMap::new();
        for (a, b, length) in edges {
            if a >= n {
                return Err(Error::VertexOutOfRange(a));
            }
            if b >= n {
                return Err(Error::VertexOutOfRange(b));
            }
            if a == b {
                return Err(Error::SelfLoop(g.labels[a].clone()));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if !(length > 0.0) || !length.is_finite() {
                return Err(Error::NonPositiveLength {
                    u: g.labels[u].clone(),
                    v: g.labels[v].clone(),
                    length,
                });
            }
            if seen.insert((u, v), ()).is_some() {
                return Err(Error::DuplicateEdge {
                    u: g.labels[u].clone(),
                    v: g.labels[v].clone(),
                });
            }
            let id = g.edges.len();
            g.edges.push(Edge { u, v, length });
            g.adj[u].push((v, id));
            g.adj[v].push((u, id));
        }
        for list in &mut g.adj {
            list.sort_unstable();
        }
        g.check_connected()?;
        Ok(g)
    }

    fn check_connected(&self) -> Result<()> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &(y, _) in &self.adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        match seen.iter().position(|s| !s) {
            Some(v) => Err(Error::Disconnected(self.labels[v].clone())),
            None => Ok(()),
        }
    }

    /// Parses either supported format, picking JSON when the text starts with `{`.
    pub fn parse(source: &str) -> Result<Self> {
        if source.trim_start().starts_with('{') {
            Self::from_json_str(source)
        } else {
            Self::from_edge_list(source)
        }
    }

    pub fn from_edge_list(source: &str) -> Result<Self> {
        let mut raw = Vec::new();
        for (i, line) in source.lines().enumerate() {
            let content = line.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = content.split_whitespace().collect();
            if tokens.is_empty() {
                continue;
            }
            if tokens.len() != 3 {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("expected `<u> <v> <length>`, found {} fields", tokens.len()),
                });
            }
            let length: f64 = tokens[2].parse().map_err(|_| Error::Parse {
                line: i + 1,
                message: format!("invalid length {:?}", tokens[2]),
            })?;
            raw.push((tokens[0].to_string(), tokens[1].to_string(), length));
        }
        Self::from_labelled_edges(BTreeSet::new(), raw)
    }

    pub fn from_json_str(source: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(source)?;
        Self::from_json(&value)
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let value = value.get("graph").unwrap_or(value);
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Json("graph must be an object".into()))?;
        let mut nodes = BTreeSet::new();
        if let Some(list) = obj.get("nodes") {
            let list = list
                .as_array()
                .ok_or_else(|| Error::Json("`nodes` must be an array".into()))?;
            for node in list {
                nodes.insert(json_label(node)?);
            }
        }
        let mut raw = Vec::new();
        if let Some(list) = obj.get("edges") {
            let list = list
                .as_array()
                .ok_or_else(|| Error::Json("`edges` must be an array".into()))?;
            for (i, e) in list.iter().enumerate() {
                let field = |k: &str| {
                    e.get(k)
                        .ok_or_else(|| Error::Json(format!("edge {i} is missing `{k}`")))
                };
                let u = json_label(field("u")?)?;
                let v = json_label(field("v")?)?;
                let len = field("len")?
                    .as_f64()
                    .ok_or_else(|| Error::Json(format!("edge {i}: `len` must be a number")))?;
                raw.push((u, v, len));
            }
        }
        Self::from_labelled_edges(nodes, raw)
    }

    fn from_labelled_edges(
        mut nodes: BTreeSet<String>,
        raw: Vec<(String, String, f64)>,
    ) -> Result<Self> {
        for (u, v, _) in &raw {
            nodes.insert(u.clone());
            nodes.insert(v.clone());
        }
        let labels: Vec<String> = nodes.into_iter().collect();
        let index: HashMap<&str, usize> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        let edges: Vec<_> = raw
            .iter()
            .map(|(u, v, len)| (index[u.as_str()], index[v.as_str()], *len))
            .collect();
        Self::with_labels(labels, edges)
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e]
    }

    /// `(neighbor, edge)` pairs sorted by neighbor id.
    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adj[v]
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex(&self, label: &str) -> Result<VertexId> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    pub fn edge_between(&self, a: VertexId, b: VertexId) -> Option<EdgeId> {
        let list = &self.adj[a];
        list.binary_search_by_key(&b, |&(y, _)| y)
            .ok()
            .map(|i| list[i].1)
    }

    /// Canonical key `label(min id) + "-" + label(max id)`.
    pub fn edge_key(&self, e: EdgeId) -> String {
        let edge = &self.edges[e];
        format!("{}-{}", self.labels[edge.u], self.labels[edge.v])
    }

    pub fn total_length(&self) -> f64 {
        self.edges.iter().map(|e| e.length).sum()
    }

    pub fn is_tree(&self) -> bool {
        self.edges.len() + 1 == self.n()
    }

    /// The spanning subgraph on the listed edges. Edge `i` of the result is
    /// `edges[i]` of `self`.
    pub fn spanning_subgraph(&self, edges: &[EdgeId]) -> Result<Self> {
        Self::with_labels(
            self.labels.clone(),
            edges.iter().map(|&e| {
                let edge = &self.edges[e];
                (edge.u, edge.v, edge.length)
            }),
        )
    }

    /// Same topology with every length multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::with_labels(
            self.labels.clone(),
            self.edges.iter().map(|e| (e.u, e.v, e.length * factor)),
        )
    }

    /// JSON graph document with edges sorted by `(u, v)`.
    pub fn to_json(&self) -> Value {
        let mut order: Vec<EdgeId> = (0..self.edges.len()).collect();
        order.sort_by_key(|&e| (self.edges[e].u, self.edges[e].v));
        let edges: Vec<Value> = order
            .into_iter()
            .map(|e| {
                let edge = &self.edges[e];
                json!({
                    "u": self.labels[edge.u],
                    "v": self.labels[edge.v],
                    "len": edge.length,
                })
            })
            .collect();
        json!({ "nodes": self.labels, "edges": edges })
    }
}

fn json_label(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(Error::Json(format!("vertex label must be a string or number, found {other}"))),
    }
}
