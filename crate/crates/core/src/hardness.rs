//! Set-cover gadgets for the rooted budget radius problem.
//!
//! Every set `S_j` of a set-cover instance with sets of size at most three
//! becomes one *set-node* per nonempty subset `T` of `S_j`. The set-node is
//! joined to the root by an edge of length 1 and to the element-node of each
//! member of `T` by an edge whose length depends on `|T|` (`x`, `y` or `z`).
//! The lengths are tuned so that a star serving `c` elements needs budget
//! exactly `2c + 2` for radius 1; covering all elements at radius 1 then
//! costs `sum_j (2^|S_j| - 1) + 2|E| + (number of sets used)`.

use std::collections::{BTreeMap, HashMap};

use serde_json::{json, Value};

use crate::alloc::Allocation;
use crate::error::{Error, Result};
use crate::graph::{BudgetGraph, EdgeId, VertexId};

/// Spoke lengths `x`, `y`, `z` for set-nodes serving 1, 2 and 3 elements.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GadgetConstants {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Default for GadgetConstants {
    fn default() -> Self {
        Self {
            x: 1.0,
            y: (6f64.sqrt() - 1.0).powi(2) / 2.0,
            z: (8f64.sqrt() - 1.0).powi(2) / 3.0,
        }
    }
}

impl GadgetConstants {
    /// Spoke length for a set-node serving `c` elements.
    pub fn spoke(&self, c: usize) -> f64 {
        match c {
            1 => self.x,
            2 => self.y,
            3 => self.z,
            _ => panic!("set-nodes serve one to three elements, got {c}"),
        }
    }
}

/// Optimal allocation of a star: one center edge of length 1 from the root,
/// then `k` spokes of length `x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StarOptimum {
    pub radius: f64,
    /// Fraction of the budget on the center edge.
    pub center: f64,
    /// Fraction on each spoke.
    pub spoke: f64,
}

/// Closed form: radius `(1 + sqrt(x k))^2 / B`, center fraction
/// `1 / (1 + sqrt(x k))`, the rest split evenly over the spokes.
pub fn star_optimal_radius(x: f64, k: usize, budget: f64) -> Result<StarOptimum> {
    if !(x > 0.0) || k == 0 || !(budget > 0.0) {
        return Err(Error::InvalidInstance(format!(
            "star needs x > 0, k >= 1 and a positive budget (x = {x}, k = {k}, B = {budget})"
        )));
    }
    let s = (x * k as f64).sqrt();
    let center = 1.0 / (1.0 + s);
    Ok(StarOptimum {
        radius: (1.0 + s) * (1.0 + s) / budget,
        center,
        spoke: (1.0 - center) / k as f64,
    })
}

/// A set-cover instance whose sets have one to three elements.
#[derive(Clone, Debug, PartialEq)]
pub struct SetCoverInstance {
    universe: Vec<String>,
    /// Members of each set as universe indices, increasing.
    sets: Vec<Vec<usize>>,
}

impl SetCoverInstance {
    pub fn new(universe: Vec<String>, sets: Vec<Vec<String>>) -> Result<Self> {
        if universe.is_empty() || sets.is_empty() {
            return Err(Error::InvalidInstance("empty instance".into()));
        }
        let mut index = HashMap::new();
        for (i, e) in universe.iter().enumerate() {
            if index.insert(e.clone(), i).is_some() {
                return Err(Error::InvalidInstance(format!("element {e} listed twice")));
            }
        }
        let mut covered = vec![false; universe.len()];
        let mut resolved = Vec::with_capacity(sets.len());
        for (j, set) in sets.iter().enumerate() {
            if set.is_empty() || set.len() > 3 {
                return Err(Error::InvalidInstance(format!(
                    "set {j} has {} elements, expected 1 to 3",
                    set.len()
                )));
            }
            let mut members = Vec::with_capacity(set.len());
            for e in set {
                let &i = index.get(e).ok_or_else(|| {
                    Error::InvalidInstance(format!("set {j} names unknown element {e}"))
                })?;
                if members.contains(&i) {
                    return Err(Error::InvalidInstance(format!("set {j} repeats element {e}")));
                }
                members.push(i);
                covered[i] = true;
            }
            members.sort_unstable();
            resolved.push(members);
        }
        if let Some(i) = covered.iter().position(|c| !c) {
            return Err(Error::InvalidInstance(format!(
                "element {} is in no set",
                universe[i]
            )));
        }
        Ok(Self {
            universe,
            sets: resolved,
        })
    }

    /// `{"universe": [...], "sets": [[...], ...]}`; elements may be numbers
    /// or strings.
    pub fn from_json(value: &Value) -> Result<Self> {
        let universe = value
            .get("universe")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::InvalidInstance("missing \"universe\" array".into()))?
            .iter()
            .map(element_id)
            .collect::<Result<Vec<_>>>()?;
        let sets = value
            .get("sets")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::InvalidInstance("missing \"sets\" array".into()))?
            .iter()
            .map(|s| {
                s.as_array()
                    .ok_or_else(|| Error::InvalidInstance("each set must be an array".into()))?
                    .iter()
                    .map(element_id)
                    .collect()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(universe, sets)
    }

    pub fn from_json_str(source: &str) -> Result<Self> {
        Self::from_json(&serde_json::from_str(source)?)
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn set_count(&self) -> usize {
        self.sets.len()
    }

    /// Members of set `j` as universe indices.
    pub fn set(&self, j: usize) -> &[usize] {
        &self.sets[j]
    }

    /// Number of set-nodes, `sum_j (2^|S_j| - 1)`.
    pub fn set_node_count(&self) -> usize {
        self.sets.iter().map(|s| (1 << s.len()) - 1).sum()
    }

    /// Budget for radius 1 when `used` sets cover the universe.
    pub fn expected_cost(&self, used: usize) -> f64 {
        (self.set_node_count() + 2 * self.universe.len() + used) as f64
    }
}

fn element_id(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(Error::InvalidInstance(format!(
            "element ids must be numbers or strings, got {other}"
        ))),
    }
}

/// What a vertex of the gadget graph stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NodeRole {
    Root,
    Element(usize),
    /// Set-node of set `set` serving the listed universe indices.
    SetNode { set: usize, covers: Vec<usize> },
}

/// The gadget graph and its bookkeeping.
#[derive(Clone, Debug)]
pub struct ReductionOutput {
    pub graph: BudgetGraph,
    pub root: VertexId,
    pub roles: Vec<NodeRole>,
    pub constants: GadgetConstants,
    pub instance: SetCoverInstance,
    /// Set-node vertex for each `(set, covered subset)`.
    set_nodes: BTreeMap<(usize, Vec<usize>), VertexId>,
}

/// Builds the gadget graph. Vertex order and labels are canonical: `r`, then
/// `e<id>` per element, then `s<j>_<id>.<id>...` per set and subset (subsets
/// by bitmask over the set's members).
pub fn reduce_setcover(sc: &SetCoverInstance) -> Result<ReductionOutput> {
    let constants = GadgetConstants::default();
    let mut labels = vec!["r".to_string()];
    let mut roles = vec![NodeRole::Root];
    for (i, e) in sc.universe.iter().enumerate() {
        labels.push(format!("e{e}"));
        roles.push(NodeRole::Element(i));
    }
    let element_node = |i: usize| 1 + i;
    let mut edges = Vec::new();
    let mut set_nodes = BTreeMap::new();
    for (j, set) in sc.sets.iter().enumerate() {
        for mask in 1usize..(1 << set.len()) {
            let covers: Vec<usize> = (0..set.len())
                .filter(|b| mask & (1 << b) != 0)
                .map(|b| set[b])
                .collect();
            let v = labels.len();
            let names: Vec<&str> = covers.iter().map(|&i| sc.universe[i].as_str()).collect();
            labels.push(format!("s{j}_{}", names.join(".")));
            edges.push((0, v, 1.0));
            let spoke = constants.spoke(covers.len());
            for &i in &covers {
                edges.push((v, element_node(i), spoke));
            }
            set_nodes.insert((j, covers.clone()), v);
            roles.push(NodeRole::SetNode { set: j, covers });
        }
    }
    let graph = BudgetGraph::with_labels(labels, edges)?;
    Ok(ReductionOutput {
        graph,
        root: 0,
        roles,
        constants,
        instance: sc.clone(),
        set_nodes,
    })
}

impl ReductionOutput {
    pub fn set_node(&self, set: usize, covers: &[usize]) -> Option<VertexId> {
        self.set_nodes.get(&(set, covers.to_vec())).copied()
    }

    pub fn roles_json(&self) -> Value {
        let universe = self.instance.universe();
        let map: serde_json::Map<String, Value> = self
            .roles
            .iter()
            .enumerate()
            .map(|(v, role)| {
                let entry = match role {
                    NodeRole::Root => json!({ "role": "root" }),
                    NodeRole::Element(i) => json!({ "role": "element", "element": universe[*i] }),
                    NodeRole::SetNode { set, covers } => json!({
                        "role": "set",
                        "set": set,
                        "covers": covers.iter().map(|&i| &universe[i]).collect::<Vec<_>>(),
                    }),
                };
                (self.graph.label(v).to_string(), entry)
            })
            .collect();
        Value::Object(map)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "graph": self.graph.to_json(),
            "root": self.graph.label(self.root),
            "roles": self.roles_json(),
            "constants": { "x": self.constants.x, "y": self.constants.y, "z": self.constants.z },
            "nodes": self.graph.n(),
            "edges": self.graph.edge_count(),
        })
    }
}

/// Selected sets and the elements each one is responsible for.
#[derive(Clone, Debug, PartialEq)]
pub struct Cover {
    pub assignments: Vec<(usize, Vec<String>)>,
}

impl Cover {
    /// `{"cover": [{"set": j, "elements": [...]}, ...]}`.
    pub fn from_json(value: &Value) -> Result<Self> {
        let items = value
            .get("cover")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::InvalidCover("missing \"cover\" array".into()))?;
        let assignments = items
            .iter()
            .map(|item| {
                let set = item
                    .get("set")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| Error::InvalidCover("each entry needs a \"set\" index".into()))?
                    as usize;
                let elements = item
                    .get("elements")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::InvalidCover("each entry needs \"elements\"".into()))?
                    .iter()
                    .map(|e| element_id(e).map_err(|err| Error::InvalidCover(err.to_string())))
                    .collect::<Result<Vec<_>>>()?;
                Ok((set, elements))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { assignments })
    }

    pub fn from_json_str(source: &str) -> Result<Self> {
        Self::from_json(&serde_json::from_str(source)?)
    }
}

/// Witness allocation for a cover at radius 1.
#[derive(Clone, Debug)]
pub struct Witness {
    /// Fractions of `cost`; the allocation's budget is `cost`.
    pub allocation: Allocation,
    pub cost: f64,
    pub per_set_costs: Vec<f64>,
    pub used_sets: usize,
}

impl Witness {
    pub fn to_json(&self, red: &ReductionOutput) -> Value {
        json!({
            "cost": self.cost,
            "used_sets": self.used_sets,
            "per_set_costs": self.per_set_costs,
            "expected_cost": red.instance.expected_cost(self.used_sets),
            "allocation": self.allocation.to_json(&red.graph),
        })
    }
}

/// Builds the radius-1 witness: every set-node that serves nobody keeps
/// budget 1 on its root edge, and the set-node serving exactly the assigned
/// elements of a used set gets the optimal star allocation for radius 1.
pub fn cover_to_allocation(red: &ReductionOutput, cover: &Cover) -> Result<Witness> {
    let sc = &red.instance;
    let index: HashMap<&str, usize> = sc
        .universe
        .iter()
        .enumerate()
        .map(|(i, e)| (e.as_str(), i))
        .collect();
    let mut owner: Vec<Option<usize>> = vec![None; sc.universe.len()];
    let mut used: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (set, elements) in &cover.assignments {
        let set = *set;
        if set >= sc.set_count() {
            return Err(Error::InvalidCover(format!("set {set} does not exist")));
        }
        if used.contains_key(&set) {
            return Err(Error::InvalidCover(format!("set {set} listed twice")));
        }
        if elements.is_empty() {
            return Err(Error::InvalidCover(format!("set {set} covers nothing")));
        }
        let mut members = Vec::with_capacity(elements.len());
        for e in elements {
            let &i = index
                .get(e.as_str())
                .ok_or_else(|| Error::InvalidCover(format!("unknown element {e}")))?;
            if !sc.set(set).contains(&i) {
                return Err(Error::InvalidCover(format!("set {set} does not contain {e}")));
            }
            if let Some(prev) = owner[i] {
                return Err(Error::InvalidCover(format!(
                    "element {e} assigned to sets {prev} and {set}"
                )));
            }
            owner[i] = Some(set);
            members.push(i);
        }
        members.sort_unstable();
        used.insert(set, members);
    }
    if let Some(i) = owner.iter().position(Option::is_none) {
        return Err(Error::InvalidCover(format!(
            "element {} is not covered",
            sc.universe[i]
        )));
    }

    let g = &red.graph;
    let mut budgets = vec![0.0; g.edge_count()];
    let mut per_set_costs = vec![0.0; sc.set_count()];
    let root_edge = |v: VertexId| -> EdgeId { g.edge_between(red.root, v).expect("root edge") };
    for (v, role) in red.roles.iter().enumerate() {
        let NodeRole::SetNode { set, covers } = role else {
            continue;
        };
        let serving = used.get(set).filter(|m| *m == covers);
        match serving {
            None => {
                budgets[root_edge(v)] = 1.0;
                per_set_costs[*set] += 1.0;
            }
            Some(members) => {
                let c = members.len();
                let spoke_len = red.constants.spoke(c);
                let s = (spoke_len * c as f64).sqrt();
                let total = (1.0 + s) * (1.0 + s);
                budgets[root_edge(v)] = 1.0 + s;
                for &i in members {
                    let e = g.edge_between(v, 1 + i).expect("spoke edge");
                    budgets[e] = (total - (1.0 + s)) / c as f64;
                }
                per_set_costs[*set] += total;
            }
        }
    }
    let cost: f64 = budgets.iter().sum();
    Ok(Witness {
        allocation: Allocation::from_budgets(&budgets)?,
        cost,
        per_set_costs,
        used_sets: used.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::evaluate_radius;

    fn instance(sets: &[&[u32]]) -> SetCoverInstance {
        let mut universe: Vec<u32> = sets.iter().flat_map(|s| s.iter().copied()).collect();
        universe.sort_unstable();
        universe.dedup();
        SetCoverInstance::new(
            universe.iter().map(u32::to_string).collect(),
            sets.iter()
                .map(|s| s.iter().map(u32::to_string).collect())
                .collect(),
        )
        .unwrap()
    }

    fn cover(entries: &[(usize, &[u32])]) -> Cover {
        Cover {
            assignments: entries
                .iter()
                .map(|(j, es)| (*j, es.iter().map(u32::to_string).collect()))
                .collect(),
        }
    }

    #[test]
    fn gadget_constants_hit_even_costs() {
        let k = GadgetConstants::default();
        for (c, want) in [(1, 4.0), (2, 6.0), (3, 8.0)] {
            let star = star_optimal_radius(k.spoke(c), c, 1.0).unwrap();
            assert!((star.radius - want).abs() < 1e-12);
            assert!((star.center + c as f64 * star.spoke - 1.0).abs() < 1e-15);
        }
        let b = star_optimal_radius(1.0, 2, 1.0).unwrap();
        assert!((b.radius - (3.0 + 2.0 * 2f64.sqrt())).abs() < 1e-12);
        assert!(star_optimal_radius(0.0, 1, 1.0).is_err());
    }

    #[test]
    fn single_triple() {
        let sc = instance(&[&[1, 2, 3]]);
        let red = reduce_setcover(&sc).unwrap();
        assert_eq!(red.graph.n(), 11);
        assert_eq!(red.graph.edge_count(), 19);
        assert_eq!(red.graph.label(10), "s0_1.2.3");
        let w = cover_to_allocation(&red, &cover(&[(0, &[1, 2, 3])])).unwrap();
        assert!((w.cost - 14.0).abs() < 1e-12);
        let r = evaluate_radius(&red.graph, &w.allocation, red.root);
        assert!((r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn per_set_costs_follow_coverage() {
        let sc = instance(&[&[1, 2, 3], &[3, 4, 5], &[1, 4, 6], &[2, 5, 6]]);
        let red = reduce_setcover(&sc).unwrap();
        let w = cover_to_allocation(
            &red,
            &cover(&[(0, &[1, 2, 3]), (1, &[4, 5]), (3, &[6])]),
        )
        .unwrap();
        for (got, want) in w.per_set_costs.iter().zip([14.0, 12.0, 7.0, 10.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!((w.cost - sc.expected_cost(3)).abs() < 1e-12);
        let r = evaluate_radius(&red.graph, &w.allocation, red.root);
        assert!((r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn small_sets_get_restricted_gadgets() {
        let sc = instance(&[&[1], &[1, 2]]);
        let red = reduce_setcover(&sc).unwrap();
        assert_eq!(red.graph.n(), 1 + 2 + 1 + 3);
        assert_eq!(red.graph.edge_count(), 2 + 3 + 4);
        let w = cover_to_allocation(&red, &cover(&[(1, &[1, 2])])).unwrap();
        assert!((w.cost - sc.expected_cost(1)).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(SetCoverInstance::new(vec![], vec![]).is_err());
        let big = vec!["1".into(), "2".into(), "3".into(), "4".into()];
        assert!(SetCoverInstance::new(big.clone(), vec![big]).is_err());
        assert!(SetCoverInstance::new(vec!["1".into(), "2".into()], vec![vec!["1".into()]]).is_err());
        let sc = instance(&[&[1, 2], &[2, 3]]);
        let red = reduce_setcover(&sc).unwrap();
        assert!(cover_to_allocation(&red, &cover(&[(0, &[1, 2])])).is_err());
        assert!(cover_to_allocation(&red, &cover(&[(0, &[1, 3]), (1, &[2])])).is_err());
        assert!(cover_to_allocation(&red, &cover(&[(0, &[1, 2]), (1, &[2, 3])])).is_err());
        assert!(cover_to_allocation(&red, &cover(&[(5, &[1])])).is_err());
    }

    #[test]
    fn json_round_trip() {
        let sc = SetCoverInstance::from_json_str(r#"{"universe":[1,2,"c"],"sets":[[1,2],["c",2]]}"#)
            .unwrap();
        assert_eq!(sc.universe(), &["1", "2", "c"]);
        let red = reduce_setcover(&sc).unwrap();
        let roles = red.roles_json();
        assert_eq!(roles["r"]["role"], "root");
        assert_eq!(roles["s1_2.c"]["covers"], json!(["2", "c"]));
        let c = Cover::from_json_str(r#"{"cover":[{"set":0,"elements":[1]},{"set":1,"elements":[2,"c"]}]}"#)
            .unwrap();
        let w = cover_to_allocation(&red, &c).unwrap();
        assert!((w.cost - sc.expected_cost(2)).abs() < 1e-12);
    }
}
