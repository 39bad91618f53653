use serde_json::{json, Value};

use crate::alloc::Allocation;
use crate::eval::{median_of, radius_of, weighted_distances};
use crate::graph::{BudgetGraph, VertexId};
use crate::tol::Tolerance;

/// Which objective a report refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Objective {
    /// Largest weighted distance from the root.
    Radius,
    /// Sum of weighted distances from the root.
    Median,
}

impl Objective {
    pub fn name(self) -> &'static str {
        match self {
            Objective::Radius => "radius",
            Objective::Median => "median",
        }
    }

    pub(crate) fn of(self, dist: &[f64]) -> f64 {
        match self {
            Objective::Radius => radius_of(dist),
            Objective::Median => median_of(dist),
        }
    }
}

/// Result of a solver: objective value, the allocation achieving it, and the
/// weighted distances from `root` under that allocation (normalized budget).
#[derive(Clone, Debug)]
pub struct SolveReport {
    pub kind: Objective,
    pub objective: f64,
    pub allocation: Allocation,
    pub distances: Vec<f64>,
    pub root: VertexId,
    pub lower_bound: Option<f64>,
    pub ratio_certificate: Option<f64>,
}

impl SolveReport {
    /// Builds a report by evaluating `allocation`; the objective is recomputed,
    /// never trusted from the caller.
    pub fn evaluated(
        g: &BudgetGraph,
        kind: Objective,
        allocation: Allocation,
        root: VertexId,
    ) -> Self {
        let distances = weighted_distances(g, &allocation, root);
        Self {
            kind,
            objective: kind.of(&distances),
            allocation,
            distances,
            root,
            lower_bound: None,
            ratio_certificate: None,
        }
    }

    /// Median objective divided by the vertex count. Only meaningful for
    /// [`Objective::Median`].
    pub fn average(&self) -> f64 {
        self.objective / self.distances.len() as f64
    }

    /// Re-evaluates the allocation on `g` and compares with `objective`.
    pub fn is_consistent(&self, g: &BudgetGraph, tol: Tolerance) -> bool {
        let dist = weighted_distances(g, &self.allocation, self.root);
        tol.eq(self.kind.of(&dist), self.objective)
    }

    /// JSON report. `budget` rescales objectives and distances (`value / B`)
    /// and is recorded in the allocation block.
    pub fn to_json(&self, g: &BudgetGraph, budget: f64) -> Value {
        let alloc = self
            .allocation
            .clone()
            .with_budget(budget)
            .unwrap_or_else(|_| self.allocation.clone());
        let scale = self.allocation.budget() / alloc.budget();
        let distances: serde_json::Map<String, Value> = self
            .distances
            .iter()
            .enumerate()
            .map(|(v, &d)| (g.label(v).to_string(), number(d * scale)))
            .collect();
        let mut out = json!({
            "objective": self.kind.name(),
            "root": g.label(self.root),
            "budget": alloc.budget(),
            "allocation": alloc.to_json(g),
            "distances": distances,
        });
        let value = self.objective * scale;
        match self.kind {
            Objective::Radius => out["radius"] = number(value),
            Objective::Median => {
                out["sum"] = number(value);
                out["average"] = number(value / g.n() as f64);
            }
        }
        if let Some(lb) = self.lower_bound {
            out["lower_bound"] = number(lb * scale);
        }
        if let Some(r) = self.ratio_certificate {
            out["ratio_certificate"] = number(r);
        }
        out
    }
}

/// Finite floats as JSON numbers, infinities as the strings `"inf"`/`"-inf"`.
pub fn number(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}
