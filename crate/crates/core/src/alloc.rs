//! Budget allocations: per-edge fractions of a total budget.

use std::collections::{BTreeMap, HashMap};

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::graph::{BudgetGraph, EdgeId};
use crate::tol::Tolerance;

/// Nonnegative per-edge fractions summing to one, plus the total budget `B`.
///
/// The absolute budget on edge `e` is `B * fraction(e)`. Graphs without edges
/// take an empty allocation.
#[derive(Clone, Debug, PartialEq)]
pub struct Allocation {
    fractions: Vec<f64>,
    budget: f64,
}

impl Allocation {
    pub fn new(fractions: Vec<f64>, budget: f64) -> Result<Self> {
        Self::with_tolerance(fractions, budget, Tolerance::default())
    }

    pub fn with_tolerance(fractions: Vec<f64>, budget: f64, tol: Tolerance) -> Result<Self> {
        if !(budget > 0.0) || !budget.is_finite() {
            return Err(Error::InvalidAllocation(format!(
                "budget must be positive, got {budget}"
            )));
        }
        if let Some((e, b)) = fractions
            .iter()
            .enumerate()
            .find(|(_, b)| !(**b >= 0.0) || !b.is_finite())
        {
            return Err(Error::InvalidAllocation(format!(
                "fraction on edge {e} is {b}"
            )));
        }
        let sum: f64 = fractions.iter().sum();
        if !fractions.is_empty() && !tol.eq(sum, 1.0) {
            return Err(Error::InvalidAllocation(format!(
                "fractions sum to {sum}, expected 1"
            )));
        }
        Ok(Self { fractions, budget })
    }

    /// Equal share on each of `m` edges.
    pub fn uniform(m: usize) -> Self {
        Self {
            fractions: vec![1.0 / m as f64; m],
            budget: 1.0,
        }
    }

    /// Normalizes absolute budgets; the total becomes the allocation's budget.
    pub fn from_budgets(budgets: &[f64]) -> Result<Self> {
        let total: f64 = budgets.iter().sum();
        if !(total > 0.0) {
            return Err(Error::InvalidAllocation("total budget is zero".into()));
        }
        Self::new(budgets.iter().map(|b| b / total).collect(), total)
    }

    /// Renormalizes nonnegative weights onto the simplex without a sum check.
    pub(crate) fn normalized(weights: Vec<f64>) -> Self {
        let total: f64 = weights.iter().sum();
        let fractions = if total > 0.0 {
            weights.into_iter().map(|w| w / total).collect()
        } else {
            weights
        };
        Self {
            fractions,
            budget: 1.0,
        }
    }

    pub fn fraction(&self, e: EdgeId) -> f64 {
        self.fractions[e]
    }

    pub fn fractions(&self) -> &[f64] {
        &self.fractions
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    pub fn len(&self) -> usize {
        self.fractions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fractions.is_empty()
    }

    /// Absolute budget on edge `e`.
    pub fn absolute(&self, e: EdgeId) -> f64 {
        self.budget * self.fractions[e]
    }

    pub fn with_budget(mut self, budget: f64) -> Result<Self> {
        if !(budget > 0.0) || !budget.is_finite() {
            return Err(Error::InvalidAllocation(format!(
                "budget must be positive, got {budget}"
            )));
        }
        self.budget = budget;
        Ok(self)
    }

    /// Edges with positive budget.
    pub fn support(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.fractions
            .iter()
            .enumerate()
            .filter(|(_, &b)| b > 0.0)
            .map(|(e, _)| e)
    }

    /// `{"budget": B, "fractions": {"u-v": b, ...}}`, keys sorted. Zero
    /// fractions are kept so the document lists every edge.
    pub fn to_json(&self, g: &BudgetGraph) -> Value {
        let fractions: BTreeMap<String, f64> = (0..self.fractions.len())
            .map(|e| (g.edge_key(e), self.fractions[e]))
            .collect();
        json!({ "budget": self.budget, "fractions": fractions })
    }

    /// Reads the allocation JSON format. Missing edges get zero budget; keys may
    /// name an edge in either orientation. A report carrying an `allocation`
    /// field is accepted too.
    pub fn from_json(g: &BudgetGraph, value: &Value, tol: Tolerance) -> Result<Self> {
        let value = value.get("allocation").unwrap_or(value);
        let budget = match value.get("budget") {
            None => 1.0,
            Some(b) => b
                .as_f64()
                .ok_or_else(|| Error::Json("`budget` must be a number".into()))?,
        };
        let entries: &Map<String, Value> = value
            .get("fractions")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Json("`fractions` must be an object".into()))?;
        let mut keys: HashMap<String, EdgeId> = HashMap::with_capacity(2 * g.edge_count());
        for (e, edge) in g.edges().iter().enumerate() {
            keys.insert(g.edge_key(e), e);
            keys.insert(format!("{}-{}", g.label(edge.v), g.label(edge.u)), e);
        }
        let mut fractions = vec![0.0; g.edge_count()];
        for (key, b) in entries {
            let e = *keys
                .get(key)
                .ok_or_else(|| Error::InvalidAllocation(format!("no edge named {key:?}")))?;
            fractions[e] = b
                .as_f64()
                .ok_or_else(|| Error::Json(format!("fraction for {key:?} must be a number")))?;
        }
        Self::with_tolerance(fractions, budget, tol)
    }

    pub fn from_json_str(g: &BudgetGraph, source: &str, tol: Tolerance) -> Result<Self> {
        let value: Value = serde_json::from_str(source)?;
        Self::from_json(g, &value, tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path() -> BudgetGraph {
        BudgetGraph::parse("a b 1\nb c 1").unwrap()
    }

    #[test]
    fn validates() {
        assert!(Allocation::new(vec![0.5, 0.5], 1.0).is_ok());
        assert!(Allocation::new(vec![0.5, 0.6], 1.0).is_err());
        assert!(Allocation::new(vec![1.5, -0.5], 1.0).is_err());
        assert!(Allocation::new(vec![0.5, 0.5], 0.0).is_err());
        assert!(Allocation::new(vec![], 1.0).is_ok());
        assert!(Allocation::new(vec![0.5, 0.5 + 1e-11], 1.0).is_ok());
    }

    #[test]
    fn from_budgets_normalizes() {
        let a = Allocation::from_budgets(&[1.0, 3.0]).unwrap();
        assert_eq!(a.fractions(), &[0.25, 0.75]);
        assert_eq!(a.budget(), 4.0);
        assert_eq!(a.absolute(1), 3.0);
    }

    #[test]
    fn json_round_trip() {
        let g = path();
        let a = Allocation::new(vec![0.25, 0.75], 2.0).unwrap();
        let v = a.to_json(&g);
        assert_eq!(v["fractions"]["a-b"], 0.25);
        let back = Allocation::from_json(&g, &v, Tolerance::default()).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn json_accepts_reversed_keys_and_missing_edges() {
        let g = path();
        let a = Allocation::from_json_str(&g, r#"{"fractions": {"c-b": 1}}"#, Tolerance::default())
            .unwrap();
        assert_eq!(a.fractions(), &[0.0, 1.0]);
        assert_eq!(a.budget(), 1.0);
        assert!(Allocation::from_json_str(&g, r#"{"fractions": {"a-c": 1}}"#, Tolerance::default())
            .is_err());
    }
}
