//! Optimal budget allocation over the edges of a graph.
//!
//! An edge of length `l` that receives budget `b` gets weight `l / b`. Given a
//! total budget, the crate finds allocations minimizing the weighted radius
//! (largest distance from a root) or the weighted median (sum of distances
//! from a root):
//!
//! * exactly on trees, for one root or for every root at once ([`radius`],
//!   [`median`]);
//! * within `2 * ceil(log2 n)^2` of optimal for the radius on complete metric
//!   graphs ([`metric`]);
//! * numerically or by exhaustive spanning-tree search on small general
//!   graphs ([`oracle`]).
//!
//! [`hardness`] builds the set-cover gadget graphs that make the general
//! radius problem hard, together with witness allocations.
//!
//! ```
//! use budget_graph::{solve_rooted_radius, RootedTree};
//!
//! let t = RootedTree::parse("r v 1\nv a 1\nv b 1", "r").unwrap();
//! let report = solve_rooted_radius(&t);
//! assert!((report.objective - (3.0 + 2.0 * 2f64.sqrt())).abs() < 1e-12);
//! ```

pub mod alloc;
pub mod error;
pub mod eval;
pub mod graph;
pub mod hardness;
pub mod median;
pub mod metric;
pub mod oracle;
pub mod radius;
pub mod report;
mod split;
pub mod tol;
pub mod tree;

pub use alloc::Allocation;
pub use error::{Error, Result};
pub use eval::{
    dijkstra, edge_weight, edge_weights, evaluate_median, evaluate_radius, weighted_distances,
    MedianValue, ShortestPaths,
};
pub use graph::{BudgetGraph, Edge, EdgeId, VertexId};
pub use median::{
    solve_all_roots_median, solve_rooted_median, solve_unrooted_median, unweighted_medians,
    MedianDp, UnrootedMedian,
};
pub use radius::{
    all_roots_radius_values, radius_lower_bound, solve_all_roots_radius, solve_rooted_radius,
    AllRootsRadius, RadiusDp,
};
pub use report::{Objective, SolveReport};
pub use tol::Tolerance;
pub use tree::RootedTree;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/model.md")]
    mod model {}
    #[doc = include_str!("../../../book/src/tree-radius.md")]
    mod tree_radius {}
    #[doc = include_str!("../../../book/src/rerooting.md")]
    mod rerooting {}
    #[doc = include_str!("../../../book/src/median.md")]
    mod median {}
    #[doc = include_str!("../../../book/src/approximation.md")]
    mod approximation {}
    #[doc = include_str!("../../../book/src/hardness.md")]
    mod hardness {}
    #[doc = include_str!("../../../book/src/oracles.md")]
    mod oracles {}
}
