//! Reference solvers for small general graphs.
//!
//! [`numeric_optimize_radius`] and [`numeric_optimize_median`] minimize the
//! objectives directly over the budget simplex, with no structural insight.
//! [`exact_small_graph_radius`] uses the fact that some optimal allocation is
//! supported on a spanning tree: it solves every spanning tree exactly and
//! keeps the best.

mod enumerate;
mod numeric;

pub use enumerate::{
    exact_small_graph_median, exact_small_graph_radius, for_each_spanning_tree,
    spanning_tree_count, ExactOutcome, DEFAULT_TREE_CAP,
};
pub use numeric::{
    numeric_optimize_from, numeric_optimize_median, numeric_optimize_radius, project_simplex,
    subgradient, OracleConfig, OracleOutcome,
};
