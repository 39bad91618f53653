//! Budget radius on complete graphs induced by a finite metric.
//!
//! The pipeline in [`approx_metric_radius`] builds a minimum spanning tree,
//! shortcuts its doubled preorder walk into a Hamiltonian path, unfolds that
//! path onto `[0, 1]`, builds a balanced search tree over the unfolded points
//! and solves the budget radius on that tree exactly.

mod approx;
mod tour;

pub use approx::{
    approx_metric_radius, balanced_tree, level_allocation, ratio_bound, ApproxReport,
};
pub use tour::{hamiltonian_path, mst, unfold_to_line, HamiltonianPath, SpanningTree};

use crate::error::{Error, Result};
use crate::graph::BudgetGraph;

/// A finite metric stored as a dense symmetric distance matrix.
#[derive(Clone, Debug)]
pub struct MetricSpace {
    n: usize,
    dist: Vec<f64>,
    validate_triangle: bool,
}

impl MetricSpace {
    /// Checks symmetry, a zero diagonal and positive off-diagonal entries;
    /// the triangle inequality too when `validate_triangle` is set.
    pub fn from_matrix(rows: Vec<Vec<f64>>, validate_triangle: bool) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidMetric("no points".into()));
        }
        let mut dist = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMetric(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            dist.extend_from_slice(row);
        }
        let scale = dist.iter().copied().fold(0.0, f64::max);
        let slack = 1e-9 * scale;
        for i in 0..n {
            if dist[i * n + i] != 0.0 {
                return Err(Error::InvalidMetric(format!("d({i},{i}) is not zero")));
            }
            for j in (i + 1)..n {
                let (a, b) = (dist[i * n + j], dist[j * n + i]);
                if !(a > 0.0) || !a.is_finite() {
                    return Err(Error::InvalidMetric(format!("d({i},{j}) = {a} is not positive")));
                }
                if (a - b).abs() > slack {
                    return Err(Error::InvalidMetric(format!("d({i},{j}) != d({j},{i})")));
                }
                dist[j * n + i] = a;
            }
        }
        let m = Self {
            n,
            dist,
            validate_triangle,
        };
        if validate_triangle {
            m.check_triangle()?;
        }
        Ok(m)
    }

    /// Euclidean distances between points of equal dimension.
    pub fn from_points(points: &[Vec<f64>]) -> Result<Self> {
        let n = points.len();
        if n == 0 {
            return Err(Error::InvalidMetric("no points".into()));
        }
        let dim = points[0].len();
        if let Some(i) = points.iter().position(|p| p.len() != dim) {
            return Err(Error::InvalidMetric(format!(
                "point {i} has dimension {}, expected {dim}",
                points[i].len()
            )));
        }
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = points[i]
                    .iter()
                    .zip(&points[j])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                if !(d > 0.0) || !d.is_finite() {
                    return Err(Error::InvalidMetric(format!(
                        "points {i} and {j} coincide or are not finite"
                    )));
                }
                dist[i * n + j] = d;
                dist[j * n + i] = d;
            }
        }
        Ok(Self {
            n,
            dist,
            validate_triangle: true,
        })
    }

    /// Rows of comma-separated coordinates. Blank lines and `#` comments are
    /// skipped, as is a non-numeric first row (a header).
    pub fn from_points_csv(source: &str) -> Result<Self> {
        Self::from_points(&parse_csv(source)?)
    }

    /// A square comma-separated distance matrix.
    pub fn from_matrix_csv(source: &str, validate_triangle: bool) -> Result<Self> {
        Self::from_matrix(parse_csv(source)?, validate_triangle)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    pub fn validates_triangle(&self) -> bool {
        self.validate_triangle
    }

    fn check_triangle(&self) -> Result<()> {
        let n = self.n;
        let scale = self.dist.iter().copied().fold(0.0, f64::max);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let detour = self.d(i, j) + self.d(j, k);
                    if self.d(i, k) > detour + 1e-9 * scale {
                        return Err(Error::TriangleViolation {
                            a: i,
                            c: k,
                            direct: self.d(i, k),
                            detour,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// The complete graph on the points, vertex `i` labelled `"i"`, edges in
    /// lexicographic `(i, j)` order.
    pub fn complete_graph(&self) -> Result<BudgetGraph> {
        let n = self.n;
        let labels = (0..n).map(|i| i.to_string()).collect();
        let edges = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j)));
        BudgetGraph::with_labels(labels, edges.map(|(i, j)| (i, j, self.d(i, j))))
    }
}

fn parse_csv(source: &str) -> Result<Vec<Vec<f64>>> {
    let mut rows = Vec::new();
    let mut first = true;
    for (i, line) in source.lines().enumerate() {
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> =
            content.split(',').map(|f| f.trim().parse::<f64>()).collect();
        match parsed {
            Ok(row) => rows.push(row),
            Err(_) if first => {}
            Err(_) => {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("non-numeric row {content:?}"),
                })
            }
        }
        first = false;
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_validation() {
        let ok = vec![vec![0.0, 1.0, 1.0], vec![1.0, 0.0, 1.0], vec![1.0, 1.0, 0.0]];
        assert!(MetricSpace::from_matrix(ok, true).is_ok());
        let asym = vec![vec![0.0, 1.0], vec![2.0, 0.0]];
        assert!(MetricSpace::from_matrix(asym, false).is_err());
        let zero = vec![vec![0.0, 0.0], vec![0.0, 0.0]];
        assert!(MetricSpace::from_matrix(zero, false).is_err());
        let bad = vec![vec![0.0, 1.0, 5.0], vec![1.0, 0.0, 1.0], vec![5.0, 1.0, 0.0]];
        assert!(matches!(
            MetricSpace::from_matrix(bad.clone(), true),
            Err(Error::TriangleViolation { .. })
        ));
        assert!(MetricSpace::from_matrix(bad, false).is_ok());
    }

    #[test]
    fn points_and_csv() {
        let m = MetricSpace::from_points_csv("x,y\n0,0\n3,4\n# c\n\n6,8\n").unwrap();
        assert_eq!(m.n(), 3);
        assert_eq!(m.d(0, 1), 5.0);
        assert_eq!(m.d(0, 2), 10.0);
        assert!(MetricSpace::from_points_csv("0,0\n0,0").is_err());
        assert!(MetricSpace::from_points_csv("0,0\n1").is_err());
        assert!(MetricSpace::from_points_csv("0,0\nx,1").is_err());
        let m = MetricSpace::from_matrix_csv("0,2\n2,0", true).unwrap();
        assert_eq!(m.d(1, 0), 2.0);
    }

    #[test]
    fn complete_graph_edges() {
        let m = MetricSpace::from_points(&[vec![0.0], vec![1.0], vec![3.0]]).unwrap();
        let g = m.complete_graph().unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.edge(g.edge_between(0, 2).unwrap()).length, 3.0);
    }
}
