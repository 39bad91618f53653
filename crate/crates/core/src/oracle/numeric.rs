use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alloc::Allocation;
use crate::error::{Error, Result};
use crate::eval::{dijkstra, ShortestPaths};
use crate::graph::{BudgetGraph, EdgeId, VertexId};
use crate::report::{Objective, SolveReport};

/// Settings for the numeric optimizer.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleConfig {
    /// Projected subgradient iterations per restart.
    pub max_iters: usize,
    /// `c` in the diminishing step `c / sqrt(t)` (unit-norm direction).
    pub step: f64,
    /// Relative improvement over the last tenth of a run above which the run
    /// is flagged as not converged.
    pub tol: f64,
    /// Starting points: the uniform allocation, then Dirichlet(1) draws.
    pub restarts: usize,
    pub seed: u64,
    /// Line-search iterations per smoothing stage of the polish phase.
    pub polish_iters: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            max_iters: 2000,
            step: 0.1,
            tol: 1e-6,
            restarts: 5,
            seed: 0,
            polish_iters: 400,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be at least 1".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidConfig("tol must be positive".into()));
        }
        if !(self.step > 0.0) || !self.step.is_finite() {
            return Err(Error::InvalidConfig("step must be positive".into()));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be at least 1".into()));
        }
        Ok(())
    }
}

/// Best allocation found by the numeric optimizer with run diagnostics.
#[derive(Clone, Debug)]
pub struct OracleOutcome {
    pub report: SolveReport,
    /// False when the winning run was still improving at the end.
    pub converged: bool,
    /// Objective evaluations over all runs.
    pub iterations: usize,
    /// Final value of each run, in restart order.
    pub run_values: Vec<f64>,
    pub best_run: usize,
}

/// Minimizes the weighted radius from `root` over the budget simplex.
pub fn numeric_optimize_radius(
    g: &BudgetGraph,
    root: VertexId,
    cfg: &OracleConfig,
) -> Result<OracleOutcome> {
    optimize(g, root, Objective::Radius, None, cfg)
}

/// Minimizes the sum of weighted distances from `root`.
pub fn numeric_optimize_median(
    g: &BudgetGraph,
    root: VertexId,
    cfg: &OracleConfig,
) -> Result<OracleOutcome> {
    optimize(g, root, Objective::Median, None, cfg)
}

/// A single run started from `start` instead of the restart schedule.
pub fn numeric_optimize_from(
    g: &BudgetGraph,
    root: VertexId,
    kind: Objective,
    start: &Allocation,
    cfg: &OracleConfig,
) -> Result<OracleOutcome> {
    if start.len() != g.edge_count() {
        return Err(Error::InvalidAllocation(format!(
            "start has {} entries for {} edges",
            start.len(),
            g.edge_count()
        )));
    }
    optimize(g, root, kind, Some(start.fractions().to_vec()), cfg)
}

fn optimize(
    g: &BudgetGraph,
    root: VertexId,
    kind: Objective,
    start: Option<Vec<f64>>,
    cfg: &OracleConfig,
) -> Result<OracleOutcome> {
    cfg.validate()?;
    if root >= g.n() {
        return Err(Error::VertexOutOfRange(root));
    }
    let m = g.edge_count();
    if m == 0 {
        return Ok(OracleOutcome {
            report: SolveReport::evaluated(g, kind, Allocation::uniform(0), root),
            converged: true,
            iterations: 0,
            run_values: vec![0.0],
            best_run: 0,
        });
    }
    let problem = Problem { g, root, kind };
    let starts: Vec<Vec<f64>> = match start {
        Some(s) => vec![s],
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            (0..cfg.restarts)
                .map(|i| {
                    if i == 0 {
                        vec![1.0 / m as f64; m]
                    } else {
                        dirichlet(&mut rng, m)
                    }
                })
                .collect()
        }
    };
    let mut best: Option<(usize, Run)> = None;
    let mut run_values = Vec::with_capacity(starts.len());
    let mut iterations = 0;
    for (i, s) in starts.into_iter().enumerate() {
        let run = problem.run(s, cfg);
        iterations += run.iterations;
        run_values.push(run.value);
        if best.as_ref().is_none_or(|(_, b)| run.value < b.value) {
            best = Some((i, run));
        }
    }
    let (best_run, run) = best.expect("at least one restart");
    let allocation = Allocation::normalized(run.fractions);
    Ok(OracleOutcome {
        report: SolveReport::evaluated(g, kind, allocation, root),
        converged: run.converged,
        iterations,
        run_values,
        best_run,
    })
}

fn dirichlet(rng: &mut ChaCha8Rng, m: usize) -> Vec<f64> {
    let pw: f64 = std::env::var("PROBE_POW").ok().and_then(|x| x.parse().ok()).unwrap_or(1.0);
    let draws: Vec<f64> = (0..m).map(|_| (-(1.0 - rng.gen::<f64>()).ln()).powf(pw)).collect();
    let total: f64 = draws.iter().sum();
    draws.into_iter().map(|x| x / total).collect()
}

/// Euclidean projection onto the probability simplex.
pub fn project_simplex(v: &mut [f64]) {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut acc = 0.0;
    let mut shift = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        acc += x;
        let t = (acc - 1.0) / (i + 1) as f64;
        if x > t {
            shift = t;
        }
    }
    for x in v.iter_mut() {
        *x = (*x - shift).max(0.0);
    }
}

/// A subgradient of the objective at fractions `b` (unit budget).
///
/// For the radius it is the gradient of the path to the smallest-id vertex
/// at maximum distance; for the median, the sum over all root paths.
pub fn subgradient(g: &BudgetGraph, root: VertexId, kind: Objective, b: &[f64]) -> Vec<f64> {
    let problem = Problem { g, root, kind };
    let sp = problem.paths(b);
    let mass = problem.vertex_mass(&sp.dist, 0.0);
    problem.gradient(b, &sp, &mass)
}

struct Problem<'a> {
    g: &'a BudgetGraph,
    root: VertexId,
    kind: Objective,
}

struct Run {
    fractions: Vec<f64>,
    value: f64,
    iterations: usize,
    converged: bool,
}

impl Problem<'_> {
    fn paths(&self, b: &[f64]) -> ShortestPaths {
        let w: Vec<f64> = self
            .g
            .edges()
            .iter()
            .zip(b)
            .map(|(e, &x)| if x > 0.0 { e.length / x } else { f64::INFINITY })
            .collect();
        dijkstra(self.g, &w, self.root)
    }

    fn value(&self, b: &[f64]) -> f64 {
        self.kind.of(&self.paths(b).dist)
    }

    /// How much each vertex's distance contributes to the (smoothed)
    /// objective. `mu = 0` gives the plain objective.
    fn vertex_mass(&self, dist: &[f64], mu: f64) -> Vec<f64> {
        let n = dist.len();
        match self.kind {
            Objective::Median => vec![1.0; n],
            Objective::Radius => {
                let top = dist.iter().copied().fold(0.0, f64::max);
                let mut mass = vec![0.0; n];
                if mu > 0.0 {
                    for v in (0..n).filter(|&v| v != self.root) {
                        mass[v] = ((dist[v] - top) / mu).exp();
                    }
                    let z: f64 = mass.iter().sum();
                    mass.iter_mut().for_each(|x| *x /= z);
                } else if let Some(v) = dist.iter().position(|&d| d == top) {
                    mass[v] = 1.0;
                }
                mass
            }
        }
    }

    fn smoothed(&self, dist: &[f64], mu: f64) -> f64 {
        match self.kind {
            Objective::Median => dist.iter().sum(),
            Objective::Radius => {
                let top = dist.iter().copied().fold(0.0, f64::max);
                if mu == 0.0 {
                    return top;
                }
                let z: f64 = (0..dist.len())
                    .filter(|&v| v != self.root)
                    .map(|v| ((dist[v] - top) / mu).exp())
                    .sum();
                top + mu * z.ln()
            }
        }
    }

    /// Gradient with respect to the fractions: each edge collects the mass
    /// of the vertices whose shortest path uses it.
    fn gradient(&self, b: &[f64], sp: &ShortestPaths, mass: &[f64]) -> Vec<f64> {
        let n = self.g.n();
        let mut order: Vec<VertexId> = (0..n).filter(|&v| sp.dist[v].is_finite()).collect();
        order.sort_by(|&x, &y| sp.dist[y].total_cmp(&sp.dist[x]));
        let mut acc = mass.to_vec();
        let mut grad = vec![0.0; b.len()];
        for v in order {
            if let Some(e) = sp.pred[v] {
                let edge = self.g.edge(e);
                grad[e] -= acc[v] * edge.length / (b[e] * b[e]);
                acc[edge.other(v)] += acc[v];
            }
        }
        grad
    }

    fn run(&self, start: Vec<f64>, cfg: &OracleConfig) -> Run {
        let mut history = Vec::new();
        let (mut b, mut value) = self.subgradient_phase(start, cfg, &mut history);
        // the convergence test looks at the final phase only: the subgradient
        // phase is slow by design and is always followed by polishing
        let mut last_phase = vec![value];
        if value.is_finite() {
            let support: Vec<EdgeId> = (0..b.len()).filter(|&e| b[e] > 0.0).collect();
            (b, value) = self.polish(b, value, &support, cfg, &mut history);
            // shrinking the support to the shortest-path tree scales every
            // used budget up, so no distance grows
            let sp = self.paths(&b);
            let mut tree: Vec<EdgeId> = sp.pred.iter().flatten().copied().collect();
            tree.sort_unstable();
            let mut pruned = vec![0.0; b.len()];
            let kept: f64 = tree.iter().map(|&e| b[e]).sum();
            for &e in &tree {
                pruned[e] = b[e] / kept;
            }
            let pruned_value = self.value(&pruned);
            if pruned_value <= value {
                (b, value) = (pruned, pruned_value);
            }
            last_phase = vec![value];
            (b, value) = self.polish(b, value, &tree, cfg, &mut last_phase);
        }
        let tail = last_phase[(last_phase.len() * 9) / 10];
        let converged = value.is_finite() && (tail - value) <= cfg.tol * value.abs();
        let iterations = history.len() + last_phase.len() - 1;
        Run {
            fractions: b,
            value,
            iterations,
            converged,
        }
    }

    /// Projected subgradient descent; returns the best iterate. A step that
    /// disconnects a vertex is undone and the step scale halved.
    fn subgradient_phase(
        &self,
        start: Vec<f64>,
        cfg: &OracleConfig,
        history: &mut Vec<f64>,
    ) -> (Vec<f64>, f64) {
        let mut b = start;
        let mut prev = b.clone();
        let mut best = (b.clone(), f64::INFINITY);
        let mut scale = 1.0;
        for t in 1..=cfg.max_iters {
            let sp = self.paths(&b);
            let value = self.kind.of(&sp.dist);
            if !value.is_finite() {
                b.clone_from(&prev);
                scale *= 0.5;
                history.push(best.1);
                continue;
            }
            if value < best.1 {
                best = (b.clone(), value);
            }
            history.push(best.1);
            let mass = self.vertex_mass(&sp.dist, 0.0);
            let grad = self.gradient(&b, &sp, &mass);
            let norm = grad.iter().map(|x| x * x).sum::<f64>().sqrt();
            if !(norm > 0.0) || !norm.is_finite() {
                break;
            }
            let eta = cfg.step * scale / (t as f64).sqrt();
            prev.clone_from(&b);
            for (x, d) in b.iter_mut().zip(&grad) {
                *x -= eta * d / norm;
            }
            project_simplex(&mut b);
        }
        best
    }

    /// Smoothed descent in log-coordinates `b = softmax(theta)` restricted to
    /// `support`, with Armijo backtracking from Barzilai-Borwein steps. The
    /// radius is smoothed by a log-sum-exp whose temperature shrinks stage
    /// by stage.
    fn polish(
        &self,
        b: Vec<f64>,
        value: f64,
        support: &[EdgeId],
        cfg: &OracleConfig,
        history: &mut Vec<f64>,
    ) -> (Vec<f64>, f64) {
        let temperatures: Vec<f64> = match self.kind {
            Objective::Median => vec![0.0],
            Objective::Radius => (2..=9).map(|k| value * 10f64.powi(-k)).collect(),
        };
        let mut best = (b.clone(), value);
        let mut theta: Vec<f64> = support.iter().map(|&e| b[e].ln()).collect();
        for mu in temperatures {
            let (mut f, mut h) = self.smoothed_step_data(&theta, support, mu);
            let mut alpha = 0.5 / h.iter().fold(0.0, |a: f64, x| a.max(x.abs())).max(1e-300);
            for _ in 0..cfg.polish_iters {
                let h2: f64 = h.iter().map(|x| x * x).sum();
                if !(h2 > 0.0) {
                    break;
                }
                let mut accepted = None;
                for _ in 0..60 {
                    let trial: Vec<f64> = theta.iter().zip(&h).map(|(t, d)| t - alpha * d).collect();
                    let (ft, ht) = self.smoothed_step_data(&trial, support, mu);
                    if ft <= f - 1e-4 * alpha * h2 {
                        accepted = Some((trial, ft, ht));
                        break;
                    }
                    alpha *= 0.5;
                }
                let Some((trial, ft, ht)) = accepted else {
                    break;
                };
                let (mut ss, mut sy) = (0.0, 0.0);
                for i in 0..theta.len() {
                    let s = trial[i] - theta[i];
                    ss += s * s;
                    sy += s * (ht[i] - h[i]);
                }
                alpha = if sy > 0.0 { ss / sy } else { alpha * 2.0 };
                let decrease = f - ft;
                theta = trial;
                f = ft;
                h = ht;
                let b = self.expand(&theta, support);
                let true_value = self.value(&b);
                if true_value < best.1 {
                    best = (b, true_value);
                }
                history.push(best.1);
                if decrease <= 1e-15 * f.abs() {
                    break;
                }
            }
        }
        best
    }

    fn expand(&self, theta: &[f64], support: &[EdgeId]) -> Vec<f64> {
        let top = theta.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let z: f64 = theta.iter().map(|t| (t - top).exp()).sum();
        let mut b = vec![0.0; self.g.edge_count()];
        for (&e, t) in support.iter().zip(theta) {
            b[e] = (t - top).exp() / z;
        }
        b
    }

    /// Smoothed value and its gradient in log-coordinates.
    fn smoothed_step_data(&self, theta: &[f64], support: &[EdgeId], mu: f64) -> (f64, Vec<f64>) {
        let b = self.expand(theta, support);
        let sp = self.paths(&b);
        let f = self.smoothed(&sp.dist, mu);
        if !f.is_finite() {
            return (f64::INFINITY, vec![0.0; theta.len()]);
        }
        let mass = self.vertex_mass(&sp.dist, mu);
        let grad = self.gradient(&b, &sp, &mass);
        let mean: f64 = support.iter().map(|&e| b[e] * grad[e]).sum();
        let h = support.iter().map(|&e| b[e] * (grad[e] - mean)).collect();
        (f, h)
    }
}
