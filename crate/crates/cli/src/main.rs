use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use budget_graph::hardness::{cover_to_allocation, reduce_setcover, Cover, SetCoverInstance};
use budget_graph::metric::{approx_metric_radius, MetricSpace};
use budget_graph::oracle::{
    exact_small_graph_median, exact_small_graph_radius, numeric_optimize_median,
    numeric_optimize_radius, OracleConfig, DEFAULT_TREE_CAP,
};
use budget_graph::report::number;
use budget_graph::{
    evaluate_radius, solve_all_roots_median, solve_all_roots_radius, solve_rooted_median,
    solve_rooted_radius, solve_unrooted_median, weighted_distances, Allocation, BudgetGraph,
    Error, RootedTree, SolveReport, Tolerance,
};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

/// Optimal budget allocation on graph edges.
#[derive(Parser)]
#[command(name = "budget-graph", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Input file (`-` for stdin).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Total budget; reported objectives are divided by it.
    #[arg(long)]
    budget: Option<f64>,
    /// Relative tolerance for consistency checks and allocation sums.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Emit CSV instead of JSON where a table makes sense.
    #[arg(long)]
    csv: bool,
    /// Write to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Budget radius of a tree.
    Radius {
        #[command(flatten)]
        common: Common,
        /// Root vertex label.
        #[arg(long, required_unless_present = "all_roots")]
        root: Option<String>,
        /// Solve for every root at once.
        #[arg(long)]
        all_roots: bool,
    },
    /// Budget median (sum of weighted distances) of a tree.
    Median {
        #[command(flatten)]
        common: Common,
        #[arg(long, required_unless_present_any = ["all_roots", "unrooted"])]
        root: Option<String>,
        #[arg(long, conflicts_with = "unrooted")]
        all_roots: bool,
        /// Best root and the unweighted tree medians.
        #[arg(long)]
        unrooted: bool,
    },
    /// Approximate budget radius of a finite metric (points or a distance matrix).
    Approx {
        #[command(flatten)]
        common: Common,
        /// Comma-separated point coordinates, one point per row.
        #[arg(long, conflicts_with = "matrix")]
        points: Option<PathBuf>,
        /// Comma-separated square distance matrix.
        #[arg(long)]
        matrix: Option<PathBuf>,
        /// Accept a distance matrix without checking the triangle inequality.
        #[arg(long)]
        no_triangle_check: bool,
    },
    /// Numeric or exhaustive reference solve on a small general graph.
    Oracle {
        objective: ObjectiveArg,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        root: String,
        /// Enumerate spanning trees instead of optimizing numerically.
        #[arg(long)]
        exact_enum: bool,
        #[arg(long, default_value_t = OracleConfig::default().restarts)]
        restarts: usize,
        #[arg(long, default_value_t = OracleConfig::default().max_iters)]
        max_iters: usize,
        /// Refuse enumeration above this many spanning trees.
        #[arg(long, default_value_t = DEFAULT_TREE_CAP)]
        cap: u64,
    },
    /// Build the set-cover gadget graph for an instance.
    ReduceSetcover {
        #[command(flatten)]
        common: Common,
    },
    /// Radius-1 witness allocation for a cover of an instance.
    Witness {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        cover: PathBuf,
    },
    /// Evaluate a given allocation.
    Eval {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        allocation: PathBuf,
        #[arg(long)]
        root: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    Radius,
    Median,
}

enum Failure {
    Invalid { kind: &'static str, message: String },
    Invariant(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid {
            kind: e.kind(),
            message: e.to_string(),
        }
    }
}

fn invalid(kind: &'static str, message: impl Into<String>) -> Failure {
    Failure::Invalid {
        kind,
        message: message.into(),
    }
}

enum Output {
    Json(Value),
    Csv(String),
}

type Run = Result<Output, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let message = e.render().to_string();
            return fail(&invalid("usage", message.trim_end()), 1);
        }
    };
    let (common, result) = dispatch(cli.command);
    match result.and_then(|out| emit(&common, out)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f @ Failure::Invalid { .. }) => fail(&f, 1),
        Err(f @ Failure::Invariant(_)) => fail(&f, 2),
    }
}

fn fail(f: &Failure, code: u8) -> ExitCode {
    let (kind, message) = match f {
        Failure::Invalid { kind, message } => (*kind, message.as_str()),
        Failure::Invariant(message) => ("invariant_violation", message.as_str()),
    };
    let body = json!({ "error": { "kind": kind, "message": message } });
    eprintln!("{body}");
    ExitCode::from(code)
}

fn dispatch(command: Command) -> (Common, Run) {
    match command {
        Command::Radius {
            common,
            root,
            all_roots,
        } => {
            let r = radius(&common, root.as_deref(), all_roots);
            (common, r)
        }
        Command::Median {
            common,
            root,
            all_roots,
            unrooted,
        } => {
            let r = median(&common, root.as_deref(), all_roots, unrooted);
            (common, r)
        }
        Command::Approx {
            common,
            points,
            matrix,
            no_triangle_check,
        } => {
            let r = approx(&common, points, matrix, no_triangle_check);
            (common, r)
        }
        Command::Oracle {
            objective,
            common,
            root,
            exact_enum,
            restarts,
            max_iters,
            cap,
        } => {
            let cfg = OracleConfig {
                restarts,
                max_iters,
                seed: common.seed,
                ..OracleConfig::default()
            };
            let r = oracle(&common, objective, &root, exact_enum, &cfg, cap);
            (common, r)
        }
        Command::ReduceSetcover { common } => {
            let r = reduce(&common);
            (common, r)
        }
        Command::Witness { common, cover } => {
            let r = witness(&common, &cover);
            (common, r)
        }
        Command::Eval {
            common,
            allocation,
            root,
        } => {
            let r = eval(&common, &allocation, &root);
            (common, r)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| invalid("io", format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| invalid("io", format!("{}: {e}", path.display())))
}

impl Common {
    fn input(&self) -> Result<String, Failure> {
        let path = self
            .input
            .as_deref()
            .ok_or_else(|| invalid("usage", "--input is required"))?;
        read(path)
    }

    fn graph(&self) -> Result<BudgetGraph, Failure> {
        Ok(BudgetGraph::parse(&self.input()?)?)
    }

    fn budget(&self) -> Result<f64, Failure> {
        match self.budget {
            Some(b) if !(b > 0.0) || !b.is_finite() => {
                Err(invalid("invalid_config", format!("budget must be positive, got {b}")))
            }
            b => Ok(b.unwrap_or(1.0)),
        }
    }

    fn tolerance(&self) -> Result<Tolerance, Failure> {
        if !(self.tol > 0.0) {
            return Err(invalid("invalid_config", format!("tol must be positive, got {}", self.tol)));
        }
        Ok(Tolerance::relative(self.tol))
    }
}

fn emit(common: &Common, out: Output) -> Result<(), Failure> {
    let text = match out {
        Output::Json(v) => serde_json::to_string_pretty(&v).expect("values serialize") + "\n",
        Output::Csv(s) => s,
    };
    let written = match &common.output {
        Some(path) => fs::write(path, text).map_err(|e| (path.display().to_string(), e)),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| ("stdout".to_string(), e)),
    };
    written.map_err(|(target, e)| invalid("io", format!("{target}: {e}")))
}

fn checked(g: &BudgetGraph, rep: &SolveReport, tol: Tolerance) -> Result<(), Failure> {
    if rep.is_consistent(g, tol) {
        Ok(())
    } else {
        Err(Failure::Invariant(format!(
            "reported {} {} does not match re-evaluation of its allocation",
            rep.kind.name(),
            rep.objective
        )))
    }
}

fn tree(common: &Common, root: Option<&str>) -> Result<RootedTree, Failure> {
    let g = common.graph()?;
    let r = match root {
        Some(label) => g.vertex(label)?,
        None => 0,
    };
    Ok(RootedTree::new(g, r)?)
}

fn fmt(x: f64) -> String {
    if x.is_finite() {
        x.to_string()
    } else {
        "inf".into()
    }
}

fn per_vertex(g: &BudgetGraph, values: &[f64], scale: f64) -> Value {
    let map: serde_json::Map<String, Value> = values
        .iter()
        .enumerate()
        .map(|(v, &x)| (g.label(v).to_string(), number(x / scale)))
        .collect();
    Value::Object(map)
}

fn radius(common: &Common, root: Option<&str>, all_roots: bool) -> Run {
    let (budget, tol) = (common.budget()?, common.tolerance()?);
    let t = tree(common, root)?;
    let g = t.graph();
    if !all_roots {
        let rep = solve_rooted_radius(&t);
        checked(g, &rep, tol)?;
        if common.csv {
            let mut out = String::from("vertex,distance\n");
            for (v, d) in rep.distances.iter().enumerate() {
                out += &format!("{},{}\n", g.label(v), fmt(d / budget));
            }
            return Ok(Output::Csv(out));
        }
        return Ok(Output::Json(rep.to_json(g, budget)));
    }
    let all = solve_all_roots_radius(&t)?;
    checked(g, &all.report, tol)?;
    if !tol.eq(all.report.objective, all.values[all.best]) {
        return Err(Failure::Invariant(format!(
            "all-roots value {} at the best root disagrees with its solve {}",
            all.values[all.best], all.report.objective
        )));
    }
    if common.csv {
        let mut out = String::from("vertex,BR\n");
        for (v, &x) in all.values.iter().enumerate() {
            out += &format!("{},{}\n", g.label(v), fmt(x / budget));
        }
        return Ok(Output::Csv(out));
    }
    Ok(Output::Json(json!({
        "objective": "radius",
        "budget": budget,
        "values": per_vertex(g, &all.values, budget),
        "best": g.label(all.best),
        "report": all.report.to_json(g, budget),
    })))
}

fn median(common: &Common, root: Option<&str>, all_roots: bool, unrooted: bool) -> Run {
    let (budget, tol) = (common.budget()?, common.tolerance()?);
    let t = tree(common, root)?;
    let g = t.graph();
    let n = g.n() as f64;
    if all_roots {
        let values = solve_all_roots_median(&t);
        if common.csv {
            let mut out = String::from("vertex,BM,sum,average\n");
            for (v, &x) in values.iter().enumerate() {
                let s = x / budget;
                out += &format!("{},{},{},{}\n", g.label(v), fmt(s), fmt(s), fmt(s / n));
            }
            return Ok(Output::Csv(out));
        }
        let averages: Vec<f64> = values.iter().map(|x| x / n).collect();
        return Ok(Output::Json(json!({
            "objective": "median",
            "budget": budget,
            "sums": per_vertex(g, &values, budget),
            "averages": per_vertex(g, &averages, budget),
        })));
    }
    if unrooted {
        let um = solve_unrooted_median(&t)?;
        checked(g, &um.report, tol)?;
        let labels = |vs: &[usize]| vs.iter().map(|&v| g.label(v)).collect::<Vec<_>>();
        return Ok(Output::Json(json!({
            "objective": "median",
            "budget": budget,
            "median": g.label(um.report.root),
            "argmin": labels(&um.argmin),
            "unweighted_medians": labels(&um.unweighted_medians),
            "coincides": um.coincides,
            "sums": per_vertex(g, &um.values, budget),
            "report": um.report.to_json(g, budget),
        })));
    }
    let rep = solve_rooted_median(&t);
    checked(g, &rep, tol)?;
    if common.csv {
        let mut out = String::from("vertex,distance\n");
        for (v, d) in rep.distances.iter().enumerate() {
            out += &format!("{},{}\n", g.label(v), fmt(d / budget));
        }
        return Ok(Output::Csv(out));
    }
    Ok(Output::Json(rep.to_json(g, budget)))
}

fn approx(
    common: &Common,
    points: Option<PathBuf>,
    matrix: Option<PathBuf>,
    no_triangle_check: bool,
) -> Run {
    let budget = common.budget()?;
    let m = match (matrix, points.or_else(|| common.input.clone())) {
        (Some(path), _) => MetricSpace::from_matrix_csv(&read(&path)?, !no_triangle_check)?,
        (None, Some(path)) => MetricSpace::from_points_csv(&read(&path)?)?,
        (None, None) => return Err(invalid("usage", "give --points, --matrix or --input")),
    };
    let r = approx_metric_radius(&m)?;
    if !r.certified() {
        return Err(Failure::Invariant(format!(
            "radius {} exceeds {} times the spanning tree bound {}",
            r.radius, r.ratio_bound, r.lb
        )));
    }
    if common.csv {
        let mut out = String::from("point,position\n");
        for (p, x) in r.order.iter().zip(&r.positions) {
            out += &format!("{p},{x}\n");
        }
        return Ok(Output::Csv(out));
    }
    Ok(Output::Json(r.to_json(budget)))
}

fn oracle(
    common: &Common,
    objective: ObjectiveArg,
    root: &str,
    exact_enum: bool,
    cfg: &OracleConfig,
    cap: u64,
) -> Run {
    let (budget, tol) = (common.budget()?, common.tolerance()?);
    let g = common.graph()?;
    let r = g.vertex(root)?;
    let mut out;
    if exact_enum {
        let exact = match objective {
            ObjectiveArg::Radius => exact_small_graph_radius(&g, r, cap)?,
            ObjectiveArg::Median => exact_small_graph_median(&g, r, cap)?,
        };
        checked(&g, &exact.report, tol)?;
        out = exact.report.to_json(&g, budget);
        out["method"] = json!("enumeration");
        out["spanning_trees"] = json!(exact.trees);
        out["tree_edges"] = json!(exact.tree.iter().map(|&e| g.edge_key(e)).collect::<Vec<_>>());
    } else {
        cfg.validate()?;
        let run = match objective {
            ObjectiveArg::Radius => numeric_optimize_radius(&g, r, cfg)?,
            ObjectiveArg::Median => numeric_optimize_median(&g, r, cfg)?,
        };
        checked(&g, &run.report, tol)?;
        out = run.report.to_json(&g, budget);
        out["method"] = json!("numeric");
        out["converged"] = json!(run.converged);
        out["iterations"] = json!(run.iterations);
        out["seed"] = json!(cfg.seed);
        out["restarts"] = json!(cfg.restarts);
        out["run_values"] = json!(run.run_values.iter().map(|&x| number(x / budget)).collect::<Vec<_>>());
        out["best_run"] = json!(run.best_run);
    }
    Ok(Output::Json(out))
}

fn reduce(common: &Common) -> Run {
    let sc = SetCoverInstance::from_json_str(&common.input()?)?;
    Ok(Output::Json(reduce_setcover(&sc)?.to_json()))
}

fn witness(common: &Common, cover: &Path) -> Run {
    let tol = common.tolerance()?;
    let sc = SetCoverInstance::from_json_str(&common.input()?)?;
    let red = reduce_setcover(&sc)?;
    let cover = Cover::from_json_str(&read(cover)?)?;
    let w = cover_to_allocation(&red, &cover)?;
    let radius = evaluate_radius(&red.graph, &w.allocation, red.root);
    if !tol.eq(radius, 1.0) || !tol.eq(w.cost, sc.expected_cost(w.used_sets)) {
        return Err(Failure::Invariant(format!(
            "witness of cost {} reaches radius {radius}",
            w.cost
        )));
    }
    let mut out = w.to_json(&red);
    out["radius"] = number(radius);
    Ok(Output::Json(out))
}

fn eval(common: &Common, allocation: &Path, root: &str) -> Run {
    let tol = common.tolerance()?;
    let g = common.graph()?;
    let r = g.vertex(root)?;
    let mut alloc = Allocation::from_json_str(&g, &read(allocation)?, tol)?;
    if common.budget.is_some() {
        alloc = alloc.with_budget(common.budget()?)?;
    }
    let dist = weighted_distances(&g, &alloc, r);
    let radius = dist.iter().copied().fold(0.0, f64::max);
    let sum: f64 = dist.iter().sum();
    if common.csv {
        let mut out = String::from("vertex,distance\n");
        for (v, d) in dist.iter().enumerate() {
            out += &format!("{},{}\n", g.label(v), fmt(*d));
        }
        return Ok(Output::Csv(out));
    }
    Ok(Output::Json(json!({
        "root": root,
        "budget": alloc.budget(),
        "radius": number(radius),
        "sum": number(sum),
        "average": number(sum / g.n() as f64),
        "distances": per_vertex(&g, &dist, 1.0),
    })))
}
