//! Command-line front end: `solve`, `bounds`, `verify` and `convergence`.
//!
//! Exit codes: 0 success, 2 configuration/schema error, 3 validation error,
//! 4 non-convergence, 5 I/O error, 6 bound violation.

use crate::bounds::{
    apriori_solution_bound, estimate_impulse_bounds, estimate_sup_constants, fit_lambda_theta, StabilityConstants,
};
use crate::config::ProblemConfig;
use crate::error::Error;
use crate::solver::{solve_picard, ImpulsiveProblem, PiecewiseSolution, SolverConfig};
use crate::special::{gamma, mittag_leffler};
use crate::stability::{
    check_data_dependence, check_ic_dependence, check_order_dependence_from, check_uh, check_uhr, BoundReport,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SCHEMA: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_NONCONVERGENCE: i32 = 4;
pub const EXIT_IO: i32 = 5;
pub const EXIT_VIOLATION: i32 = 6;

/// Samples used for the sup constants printed by `bounds` and `solve`.
const SUP_SAMPLES: usize = 400;
const LAMBDA_NODES: usize = 400;

#[derive(Debug, Parser)]
#[command(name = "phi-hilfer", version, about = "Impulsive fractional initial-value problems: solve, bound, certify")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve the problem and write the nodal values as CSV.
    Solve {
        #[arg(long)]
        config: PathBuf,
        /// CSV destination; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the bound constants of the problem.
    Bounds {
        #[arg(long)]
        config: PathBuf,
    },
    /// Certify one stability bound on the problem and its perturbation.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Multiplies the theoretical bound; for exercising the failure path.
        #[arg(long, hide = true, default_value_t = 1.0)]
        debug_bound_scale: f64,
    },
    /// Solve on successively doubled grids and report observed orders.
    Convergence {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 4)]
        levels: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Uh,
    Uhr,
    Ic,
    Data,
    Order,
}

#[derive(Debug)]
enum Failure {
    Schema(String),
    Validation(String),
    NonConvergence(String),
    Io(String),
    Violation(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Schema(_) => EXIT_SCHEMA,
            Failure::Validation(_) => EXIT_VALIDATION,
            Failure::NonConvergence(_) => EXIT_NONCONVERGENCE,
            Failure::Io(_) => EXIT_IO,
            Failure::Violation(_) => EXIT_VIOLATION,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Schema(m)
            | Failure::Validation(m)
            | Failure::NonConvergence(m)
            | Failure::Io(m)
            | Failure::Violation(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonConvergence { .. } => Failure::NonConvergence(e.to_string()),
            e => Failure::Validation(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return e.exit_code();
        }
    };
    let outcome = match cli.command {
        Command::Solve { config, out } => cmd_solve(&config, out.as_deref(), stdout),
        Command::Bounds { config } => cmd_bounds(&config, stdout),
        Command::Verify { config, mode, out, debug_bound_scale } => {
            cmd_verify(&config, mode, out.as_deref(), debug_bound_scale, stdout)
        }
        Command::Convergence { config, levels, out } => cmd_convergence(&config, levels, out.as_deref(), stdout),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message());
            f.code()
        }
    }
}

fn load(path: &Path) -> std::result::Result<(ProblemConfig, ImpulsiveProblem), Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
    let config = ProblemConfig::from_json(&text).map_err(|e| Failure::Schema(format!("{}: {e}", path.display())))?;
    let problem = config.build()?;
    Ok((config, problem))
}

fn emit(out: Option<&Path>, body: &str, stdout: &mut dyn Write) -> Outcome {
    match out {
        Some(p) => std::fs::write(p, body).map_err(|e| Failure::Io(format!("cannot write {}: {e}", p.display()))),
        None => stdout.write_all(body.as_bytes()).map_err(|e| Failure::Io(format!("cannot write output: {e}"))),
    }
}

fn say(stdout: &mut dyn Write, text: &str) -> Outcome {
    stdout.write_all(text.as_bytes()).map_err(|e| Failure::Io(format!("cannot write output: {e}")))
}

fn json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("summary serializes");
    s.push('\n');
    s
}

fn solve(problem: &ImpulsiveProblem, s: &SolverConfig) -> crate::Result<PiecewiseSolution> {
    solve_picard(problem, s.nodes_per_subinterval, s.tol, s.max_iter)
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Nodal CSV; a subinterval after an impulse starts one cell after it.
pub fn solution_csv(solution: &PiecewiseSolution) -> crate::Result<String> {
    let mut s = String::from("subinterval_index,t,phi_t,weighted_value,raw_value\n");
    for (k, seg) in solution.segments.iter().enumerate() {
        for i in 0..seg.len() {
            let t = seg.grid[i];
            let raw = seg.raw_value(i)?.map(num).unwrap_or_default();
            let _ = writeln!(s, "{k},{},{},{},{raw}", num(t), num(solution.phi.eval(t)?), num(seg.weighted_values[i]));
        }
    }
    Ok(s)
}

#[derive(Serialize)]
struct SolveSummary {
    iterations: usize,
    final_update: f64,
    weighted_norm: f64,
    apriori_bound: f64,
    apriori_dominates: bool,
    m_star: f64,
    n_star: f64,
}

fn cmd_solve(path: &Path, out: Option<&Path>, stdout: &mut dyn Write) -> Outcome {
    let (config, problem) = load(path)?;
    let sol = solve(&problem, &config.solver)?;
    let sup = estimate_sup_constants(&problem, SUP_SAMPLES)?;
    let bound = apriori_solution_bound(&problem, sup.m_star, sup.n_star)?;
    let summary = SolveSummary {
        iterations: sol.iteration_count,
        final_update: sol.final_picard_residual,
        weighted_norm: sol.weighted_norm(),
        apriori_bound: bound,
        apriori_dominates: sol.weighted_norm() <= bound,
        m_star: sup.m_star,
        n_star: sup.n_star,
    };
    let csv = solution_csv(&sol)?;
    match out {
        Some(_) => {
            emit(out, &csv, stdout)?;
            say(stdout, &json_line(&summary))
        }
        None => say(stdout, &csv),
    }
}

fn cmd_bounds(path: &Path, stdout: &mut dyn Write) -> Outcome {
    let (config, problem) = load(path)?;
    let o = problem.order;
    let sup = estimate_sup_constants(&problem, SUP_SAMPLES)?;
    let zeta = estimate_impulse_bounds(&problem)?.iter().fold(0.0, |s, z| s + z);
    let uhr = config.perturbations.uhr.as_ref();
    let lambda = match uhr {
        Some(block) => Some(fit_lambda_theta(&block.theta()?, o.rho, &problem.phi, problem.a, problem.t_end, LAMBDA_NODES)?),
        None => None,
    };
    let mut c = StabilityConstants::compute(&problem, &sup, zeta, lambda)?;
    if let Some(b) = &config.perturbations.uh {
        c.epsilon = b.epsilon;
    }
    if let Some(b) = uhr {
        c.chi = b.chi;
    }
    let mut s = String::new();
    let mut row = |name: &str, v: f64| {
        let _ = writeln!(s, "{name:<20} {v:.12e}");
    };
    row("A_factor", c.a_factor);
    row("C_uh", c.c_uh);
    if let (Some(l), Some(cu)) = (c.lambda_theta, c.c_uhr) {
        row("lambda_theta", l);
        row("C_uhr", cu);
    }
    row("M_star", c.m_star);
    row("N_star", c.n_star);
    row("zeta", c.zeta);
    row("apriori_bound", apriori_solution_bound(&problem, c.m_star, c.n_star)?);
    row("lipschitz_rhs", sup.lipschitz);
    row("lipschitz_impulses", sup.impulse_lipschitz);
    if let Some(w) = sup.advisory() {
        let _ = writeln!(s, "{w}");
    }
    say(stdout, &s)
}

fn missing(mode: &str) -> Failure {
    Failure::Schema(format!("configuration has no perturbations.{mode} block"))
}

#[derive(Serialize)]
struct VerifySummary<'a> {
    provenance: &'a str,
    pass: bool,
    empirical: f64,
    theoretical: f64,
    margin: f64,
    slack: f64,
    parameters: &'a std::collections::BTreeMap<String, f64>,
}

pub fn report_csv(report: &BoundReport) -> String {
    let mut s = String::from("subinterval_index,t,empirical,theoretical,margin\n");
    for n in &report.curve {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            n.subinterval,
            num(n.t),
            num(n.empirical),
            num(n.theoretical),
            num(n.theoretical - n.empirical)
        );
    }
    s
}

fn cmd_verify(path: &Path, mode: Mode, out: Option<&Path>, scale: f64, stdout: &mut dyn Write) -> Outcome {
    let (config, problem) = load(path)?;
    let p = &config.perturbations;
    let s = &config.solver;
    let report = match mode {
        Mode::Uh => check_uh(&problem, &p.uh.as_ref().ok_or_else(|| missing("uh"))?.spec(), s)?,
        Mode::Uhr => check_uhr(&problem, &p.uhr.as_ref().ok_or_else(|| missing("uhr"))?.spec()?, s)?,
        Mode::Ic => check_ic_dependence(&problem, p.ic.as_ref().ok_or_else(|| missing("ic"))?.v_a, s)?,
        Mode::Data => {
            let other = p.data.as_ref().ok_or_else(|| missing("data"))?.apply(&problem)?;
            check_data_dependence(&problem, &other, s)?
        }
        Mode::Order => {
            let b = p.order.as_ref().ok_or_else(|| missing("order"))?;
            check_order_dependence_from(&problem, b.delta, b.v_a.unwrap_or(problem.u_a), s)?
        }
    };
    let report = if scale != 1.0 { report.scaled(scale) } else { report };
    let summary = VerifySummary {
        provenance: report.provenance,
        pass: report.pass,
        empirical: report.empirical_quantity,
        theoretical: report.theoretical_bound,
        margin: report.margin,
        slack: report.numerical_slack,
        parameters: &report.parameters,
    };
    let csv = report_csv(&report);
    match out {
        Some(_) => {
            emit(out, &csv, stdout)?;
            say(stdout, &json_line(&summary))?;
        }
        None => say(stdout, &csv)?,
    }
    if report.pass {
        Ok(())
    } else {
        Err(Failure::Violation(format!(
            "bound violated: margin {:e} below slack -{:e}",
            report.margin, report.numerical_slack
        )))
    }
}

/// Exact weighted solutions recognised by sampling the problem data.
enum Oracle {
    /// `f = 0` and constant impulse maps.
    Homogeneous(Vec<f64>),
    /// `f = c u`, Caputo type, no impulses.
    Linear(f64),
}

impl Oracle {
    fn detect(problem: &ImpulsiveProblem) -> Option<Oracle> {
        let phi = &problem.phi;
        let ts: Vec<f64> = (1..=7).map(|i| problem.a + (problem.t_end - problem.a) * i as f64 / 7.0).collect();
        let us = [-2.0, -0.5, 0.0, 0.7, 3.0];
        let f = |t: f64, u: f64| problem.rhs.eval(t, u, phi).ok();
        let zero = ts.iter().all(|&t| us.iter().all(|&u| f(t, u) == Some(0.0)));
        if zero {
            let levels: Option<Vec<f64>> = problem
                .impulse_maps
                .iter()
                .map(|j| {
                    let c = j.eval(0.0, phi).ok()?;
                    us.iter().all(|&u| j.eval(u, phi).ok() == Some(c)).then_some(c)
                })
                .collect();
            return levels.map(Oracle::Homogeneous);
        }
        if problem.order.nu != 1.0 || problem.m() > 0 {
            return None;
        }
        let c = f(ts[0], 1.0)?;
        let linear = ts.iter().all(|&t| {
            us.iter().all(|&u| f(t, u).is_some_and(|v| (v - c * u).abs() <= 1e-14 * (1.0 + (c * u).abs())))
        });
        linear.then_some(Oracle::Linear(c))
    }

    fn name(&self) -> &'static str {
        match self {
            Oracle::Homogeneous(_) => "homogeneous",
            Oracle::Linear(_) => "linear",
        }
    }

    /// Largest error over the stored values, left limits at impulse times.
    fn error(&self, problem: &ImpulsiveProblem, sol: &PiecewiseSolution) -> crate::Result<f64> {
        let xa = problem.phi.eval(problem.a)?;
        let gs = gamma(problem.order.sigma)?;
        let mut worst = 0.0f64;
        for (k, t, w) in sol.slots() {
            let exact = match self {
                Oracle::Homogeneous(levels) => {
                    // The first slot of a later subinterval is the right limit at t_k.
                    let applied = if k > 0 && t == problem.impulse_times[k - 1] { k } else { problem.subinterval_of(t) };
                    (problem.u_a + levels[..applied].iter().sum::<f64>()) / gs
                }
                Oracle::Linear(c) => {
                    problem.u_a * mittag_leffler(problem.order.rho, c * (problem.phi.eval(t)? - xa).powf(problem.order.rho))?
                }
            };
            worst = worst.max((w - exact).abs());
        }
        Ok(worst)
    }
}

/// Largest difference between a solution and a finer one at the coarse nodes
/// (right limits excluded).
fn level_gap(coarse: &PiecewiseSolution, fine: &PiecewiseSolution) -> crate::Result<f64> {
    let mut gap = 0.0f64;
    for (k, t, w) in coarse.slots() {
        if k > 0 && t == coarse.impulse_times[k - 1] {
            continue;
        }
        gap = gap.max((fine.weighted_at(t)? - w).abs());
    }
    Ok(gap)
}

fn observed_order(prev: Option<f64>, cur: f64) -> String {
    match prev {
        Some(p) if p > 0.0 && cur > 0.0 => num((p / cur).log2()),
        _ => String::new(),
    }
}

fn cmd_convergence(path: &Path, levels: usize, out: Option<&Path>, stdout: &mut dyn Write) -> Outcome {
    let (config, problem) = load(path)?;
    if levels < 3 {
        return Err(Failure::Validation(format!("need at least 3 refinement levels, got {levels}")));
    }
    let base = config.solver;
    let sizes: Vec<usize> = (0..levels).map(|l| base.nodes_per_subinterval << l).collect();
    let problem_ref = &problem;
    let sols: Vec<crate::Result<PiecewiseSolution>> = std::thread::scope(|s| {
        let handles: Vec<_> = sizes
            .iter()
            .map(|&n| s.spawn(move || solve_picard(problem_ref, n, base.tol, base.max_iter)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("solver thread panicked")).collect()
    });
    let sols: Vec<PiecewiseSolution> = sols.into_iter().collect::<crate::Result<_>>()?;
    let oracle = Oracle::detect(&problem);

    let mut s = String::from("level,nodes_per_subinterval,iterations,difference_to_next,observed_order,oracle,oracle_error,oracle_order\n");
    let mut prev_gap = None;
    let mut prev_err = None;
    for (l, sol) in sols.iter().enumerate() {
        let gap = sols.get(l + 1).map(|f| level_gap(sol, f)).transpose()?;
        let err = oracle.as_ref().map(|o| o.error(&problem, sol)).transpose()?;
        let _ = writeln!(
            s,
            "{l},{},{},{},{},{},{},{}",
            sizes[l],
            sol.iteration_count,
            gap.map(num).unwrap_or_default(),
            gap.map(|g| observed_order(prev_gap, g)).unwrap_or_default(),
            oracle.as_ref().map(Oracle::name).unwrap_or("none"),
            err.map(num).unwrap_or_default(),
            err.map(|e| observed_order(prev_err, e)).unwrap_or_default(),
        );
        prev_gap = gap;
        prev_err = err;
    }
    emit(out, &s, stdout)
}
