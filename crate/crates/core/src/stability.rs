//! Perturbed problems and numerical certificates of the stability bounds.
//!
//! Every check solves the original and the perturbed problem at the
//! configured resolution and at half of it. The half-resolution run gives
//! the discretisation estimate behind the numerical slack.

use crate::bounds::{
    data_dependence_bound, estimate_impulse_bounds, fit_lambda_theta, ic_dependence_bound,
    order_dependence_envelope, uh_constant, uhr_constant, OrderShiftInputs,
};
use crate::error::{param, Error, Result};
use crate::phi::PhiFunction;
use crate::solver::{solve_picard, ImpulseMap, ImpulsiveProblem, PiecewiseSolution, Rhs, SolverConfig, TimeFunction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Seed of the random waveform unless `PHI_HILFER_SEED` says otherwise.
pub const DEFAULT_SEED: u64 = 20_250_917;
pub const SEED_ENV: &str = "PHI_HILFER_SEED";

/// The seed in effect: `PHI_HILFER_SEED` when set to an integer, else [`DEFAULT_SEED`].
pub fn waveform_seed() -> Result<u64> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s.trim().parse().map_err(|_| param(format!("{SEED_ENV} must be an unsigned integer, got {s:?}"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

/// Shape of a perturbation, scaled to `|shape| <= 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Waveform {
    Constant,
    /// `sin(omega phi(t))`.
    Sine { omega: f64 },
    /// Piecewise constant on `pieces` cells uniform in `phi`, levels uniform in `[-1, 1]`.
    Random {
        pieces: usize,
        #[serde(default)]
        seed: Option<u64>,
    },
    /// An expression in `t`; sampled to make sure it stays within `[-1, 1]`.
    Expr(String),
}

const WAVEFORM_SAMPLES: usize = 200;

impl Waveform {
    pub fn build(&self, phi: &PhiFunction, a: f64, t_end: f64) -> Result<TimeFunction> {
        Ok(match self {
            Waveform::Constant => TimeFunction::constant(1.0),
            Waveform::Sine { omega } => {
                let (phi, omega) = (phi.clone(), *omega);
                if !omega.is_finite() {
                    return Err(param("waveform frequency must be finite"));
                }
                TimeFunction::native(format!("sin({omega}*phi(t))"), move |t| Ok((omega * phi.eval(t)?).sin()))
            }
            Waveform::Random { pieces, seed } => {
                if *pieces == 0 {
                    return Err(param("random waveform needs at least one piece"));
                }
                let seed = match seed {
                    Some(s) => *s,
                    None => waveform_seed()?,
                };
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let levels: Vec<f64> = (0..*pieces).map(|_| rng.random_range(-1.0..=1.0)).collect();
                let (xa, xt) = (phi.eval(a)?, phi.eval(t_end)?);
                let phi = phi.clone();
                TimeFunction::native(format!("random(pieces={pieces}, seed={seed})"), move |t| {
                    let s = (phi.eval(t)? - xa) / (xt - xa);
                    let i = ((s * levels.len() as f64).floor().max(0.0) as usize).min(levels.len() - 1);
                    Ok(levels[i])
                })
            }
            Waveform::Expr(text) => {
                let f = TimeFunction::parse(text)?;
                for i in 0..=WAVEFORM_SAMPLES {
                    let t = a + (t_end - a) * i as f64 / WAVEFORM_SAMPLES as f64;
                    let v = f.eval(t, phi)?;
                    if v.abs() > 1.0 + 1e-12 {
                        return Err(param(format!("waveform {text} reaches {v} at t={t}; it must stay within [-1, 1]")));
                    }
                }
                f
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerturbationMode {
    /// `|E(t)| <= eps`, `|E_k| <= eps`.
    Uh,
    /// `|E(t)| <= theta(t)`, `|E_k| <= chi`.
    UhrPair,
    /// `|E(t)| <= eps theta(t)`, `|E_k| <= eps chi`.
    UhrScaled,
    IcShift,
    DataShift,
    OrderShift,
}

#[derive(Debug, Clone)]
pub struct PerturbationSpec {
    pub mode: PerturbationMode,
    pub epsilon: f64,
    pub chi: f64,
    pub theta: Option<TimeFunction>,
    pub waveform: Waveform,
    /// Signs of the impulse perturbations; empty means all `+1`.
    pub impulse_signs: Vec<f64>,
    pub delta_a: Option<f64>,
    pub eps_f: Option<f64>,
    pub eps_j: Option<f64>,
    pub delta_order: Option<f64>,
}

impl PerturbationSpec {
    fn base(mode: PerturbationMode) -> Self {
        PerturbationSpec {
            mode,
            epsilon: 0.0,
            chi: 0.0,
            theta: None,
            waveform: Waveform::Constant,
            impulse_signs: vec![],
            delta_a: None,
            eps_f: None,
            eps_j: None,
            delta_order: None,
        }
    }

    pub fn uh(epsilon: f64, waveform: Waveform) -> Self {
        PerturbationSpec { epsilon, waveform, ..Self::base(PerturbationMode::Uh) }
    }

    pub fn uhr_scaled(epsilon: f64, chi: f64, theta: TimeFunction, waveform: Waveform) -> Self {
        PerturbationSpec { epsilon, chi, theta: Some(theta), waveform, ..Self::base(PerturbationMode::UhrScaled) }
    }

    pub fn uhr_pair(chi: f64, theta: TimeFunction, waveform: Waveform) -> Self {
        PerturbationSpec { epsilon: 1.0, chi, theta: Some(theta), waveform, ..Self::base(PerturbationMode::UhrPair) }
    }

    pub fn ic_shift(delta_a: f64) -> Self {
        PerturbationSpec { delta_a: Some(delta_a), ..Self::base(PerturbationMode::IcShift) }
    }

    /// Shifts `u_a` by `delta_a`, `f` by `eps_f` times the waveform and each
    /// impulse map by `eps_j` times its sign.
    pub fn data_shift(delta_a: f64, eps_f: f64, eps_j: f64, waveform: Waveform) -> Self {
        PerturbationSpec {
            delta_a: Some(delta_a),
            eps_f: Some(eps_f),
            eps_j: Some(eps_j),
            waveform,
            ..Self::base(PerturbationMode::DataShift)
        }
    }

    pub fn order_shift(delta: f64) -> Self {
        PerturbationSpec { delta_order: Some(delta), ..Self::base(PerturbationMode::OrderShift) }
    }

    pub fn with_impulse_signs(mut self, signs: Vec<f64>) -> Self {
        self.impulse_signs = signs;
        self
    }

    fn validate(&self, m: usize) -> Result<()> {
        use PerturbationMode::*;
        let mismatch = |what: &str| Err(param(format!("mode {:?} requires {what}", self.mode)));
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite() && self.chi >= 0.0 && self.chi.is_finite()) {
            return Err(param("epsilon and chi must be finite and nonnegative"));
        }
        if !self.impulse_signs.is_empty() && self.impulse_signs.len() != m {
            return Err(param(format!("{} impulse signs given for {m} impulses", self.impulse_signs.len())));
        }
        if self.impulse_signs.iter().any(|s| s.abs() != 1.0) {
            return Err(param("impulse signs must be +1 or -1"));
        }
        match self.mode {
            UhrPair | UhrScaled if self.theta.is_none() => mismatch("a weight theta"),
            IcShift if self.delta_a.is_none() => mismatch("delta_a"),
            DataShift if self.eps_f.is_none() || self.eps_j.is_none() => mismatch("eps_f and eps_J"),
            OrderShift if self.delta_order.is_none() => mismatch("an order shift"),
            _ => Ok(()),
        }
    }

    fn sign(&self, k: usize) -> f64 {
        self.impulse_signs.get(k).copied().unwrap_or(1.0)
    }
}

/// Adds `scale(t) * clamp(shape(t))` to the right-hand side.
fn shifted_rhs(rhs: &Rhs, phi: &PhiFunction, shape: TimeFunction, scale: Option<(f64, TimeFunction)>, eps: f64) -> Rhs {
    let (rhs, phi) = (rhs.clone(), phi.clone());
    let label = match &scale {
        Some((_, theta)) => format!("{} + {eps}*{}*{}", rhs.label(), theta.label(), shape.label()),
        None => format!("{} + {eps}*{}", rhs.label(), shape.label()),
    };
    Rhs::native(label, move |t, u| {
        let mut e = eps * shape.eval(t, &phi)?.clamp(-1.0, 1.0);
        if let Some((_, theta)) = &scale {
            e *= theta.eval(t, &phi)?;
        }
        Ok(rhs.eval(t, u, &phi)? + e)
    })
}

fn shifted_map(map: &ImpulseMap, phi: &PhiFunction, shift: f64) -> ImpulseMap {
    if shift == 0.0 {
        return map.clone();
    }
    let (map, phi) = (map.clone(), phi.clone());
    ImpulseMap::native(format!("{} + {shift}", map.label()), move |u| Ok(map.eval(u, &phi)? + shift))
}

/// The perturbed problem described by `spec`; `problem` itself is untouched.
pub fn perturb_problem(problem: &ImpulsiveProblem, spec: &PerturbationSpec) -> Result<ImpulsiveProblem> {
    use PerturbationMode::*;
    spec.validate(problem.m())?;
    let mut out = problem.clone();
    let (phi, a, t_end) = (&problem.phi, problem.a, problem.t_end);
    let shape = || spec.waveform.build(phi, a, t_end);
    let map_shift = |out: &mut ImpulsiveProblem, size: f64| {
        for (k, map) in out.impulse_maps.iter_mut().enumerate() {
            *map = shifted_map(map, phi, size * spec.sign(k));
        }
    };
    match spec.mode {
        Uh => {
            if spec.epsilon > 0.0 {
                out.rhs = shifted_rhs(&problem.rhs, phi, shape()?, None, spec.epsilon);
            }
            map_shift(&mut out, spec.epsilon);
        }
        UhrPair | UhrScaled => {
            let theta = spec.theta.clone().expect("validated");
            let eps = if spec.mode == UhrPair { 1.0 } else { spec.epsilon };
            if eps > 0.0 {
                out.rhs = shifted_rhs(&problem.rhs, phi, shape()?, Some((eps, theta)), eps);
            }
            map_shift(&mut out, eps * spec.chi);
        }
        IcShift => out.u_a += spec.delta_a.expect("validated"),
        DataShift => {
            out.u_a += spec.delta_a.unwrap_or(0.0);
            let eps_f = spec.eps_f.expect("validated");
            if eps_f != 0.0 {
                out.rhs = shifted_rhs(&problem.rhs, phi, shape()?, None, eps_f);
            }
            map_shift(&mut out, spec.eps_j.expect("validated"));
        }
        OrderShift => {
            let d = spec.delta_order.expect("validated");
            out.order = problem.order.with_delta(d)?.shifted().expect("delta attached");
        }
    }
    out.validate()?;
    Ok(out)
}

/// One node of a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReportNode {
    pub subinterval: usize,
    pub t: f64,
    pub empirical: f64,
    pub theoretical: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    /// The bound at the node where the margin is smallest.
    pub theoretical_bound: f64,
    /// Weighted sup-norm of the difference.
    pub empirical_quantity: f64,
    /// Smallest `theoretical - empirical` over the nodes.
    pub margin: f64,
    pub pass: bool,
    pub numerical_slack: f64,
    pub provenance: &'static str,
    /// Whether the bound varies along the nodes.
    pub per_node: bool,
    pub curve: Vec<ReportNode>,
    /// Measured or fitted inputs of the bound.
    pub parameters: BTreeMap<String, f64>,
}

impl BoundReport {
    fn new(provenance: &'static str, per_node: bool, curve: Vec<ReportNode>, slack: f64) -> Self {
        let mut r = BoundReport {
            theoretical_bound: 0.0,
            empirical_quantity: curve.iter().fold(0.0, |m, n| m.max(n.empirical)),
            margin: 0.0,
            pass: false,
            numerical_slack: slack,
            provenance,
            per_node,
            curve,
            parameters: BTreeMap::new(),
        };
        r.settle();
        r
    }

    fn settle(&mut self) {
        let worst = self
            .curve
            .iter()
            .min_by(|x, y| (x.theoretical - x.empirical).total_cmp(&(y.theoretical - y.empirical)));
        (self.margin, self.theoretical_bound) = match worst {
            Some(n) => (n.theoretical - n.empirical, n.theoretical),
            None => (f64::INFINITY, 0.0),
        };
        self.pass = self.margin >= -self.numerical_slack;
    }

    /// The same report with every theoretical value multiplied by `factor`.
    pub fn scaled(mut self, factor: f64) -> Self {
        self.curve.iter_mut().for_each(|n| n.theoretical *= factor);
        self.settle();
        self
    }

    fn with(mut self, key: &str, value: f64) -> Self {
        self.parameters.insert(key.to_string(), value);
        self
    }
}

/// Solves every problem concurrently at `n` cells per subinterval.
fn solve_all(problems: &[&ImpulsiveProblem], n: usize, config: &SolverConfig) -> Result<Vec<PiecewiseSolution>> {
    std::thread::scope(|s| {
        let handles: Vec<_> = problems
            .iter()
            .map(|p| s.spawn(move || solve_picard(p, n, config.tol, config.max_iter)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("solver thread panicked")).collect()
    })
}

/// Original and perturbed solutions at full and half resolution.
struct Pair {
    fine: (PiecewiseSolution, PiecewiseSolution),
    coarse: (PiecewiseSolution, PiecewiseSolution),
}

/// `(subinterval, t, value)` per node.
type Curve = Vec<(usize, f64, f64)>;

impl Pair {
    fn solve(original: &ImpulsiveProblem, perturbed: &ImpulsiveProblem, config: &SolverConfig) -> Result<Self> {
        config.validate()?;
        let n = config.nodes_per_subinterval;
        if !n.is_multiple_of(2) || n < 16 {
            return Err(param(format!("certificates need an even resolution of at least 16, got {n}")));
        }
        let ps = [original, perturbed, original, perturbed];
        let mut s = std::thread::scope(|scope| {
            let fine = scope.spawn(|| solve_all(&ps[..2], n, config));
            let coarse = solve_all(&ps[2..], n / 2, config);
            Ok::<_, Error>((fine.join().expect("solver thread panicked")?, coarse?))
        })?;
        let (c1, c0) = (s.1.pop().unwrap(), s.1.pop().unwrap());
        let (f1, f0) = (s.0.pop().unwrap(), s.0.pop().unwrap());
        Ok(Pair { fine: (f0, f1), coarse: (c0, c1) })
    }

    fn curves(&self) -> Result<(Curve, Curve)> {
        Ok((self.fine.0.weighted_difference(&self.fine.1)?, self.coarse.0.weighted_difference(&self.coarse.1)?))
    }

    /// Difference curve at full resolution and an estimate of its
    /// discretisation error from the half-resolution curve.
    fn difference(&self) -> Result<(Curve, f64)> {
        let (fine, coarse) = self.curves()?;
        Ok((fine.iter().map(|&(k, t, d)| (k, t, d.abs())).collect(), refinement_gap(&fine, &coarse)))
    }
}

/// Largest `| |d_fine| - |d_coarse| |` over the coarse nodes.
fn refinement_gap(fine: &[(usize, f64, f64)], coarse: &[(usize, f64, f64)]) -> f64 {
    let mut gap = 0.0f64;
    let mut j = 0;
    for &(k, t, d) in coarse {
        while j < fine.len() && (fine[j].0 < k || (fine[j].0 == k && fine[j].1 < t - 1e-12 * (1.0 + t.abs()))) {
            j += 1;
        }
        if let Some(&(kf, tf, df)) = fine.get(j) {
            if kf == k && (tf - t).abs() <= 1e-12 * (1.0 + t.abs()) {
                gap = gap.max((df.abs() - d.abs()).abs());
            }
        }
    }
    gap
}

fn slack(config: &SolverConfig, gap: f64) -> f64 {
    10.0 * (config.tol + gap)
}

fn constant_curve(curve: Curve, bound: f64) -> Vec<ReportNode> {
    curve
        .into_iter()
        .map(|(subinterval, t, empirical)| ReportNode { subinterval, t, empirical, theoretical: bound })
        .collect()
}

fn require_mode(spec: &PerturbationSpec, modes: &[PerturbationMode]) -> Result<()> {
    if modes.contains(&spec.mode) {
        Ok(())
    } else {
        Err(param(format!("check expects mode {modes:?}, got {:?}", spec.mode)))
    }
}

/// Uniform perturbation of size `eps` against `C_uh eps`.
pub fn check_uh(problem: &ImpulsiveProblem, spec: &PerturbationSpec, config: &SolverConfig) -> Result<BoundReport> {
    require_mode(spec, &[PerturbationMode::Uh])?;
    let perturbed = perturb_problem(problem, spec)?;
    let pair = Pair::solve(problem, &perturbed, config)?;
    let (curve, gap) = pair.difference()?;
    let o = problem.order;
    let c = uh_constant(problem.m(), o.rho, o.sigma, &problem.phi, problem.a, problem.t_end)?;
    Ok(BoundReport::new("Ulam-Hyers: C_uh * eps", false, constant_curve(curve, c * spec.epsilon), slack(config, gap))
        .with("C_uh", c)
        .with("epsilon", spec.epsilon))
}

/// Nodes at which the weight is sampled when fitting `lambda_theta`.
const LAMBDA_NODES: usize = 400;

/// Perturbation bounded by `eps theta(t)` and `eps chi` against the per-node
/// envelope `C_uhr eps (theta(t) + chi)`; with mode `uhr_pair`, `eps = 1`.
pub fn check_uhr(problem: &ImpulsiveProblem, spec: &PerturbationSpec, config: &SolverConfig) -> Result<BoundReport> {
    require_mode(spec, &[PerturbationMode::UhrScaled, PerturbationMode::UhrPair])?;
    let theta = spec.theta.as_ref().ok_or_else(|| param("a weight theta is required"))?;
    let o = problem.order;
    let (phi, a, t_end) = (&problem.phi, problem.a, problem.t_end);
    let lambda = fit_lambda_theta(theta, o.rho, phi, a, t_end, LAMBDA_NODES)?;
    let c = uhr_constant(problem.m(), o.rho, o.sigma, lambda, phi, a, t_end)?;
    let eps = if spec.mode == PerturbationMode::UhrPair { 1.0 } else { spec.epsilon };
    let perturbed = perturb_problem(problem, spec)?;
    let pair = Pair::solve(problem, &perturbed, config)?;
    let (curve, gap) = pair.difference()?;
    let nodes = curve
        .into_iter()
        .map(|(subinterval, t, empirical)| {
            Ok(ReportNode { subinterval, t, empirical, theoretical: c * eps * (theta.eval(t, phi)? + spec.chi) })
        })
        .collect::<Result<_>>()?;
    Ok(BoundReport::new("Ulam-Hyers-Rassias: C_uhr * eps * (theta(t) + chi)", true, nodes, slack(config, gap))
        .with("C_uhr", c)
        .with("lambda_theta", lambda)
        .with("epsilon", eps)
        .with("chi", spec.chi))
}

/// Solutions from `u_a` and `v_a` against `|u_a - v_a| A_m / Gamma(sigma)`.
pub fn check_ic_dependence(problem: &ImpulsiveProblem, v_a: f64, config: &SolverConfig) -> Result<BoundReport> {
    let perturbed = perturb_problem(problem, &PerturbationSpec::ic_shift(v_a - problem.u_a))?;
    let pair = Pair::solve(problem, &perturbed, config)?;
    let (curve, gap) = pair.difference()?;
    let o = problem.order;
    let du = (problem.u_a - v_a).abs();
    let bound = ic_dependence_bound(du, problem.m(), o.rho, o.sigma, &problem.phi, problem.a, problem.t_end)?;
    Ok(BoundReport::new("initial-condition dependence", false, constant_curve(curve, bound), slack(config, gap))
        .with("delta_a", du))
}

/// Measured perturbation sizes between two problems on the same window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DataShift {
    pub delta_a: f64,
    pub eps_f: f64,
    pub eps_j: f64,
}

const SHIFT_TIMES: usize = 200;
const SHIFT_STATES: usize = 41;

/// Samples `|f - f~|` and `|J_k - J~_k|` on a box of states and along the
/// given solution.
pub fn measure_data_shift(
    problem: &ImpulsiveProblem,
    perturbed: &ImpulsiveProblem,
    along: &PiecewiseSolution,
) -> Result<DataShift> {
    if problem.order != perturbed.order
        || problem.phi != perturbed.phi
        || problem.a != perturbed.a
        || problem.t_end != perturbed.t_end
        || problem.impulse_times != perturbed.impulse_times
    {
        return Err(param("data perturbations must keep the order, kernel, window and impulse times"));
    }
    let phi = &problem.phi;
    let radius = 10.0 * problem.u_a.abs().max(perturbed.u_a.abs()).max(1.0);
    let states: Vec<f64> = (0..SHIFT_STATES).map(|i| radius * (2.0 * i as f64 / (SHIFT_STATES - 1) as f64 - 1.0)).collect();
    let (xa, xt) = (phi.eval(problem.a)?, phi.eval(problem.t_end)?);
    let gap = |t: f64, u: f64| -> Result<f64> {
        Ok((problem.rhs.eval(t, u, phi)? - perturbed.rhs.eval(t, u, phi)?).abs())
    };
    let mut eps_f = 0.0f64;
    for i in 1..=SHIFT_TIMES {
        let x = xa + (xt - xa) * i as f64 / SHIFT_TIMES as f64;
        let t = if i == SHIFT_TIMES { problem.t_end } else { phi.inverse(x, problem.a, problem.t_end)? };
        for &u in &states {
            eps_f = eps_f.max(gap(t, u)?);
        }
    }
    let sigma = problem.order.sigma;
    for (_, t, w) in along.slots().filter(|&(_, t, _)| t > problem.a) {
        let u = w * (phi.eval(t)? - xa).powf(sigma - 1.0);
        eps_f = eps_f.max(gap(t, u)?);
    }
    let mut eps_j = 0.0f64;
    let left_limits: Vec<f64> = along
        .segments
        .iter()
        .take(problem.m())
        .map(|s| {
            let last = s.len() - 1;
            s.raw_value(last).map(|v| v.unwrap_or(0.0))
        })
        .collect::<Result<_>>()?;
    for (k, (j, jt)) in problem.impulse_maps.iter().zip(&perturbed.impulse_maps).enumerate() {
        for &u in states.iter().chain(std::iter::once(&left_limits[k])) {
            eps_j = eps_j.max((j.eval(u, phi)? - jt.eval(u, phi)?).abs());
        }
    }
    Ok(DataShift { delta_a: (problem.u_a - perturbed.u_a).abs(), eps_f, eps_j })
}

/// Solutions of two problems differing in data, against the data-dependence
/// bound with measured perturbation sizes.
pub fn check_data_dependence(
    problem: &ImpulsiveProblem,
    perturbed: &ImpulsiveProblem,
    config: &SolverConfig,
) -> Result<BoundReport> {
    let pair = Pair::solve(problem, perturbed, config)?;
    let (curve, gap) = pair.difference()?;
    let shift = measure_data_shift(problem, perturbed, &pair.fine.0)?;
    let o = problem.order;
    let bound = data_dependence_bound(
        shift.delta_a,
        shift.eps_f,
        shift.eps_j,
        problem.m(),
        o.rho,
        o.sigma,
        &problem.phi,
        problem.a,
        problem.t_end,
    )?;
    Ok(BoundReport::new("data dependence", false, constant_curve(curve, bound), slack(config, gap))
        .with("delta_a", shift.delta_a)
        .with("eps_f", shift.eps_f)
        .with("eps_J", shift.eps_j))
}

/// Solution of order `rho` against the one of order `rho - delta` from the
/// same initial datum.
pub fn check_order_dependence(problem: &ImpulsiveProblem, delta: f64, config: &SolverConfig) -> Result<BoundReport> {
    check_order_dependence_from(problem, delta, problem.u_a, config)
}

/// As [`check_order_dependence`], with the shifted problem started from `v_a`.
/// The envelope is the running maximum of the corrected shift profile.
pub fn check_order_dependence_from(
    problem: &ImpulsiveProblem,
    delta: f64,
    v_a: f64,
    config: &SolverConfig,
) -> Result<BoundReport> {
    let mut shifted = perturb_problem(problem, &PerturbationSpec::order_shift(delta))?;
    shifted.u_a = v_a;
    let pair = Pair::solve(problem, &shifted, config)?;
    let (curve, gap) = pair.difference()?;
    let v = &pair.fine.1;

    // Sup of the sigma-weighted rhs along v.
    let (phi, sigma) = (&problem.phi, problem.order.sigma);
    let xa = phi.eval(problem.a)?;
    let mut f_norm = 0.0f64;
    for (_, t, w) in v.slots().filter(|&(_, t, _)| t > problem.a) {
        let y = phi.eval(t)? - xa;
        let u = w * y.powf(v.order.sigma - 1.0);
        f_norm = f_norm.max(y.powf(1.0 - sigma) * problem.rhs.eval(t, u, phi)?.abs());
    }
    let sampled = estimate_impulse_bounds(problem)?;
    let zeta: f64 = sampled.iter().zip(&v.jump_values).map(|(z, j)| z.max(j.abs())).sum();

    let inputs = OrderShiftInputs {
        delta,
        u_a: problem.u_a,
        v_a,
        zeta,
        f_norm,
        order: problem.order,
        phi: phi.clone(),
        a: problem.a,
        t_end: problem.t_end,
        m: problem.m(),
    };
    let ts: Vec<f64> = curve.iter().map(|c| c.1).collect();
    let envelope = order_dependence_envelope(&ts, &inputs)?;
    let nodes = curve
        .into_iter()
        .zip(envelope)
        .map(|((subinterval, t, empirical), theoretical)| ReportNode { subinterval, t, empirical, theoretical })
        .collect();
    Ok(BoundReport::new("order dependence (corrected shift profile)", true, nodes, slack(config, gap))
        .with("delta", delta)
        .with("f_norm", f_norm)
        .with("zeta", zeta))
}
