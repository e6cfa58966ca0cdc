//! Closed-form envelopes and stability constants for impulsive problems.
//!
//! Throughout, `span = phi(T) - phi(a)` and the recurring factor is
//!
//! ```text
//! A_m = (1 + E / Gamma(sigma))^m E,   E = E_rho(span^(1 - sigma + rho))
//! ```

use crate::error::{param, Error, Result};
use crate::frac_calc::Profile;
use crate::phi::PhiFunction;
use crate::quadrature::MomentRule;
use crate::solver::{FractionalOrder, ImpulsiveProblem, TimeFunction};
use crate::special::{beta_reg, gamma, ln_gamma, mittag_leffler};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Inputs of the impulsive Gronwall-type inequality
/// `U(t) <= V(t) + g(t) ∫ phi'(s) (phi(t)-phi(s))^(rho-1) U(s) ds + Σ_{t_k < t} beta_k U(t_k-)`.
pub struct GronwallInputs<'a> {
    pub v: &'a dyn Fn(f64) -> f64,
    pub g: &'a dyn Fn(f64) -> f64,
    pub betas: Vec<f64>,
    pub impulse_times: Vec<f64>,
    pub rho: f64,
    pub phi: PhiFunction,
    pub a: f64,
}

/// Right-hand side of the Gronwall conclusion at `t`.
pub fn gronwall_bound(inputs: &GronwallInputs<'_>, t: f64) -> Result<f64> {
    if inputs.betas.len() != inputs.impulse_times.len() {
        return Err(param("one beta per impulse time is required"));
    }
    if let Some(b) = inputs.betas.iter().find(|b| !(**b > 0.0)) {
        return Err(param(format!("impulse coefficients must be positive, got {b}")));
    }
    if !(inputs.rho > 0.0 && inputs.rho <= 1.0) {
        return Err(param(format!("rho must lie in (0, 1], got {}", inputs.rho)));
    }
    if !(t > inputs.a) {
        return Err(param(format!("need t > a, got t={t}")));
    }
    let (v, g) = ((inputs.v)(t), (inputs.g)(t));
    if !(v >= 0.0 && g >= 0.0) {
        return Err(param(format!("V and g must be nonnegative; V({t})={v}, g({t})={g}")));
    }
    let xa = inputs.phi.eval(inputs.a)?;
    let scale = g * gamma(inputs.rho)?;
    let mut bound = v * mittag_leffler(inputs.rho, scale * (inputs.phi.eval(t)? - xa).powf(inputs.rho))?;
    for (&tk, &beta) in inputs.impulse_times.iter().zip(&inputs.betas).filter(|(&tk, _)| tk < t) {
        bound *= 1.0 + beta * mittag_leffler(inputs.rho, scale * (inputs.phi.eval(tk)? - xa).powf(inputs.rho))?;
    }
    Ok(bound)
}

/// Quantities shared by every bound on a window `[a, T]`.
struct Window {
    gs: f64,
    /// `span^(1 - sigma + rho)`.
    reach: f64,
    /// `span^(1 - sigma)`.
    lift: f64,
    rho_fact: f64,
    factor_base: f64,
}

impl Window {
    fn new(rho: f64, sigma: f64, phi: &PhiFunction, a: f64, t_end: f64) -> Result<Self> {
        if !(rho > 0.0 && rho <= 1.0) {
            return Err(param(format!("rho must lie in (0, 1], got {rho}")));
        }
        if !(sigma > 0.0 && sigma <= 1.0) {
            return Err(param(format!("sigma must lie in (0, 1], got {sigma}")));
        }
        if !(a < t_end) {
            return Err(param(format!("need a < T, got a={a} T={t_end}")));
        }
        let span = phi.eval(t_end)? - phi.eval(a)?;
        if !(span > 0.0) {
            return Err(param("phi(T) - phi(a) must be positive"));
        }
        let reach = span.powf(1.0 - sigma + rho);
        Ok(Window {
            gs: gamma(sigma)?,
            reach,
            lift: span.powf(1.0 - sigma),
            rho_fact: gamma(rho + 1.0)?,
            factor_base: mittag_leffler(rho, reach)?,
        })
    }

    fn factor(&self, m: usize) -> f64 {
        let e = self.factor_base;
        (1.0 + e / self.gs).powi(m as i32) * e
    }
}

fn nonnegative(name: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(param(format!("{name} must be finite and nonnegative, got {v}")))
    }
}

/// The factor `A_m` multiplying every a-priori and dependence bound.
pub fn apriori_factor(m: usize, rho: f64, sigma: f64, phi: &PhiFunction, a: f64, t_end: f64) -> Result<f64> {
    Ok(Window::new(rho, sigma, phi, a, t_end)?.factor(m))
}

/// Bound on the weighted norm of the solution, given `M* = sup |f(s, 0)|` and
/// `N* = max |J_k(0)|`.
pub fn apriori_solution_bound(problem: &ImpulsiveProblem, m_star: f64, n_star: f64) -> Result<f64> {
    nonnegative("M*", m_star)?;
    nonnegative("N*", n_star)?;
    let o = problem.order;
    let w = Window::new(o.rho, o.sigma, &problem.phi, problem.a, problem.t_end)?;
    let m = problem.m() as f64;
    Ok(w.factor(problem.m()) * (problem.u_a.abs() / w.gs + m * n_star / w.gs + m_star * w.reach / w.rho_fact))
}

/// Sampled constants of a problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupConstants {
    /// `sup |f(s, 0)|` over the sample nodes.
    pub m_star: f64,
    /// `max |J_k(0)|`.
    pub n_star: f64,
    /// Largest sampled `y^(sigma-1) |f(t,u) - f(t,v)| / |u - v|`.
    pub lipschitz: f64,
    /// Largest sampled `y_k^(sigma-1) |J_k(u) - J_k(v)| / |u - v|`.
    pub impulse_lipschitz: f64,
}

impl SupConstants {
    /// Warning text when a sampled weighted Lipschitz constant exceeds 1; the
    /// bounds assume it does not.
    pub fn advisory(&self) -> Option<String> {
        let worst = self.lipschitz.max(self.impulse_lipschitz);
        (worst > 1.0).then(|| {
            format!(
                "warning: sampled weighted Lipschitz constant {worst:.6} exceeds 1 (rhs {:.6}, impulses {:.6}); \
                 the bounds are not certified for this problem",
                self.lipschitz, self.impulse_lipschitz
            )
        })
    }
}

/// Seed of the difference-quotient sampler.
const LIPSCHITZ_SEED: u64 = 0x4c49_5053;
const PAIRS_PER_NODE: usize = 16;

/// Sample nodes uniform in `phi` on `[a, T]`, endpoints included.
fn sample_nodes(phi: &PhiFunction, a: f64, t_end: f64, n: usize) -> Result<Vec<(f64, f64)>> {
    let (xa, xt) = (phi.eval(a)?, phi.eval(t_end)?);
    (0..n)
        .map(|i| {
            let x = xa + (xt - xa) * i as f64 / (n - 1) as f64;
            let t = match i {
                0 => a,
                i if i == n - 1 => t_end,
                _ => phi.inverse(x, a, t_end)?,
            };
            Ok((t, x - xa))
        })
        .collect()
}

/// A random pair `(u, v)`, `u != v`, spread over several scales around zero.
fn random_pair(rng: &mut ChaCha8Rng, radius: f64) -> (f64, f64) {
    let u = radius * rng.random_range(-1.0..1.0);
    let step = radius * 10f64.powf(rng.random_range(-4.0..0.0));
    let v = if rng.random_bool(0.5) { u + step } else { u - step };
    (u, v)
}

/// `M*` and `N*`, together with sampled weighted Lipschitz constants of the
/// right-hand side and the impulse maps.
pub fn estimate_sup_constants(problem: &ImpulsiveProblem, n_samples: usize) -> Result<SupConstants> {
    if n_samples < 2 {
        return Err(param(format!("need at least 2 samples, got {n_samples}")));
    }
    let phi = &problem.phi;
    let sigma = problem.order.sigma;
    let nodes = sample_nodes(phi, problem.a, problem.t_end, n_samples)?;
    let mut m_star = 0.0f64;
    for &(t, y) in &nodes {
        match problem.rhs.eval(t, 0.0, phi) {
            Ok(v) => m_star = m_star.max(v.abs()),
            // f may be singular at a itself; the supremum is then taken over (a, T].
            Err(_) if y == 0.0 => {}
            Err(e) => return Err(e),
        }
    }
    let n_star = problem
        .impulse_maps
        .iter()
        .map(|j| j.eval(0.0, phi).map(f64::abs))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);

    let radius = 10.0 * problem.u_a.abs().max(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(LIPSCHITZ_SEED);
    let mut lipschitz = 0.0f64;
    for &(t, y) in nodes.iter().filter(|(_, y)| *y > 0.0) {
        let weight = y.powf(sigma - 1.0);
        for _ in 0..PAIRS_PER_NODE {
            let (u, v) = random_pair(&mut rng, radius);
            let df = problem.rhs.eval(t, u, phi)? - problem.rhs.eval(t, v, phi)?;
            lipschitz = lipschitz.max(weight * df.abs() / (u - v).abs());
        }
    }
    let xa = phi.eval(problem.a)?;
    let mut impulse_lipschitz = 0.0f64;
    for (&tk, map) in problem.impulse_times.iter().zip(&problem.impulse_maps) {
        let weight = (phi.eval(tk)? - xa).powf(sigma - 1.0);
        for _ in 0..PAIRS_PER_NODE * 8 {
            let (u, v) = random_pair(&mut rng, radius);
            let dj = map.eval(u, phi)? - map.eval(v, phi)?;
            impulse_lipschitz = impulse_lipschitz.max(weight * dj.abs() / (u - v).abs());
        }
    }
    Ok(SupConstants { m_star, n_star, lipschitz, impulse_lipschitz })
}

/// Sampled bounds `zeta_k >= sup_u |J_k(u)|`, one per impulse, over
/// `|u| <= 1e6` on a logarithmic scale.
pub fn estimate_impulse_bounds(problem: &ImpulsiveProblem) -> Result<Vec<f64>> {
    let mut us = vec![0.0];
    for i in 0..=90 {
        let u = 10f64.powf(-3.0 + i as f64 / 10.0);
        us.push(u);
        us.push(-u);
    }
    problem
        .impulse_maps
        .iter()
        .map(|map| us.iter().try_fold(0.0f64, |m, &u| Ok(m.max(map.eval(u, &problem.phi)?.abs()))))
        .collect()
}

/// Bound on the weighted distance between solutions whose initial data
/// differ by `du`.
pub fn ic_dependence_bound(du: f64, m: usize, rho: f64, sigma: f64, phi: &PhiFunction, a: f64, t_end: f64) -> Result<f64> {
    nonnegative("initial data difference", du)?;
    let w = Window::new(rho, sigma, phi, a, t_end)?;
    Ok(du / w.gs * w.factor(m))
}

/// Bound on the weighted distance between solutions whose initial data,
/// right-hand sides and impulse maps differ by at most `delta_a`, `eps_f`, `eps_j`.
#[allow(clippy::too_many_arguments)]
pub fn data_dependence_bound(
    delta_a: f64,
    eps_f: f64,
    eps_j: f64,
    m: usize,
    rho: f64,
    sigma: f64,
    phi: &PhiFunction,
    a: f64,
    t_end: f64,
) -> Result<f64> {
    nonnegative("delta_a", delta_a)?;
    nonnegative("eps_f", eps_f)?;
    nonnegative("eps_J", eps_j)?;
    let w = Window::new(rho, sigma, phi, a, t_end)?;
    Ok((delta_a / w.gs + m as f64 * eps_j / w.gs + w.reach / w.rho_fact * eps_f) * w.factor(m))
}

/// Data of the comparison between the solution of order `rho` and the one of
/// order `rho - delta` (same type `nu`).
#[derive(Debug, Clone)]
pub struct OrderShiftInputs {
    pub delta: f64,
    pub u_a: f64,
    pub v_a: f64,
    /// Sum of the impulse-map bounds.
    pub zeta: f64,
    /// `sup (phi(t)-phi(a))^(1-sigma) |f(t, v(t))|` along the shifted solution.
    pub f_norm: f64,
    /// The unshifted order.
    pub order: FractionalOrder,
    pub phi: PhiFunction,
    pub a: f64,
    pub t_end: f64,
    pub m: usize,
}

impl OrderShiftInputs {
    fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta < self.order.rho) {
            return Err(param(format!("order shift must lie in (0, rho = {}), got {}", self.order.rho, self.delta)));
        }
        nonnegative("zeta", self.zeta)?;
        nonnegative("f norm", self.f_norm)?;
        if !(self.u_a.is_finite() && self.v_a.is_finite()) {
            return Err(param("initial data must be finite"));
        }
        Ok(())
    }

    fn sigma_star(&self) -> f64 {
        self.order.sigma + self.delta * (self.order.nu - 1.0)
    }

    fn y(&self, t: f64) -> Result<f64> {
        if !(t > self.a && t <= self.t_end) {
            return Err(param(format!("need a < t <= T, got t={t}")));
        }
        Ok(self.phi.eval(t)? - self.phi.eval(self.a)?)
    }

    /// The two leading terms, from the initial data and the impulses.
    fn data_terms(&self, y: f64) -> Result<f64> {
        let (gs, gss) = (gamma(self.order.sigma)?, gamma(self.sigma_star())?);
        let shift = y.powf(self.delta * (self.order.nu - 1.0)) / gss;
        Ok((self.u_a / gs - self.v_a * shift).abs() + self.zeta * (1.0 / gs - shift).abs())
    }

    /// The direct shift profile: the data terms plus
    /// `|f| Gamma(sigma) (y^rho / Gamma(sigma + rho) - y^(rho - delta) / Gamma(sigma + rho - delta))`.
    /// The last term is negative whenever the `rho - delta` kernel dominates.
    pub fn shift_profile(&self, t: f64) -> Result<f64> {
        self.validate()?;
        let y = self.y(t)?;
        let (rho, sigma, d) = (self.order.rho, self.order.sigma, self.delta);
        let gs = gamma(sigma)?;
        let kernel = gs * (y.powf(rho) / gamma(sigma + rho)? - y.powf(rho - d) / gamma(sigma + rho - d)?);
        Ok(self.data_terms(y)? + self.f_norm * kernel)
    }

    /// The shift profile with the kernel term replaced by
    /// `|f| y^(1-sigma) ∫_0^y |K_rho(r) - K_{rho-delta}(r)| (y - r)^(sigma-1) dr`,
    /// `K_alpha(r) = r^(alpha-1) / Gamma(alpha)`, which is always nonnegative.
    pub fn corrected_profile(&self, t: f64) -> Result<f64> {
        self.validate()?;
        let y = self.y(t)?;
        let (rho, sigma, d) = (self.order.rho, self.order.sigma, self.delta);
        let gs = gamma(sigma)?;
        // The kernels cross once, at r_cross; the shifted one is larger below it.
        let r_cross = ((ln_gamma(rho)? - ln_gamma(rho - d)?) / d).exp();
        let split = (r_cross / y).min(1.0);
        // y^(1-sigma) ∫_{lo y}^{hi y} K_alpha(r) (y-r)^(sigma-1) dr.
        let part = |alpha: f64, lo: f64, hi: f64| -> Result<f64> {
            let c = gs * y.powf(alpha) / gamma(alpha + sigma)?;
            Ok(c * (beta_reg(alpha, sigma, hi) - beta_reg(alpha, sigma, lo)))
        };
        let below = part(rho - d, 0.0, split)? - part(rho, 0.0, split)?;
        let above = part(rho, split, 1.0)? - part(rho - d, split, 1.0)?;
        Ok(self.data_terms(y)? + self.f_norm * (below.abs() + above.abs()))
    }
}

/// The direct order-dependence bound at `t`: shift profile times `A_m`.
pub fn order_dependence_bound(t: f64, inputs: &OrderShiftInputs) -> Result<f64> {
    let o = inputs.order;
    Ok(inputs.shift_profile(t)? * apriori_factor(inputs.m, o.rho, o.sigma, &inputs.phi, inputs.a, inputs.t_end)?)
}

/// Certified order-dependence envelope at increasing times `ts`: the running
/// maximum of the corrected profile, times `A_m`. Times equal to `a` get the
/// value at the first later time.
pub fn order_dependence_envelope(ts: &[f64], inputs: &OrderShiftInputs) -> Result<Vec<f64>> {
    if ts.windows(2).any(|w| w[1] < w[0]) {
        return Err(param("times must be nondecreasing"));
    }
    let o = inputs.order;
    let factor = apriori_factor(inputs.m, o.rho, o.sigma, &inputs.phi, inputs.a, inputs.t_end)?;
    let lead = ts.iter().take_while(|&&t| t <= inputs.a).count();
    let mut out = Vec::with_capacity(ts.len());
    let mut running = 0.0f64;
    for &t in &ts[lead..] {
        running = running.max(inputs.corrected_profile(t)?);
        out.push(running * factor);
    }
    let first = out.first().copied().unwrap_or(0.0);
    out.splice(0..0, std::iter::repeat_n(first, lead));
    Ok(out)
}

/// Ulam-Hyers constant `A_m (m / Gamma(sigma) + span^(1-sigma+rho) / Gamma(rho+1))`.
pub fn uh_constant(m: usize, rho: f64, sigma: f64, phi: &PhiFunction, a: f64, t_end: f64) -> Result<f64> {
    let w = Window::new(rho, sigma, phi, a, t_end)?;
    Ok(w.factor(m) * (m as f64 / w.gs + w.reach / w.rho_fact))
}

/// Ulam-Hyers-Rassias constant `(m / Gamma(sigma) + lambda span^(1-sigma)) A_m`.
#[allow(clippy::too_many_arguments)]
pub fn uhr_constant(
    m: usize,
    rho: f64,
    sigma: f64,
    lambda_theta: f64,
    phi: &PhiFunction,
    a: f64,
    t_end: f64,
) -> Result<f64> {
    if !(lambda_theta > 0.0 && lambda_theta.is_finite()) {
        return Err(param(format!("lambda must be positive, got {lambda_theta}")));
    }
    let w = Window::new(rho, sigma, phi, a, t_end)?;
    Ok((m as f64 / w.gs + lambda_theta * w.lift) * w.factor(m))
}

/// Inflation applied to the sampled ratio.
pub const LAMBDA_INFLATION: f64 = 1.05;

/// Smallest sampled `lambda` with `I^rho theta <= lambda theta` on nodes
/// uniform in `phi`, inflated by 5%. `theta` must be positive and
/// nondecreasing at the nodes after `a`.
pub fn fit_lambda_theta(
    theta: &TimeFunction,
    rho: f64,
    phi: &PhiFunction,
    a: f64,
    t_end: f64,
    n_nodes: usize,
) -> Result<f64> {
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(param(format!("rho must lie in (0, 1], got {rho}")));
    }
    if n_nodes < 3 {
        return Err(param(format!("need at least 3 nodes, got {n_nodes}")));
    }
    let nodes = sample_nodes(phi, a, t_end, n_nodes)?;
    let mut values = Vec::with_capacity(n_nodes);
    for (i, &(t, _)) in nodes.iter().enumerate().skip(1) {
        let v = theta.eval(t, phi)?;
        if !(v > 0.0) {
            return Err(Error::Hypothesis(format!("theta must be positive, but theta({t}) = {v}")));
        }
        if let Some(&prev) = values.last() {
            if v < prev {
                return Err(Error::Hypothesis(format!(
                    "theta must be nondecreasing, but it drops from {prev} to {v} near t = {t} (node {i})"
                )));
            }
        }
        values.push(v);
    }
    // The value at a only enters the first cell of the quadrature.
    let at_a = match theta.eval(a, phi) {
        Ok(v) if v <= values[0] => v,
        Ok(v) => {
            return Err(Error::Hypothesis(format!("theta must be nondecreasing, but theta(a) = {v} > {}", values[0])))
        }
        Err(_) => (2.0 * values[0] - values[1]).max(0.0),
    };
    values.insert(0, at_a);
    let profile = Profile { y: nodes.iter().map(|n| n.1).collect(), v: values };
    let integral = profile.integrate_slots(MomentRule::new(rho, 0.0, 1.0));
    let g = gamma(rho)?;
    let ratio = integral.iter().zip(&profile.v).skip(1).map(|(i, v)| i / g / v).fold(0.0, f64::max);
    Ok(LAMBDA_INFLATION * ratio)
}

/// Every constant of a problem in one record.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StabilityConstants {
    pub a_factor: f64,
    pub c_uh: f64,
    /// Present when a weight `theta` was supplied.
    pub c_uhr: Option<f64>,
    pub lambda_theta: Option<f64>,
    pub chi: f64,
    pub epsilon: f64,
    pub m_star: f64,
    pub n_star: f64,
    pub zeta: f64,
    pub delta_a: f64,
    pub eps_f: f64,
    pub eps_j: f64,
}

impl StabilityConstants {
    /// Constants from sampled problem data; the perturbation magnitudes start at zero.
    pub fn compute(
        problem: &ImpulsiveProblem,
        sup: &SupConstants,
        zeta: f64,
        lambda_theta: Option<f64>,
    ) -> Result<Self> {
        let o = problem.order;
        let (m, phi, a, t) = (problem.m(), &problem.phi, problem.a, problem.t_end);
        let c_uhr = lambda_theta.map(|l| uhr_constant(m, o.rho, o.sigma, l, phi, a, t)).transpose()?;
        Ok(StabilityConstants {
            a_factor: apriori_factor(m, o.rho, o.sigma, phi, a, t)?,
            c_uh: uh_constant(m, o.rho, o.sigma, phi, a, t)?,
            c_uhr,
            lambda_theta,
            chi: 0.0,
            epsilon: 0.0,
            m_star: sup.m_star,
            n_star: sup.n_star,
            zeta,
            delta_a: 0.0,
            eps_f: 0.0,
            eps_j: 0.0,
        })
    }
}
