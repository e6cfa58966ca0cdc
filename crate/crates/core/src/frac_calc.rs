//! Fractional integral and Hilfer-type derivative taken with respect to a
//! kernel function `phi`, on grids of nodes.
//!
//! Everything is computed in the shifted variable `y = phi(s) - phi(a)`, where
//! the operators become classical Riemann-Liouville ones.

use crate::error::{param, Error, Result};
use crate::phi::PhiFunction;
use crate::quadrature::{CellTable, MomentRule};
use crate::special::{beta_fn, gamma};

/// Grid values of `w(t) = (phi(t) - phi(a))^(1-sigma) u(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGridFunction {
    pub grid: Vec<f64>,
    pub weighted_values: Vec<f64>,
    pub sigma: f64,
    pub phi: PhiFunction,
    pub a: f64,
}

impl WeightedGridFunction {
    pub fn new(grid: Vec<f64>, weighted_values: Vec<f64>, sigma: f64, phi: PhiFunction, a: f64) -> Result<Self> {
        if grid.is_empty() || grid.len() != weighted_values.len() {
            return Err(param(format!(
                "grid and values must be nonempty and of equal length ({} vs {})",
                grid.len(),
                weighted_values.len()
            )));
        }
        if !(sigma > 0.0 && sigma <= 1.0) {
            return Err(param(format!("sigma must lie in (0, 1], got {sigma}")));
        }
        if grid[0] < a {
            return Err(param(format!("first node {} lies left of a = {a}", grid[0])));
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(param("grid must be strictly increasing"));
        }
        if let Some(i) = weighted_values.iter().position(|v| !v.is_finite()) {
            return Err(param(format!("weighted value at node {i} is not finite")));
        }
        Ok(WeightedGridFunction { grid, weighted_values, sigma, phi, a })
    }

    /// Samples `u` at the nodes; `u` is not evaluated at `a` itself, where
    /// `weight_at_a` supplies the weighted limit instead.
    pub fn from_raw(
        grid: Vec<f64>,
        sigma: f64,
        phi: PhiFunction,
        a: f64,
        weight_at_a: f64,
        u: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        let xa = phi.eval(a)?;
        let mut w = Vec::with_capacity(grid.len());
        for &t in &grid {
            if t == a {
                w.push(weight_at_a);
            } else {
                w.push((phi.eval(t)? - xa).powf(1.0 - sigma) * u(t));
            }
        }
        WeightedGridFunction::new(grid, w, sigma, phi, a)
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// `u(t_i)`; `None` at `t = a` when `sigma < 1` (the raw value is singular there).
    pub fn raw_value(&self, i: usize) -> Result<Option<f64>> {
        let t = self.grid[i];
        let y = self.phi.eval(t)? - self.phi.eval(self.a)?;
        if y == 0.0 {
            return Ok((self.sigma == 1.0).then_some(self.weighted_values[i]));
        }
        Ok(Some(self.weighted_values[i] * y.powf(self.sigma - 1.0)))
    }

    fn offsets(&self) -> Result<Vec<f64>> {
        let xa = self.phi.eval(self.a)?;
        self.grid.iter().map(|&t| Ok(self.phi.eval(t)? - xa)).collect()
    }
}

/// `max_i |w_i|`.
pub fn weighted_norm(u: &WeightedGridFunction) -> f64 {
    u.weighted_values.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// What the fractional integral acts on.
pub enum Integrand<'a> {
    /// Grid function in weighted form; interpolated linearly in `phi` between nodes.
    Grid(&'a WeightedGridFunction),
    /// A function of `t`, sampled on a grid uniform in `phi`.
    Callable(&'a dyn Fn(f64) -> Result<f64>),
    /// `f(t)` known to behave like `(phi(t) - phi(a))^exponent` times a smooth
    /// factor at `a`; the power is integrated exactly against the kernel.
    Singular { f: &'a dyn Fn(f64) -> Result<f64>, exponent: f64 },
}

impl<'a> From<&'a WeightedGridFunction> for Integrand<'a> {
    fn from(g: &'a WeightedGridFunction) -> Self {
        Integrand::Grid(g)
    }
}

/// Left fractional integral of order `rho` with respect to `phi`, from `a` to `t`.
///
/// Callable integrands are sampled at `n_nodes` points uniform in `phi` over
/// `[a, t]`; grid integrands use their own nodes and ignore `n_nodes`.
pub fn frac_integral<'a>(
    phi: &PhiFunction,
    rho: f64,
    f: impl Into<Integrand<'a>>,
    a: f64,
    t: f64,
    n_nodes: usize,
) -> Result<f64> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(param(format!("integration order must be positive, got {rho}")));
    }
    if !(a < t) {
        return Err(param(format!("need a < t (a={a}, t={t})")));
    }
    let (f, exponent) = match f.into() {
        Integrand::Grid(g) => return grid_integral(phi, rho, g, a, t),
        Integrand::Callable(f) => (f, 0.0),
        Integrand::Singular { f, exponent } => {
            if !(exponent > -1.0) {
                return Err(param(format!("endpoint exponent must exceed -1, got {exponent}")));
            }
            (f, exponent)
        }
    };
    if n_nodes < 2 {
        return Err(param(format!("need at least 2 nodes, got {n_nodes}")));
    }
    let xa = phi.eval(a)?;
    let big_y = phi.eval(t)? - xa;
    let cells = n_nodes - 1;
    let y: Vec<f64> = (0..n_nodes)
        .map(|i| if i == cells { big_y } else { big_y * i as f64 / cells as f64 })
        .collect();
    let mut g = vec![0.0; n_nodes];
    for i in 1..n_nodes {
        let s = if i == cells { t } else { phi.inverse(xa + y[i], a, t)? };
        let v = f(s).map_err(|e| Error::Evaluation(format!("integrand at t={s}: {e}")))?;
        if !v.is_finite() {
            return Err(Error::Evaluation(format!("integrand is not finite at t={s}")));
        }
        g[i] = if exponent == 0.0 { v } else { v * y[i].powf(-exponent) };
    }
    let at_a = if exponent == 0.0 { f(a).ok().filter(|v| v.is_finite()) } else { None };
    g[0] = match at_a {
        Some(v) => v,
        None if n_nodes > 2 => 2.0 * g[1] - g[2],
        None => g[1],
    };
    let profile = Profile { y, v: g };
    let rule = MomentRule::new(rho, exponent, 1.0);
    Ok(profile.integrate_at(rule, big_y) / gamma(rho)?)
}

fn grid_integral(phi: &PhiFunction, rho: f64, g: &WeightedGridFunction, a: f64, t: f64) -> Result<f64> {
    if g.a != a || g.phi != *phi {
        return Err(param("grid function was built for a different kernel or left endpoint"));
    }
    if g.grid[0] != a {
        return Err(Error::InsufficientGrid("grid must start at the left endpoint".into()));
    }
    if t > *g.grid.last().unwrap() {
        return Err(Error::OutOfRange(format!("t={t} lies beyond the last node")));
    }
    let profile = Profile { y: g.offsets()?, v: g.weighted_values.clone() };
    let d = phi.eval(t)? - phi.eval(a)?;
    let rule = MomentRule::new(rho, g.sigma - 1.0, 1.0);
    Ok(profile.integrate_at(rule, d) / gamma(rho)?)
}

/// `I^rho u` at every node of `u`, as raw values.
pub fn frac_integral_grid(rho: f64, u: &WeightedGridFunction) -> Result<Vec<f64>> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(param(format!("integration order must be positive, got {rho}")));
    }
    if u.grid[0] != u.a {
        return Err(Error::InsufficientGrid("grid must start at the left endpoint".into()));
    }
    let profile = Profile { y: u.offsets()?, v: u.weighted_values.clone() };
    let rule = MomentRule::new(rho, u.sigma - 1.0, 1.0);
    let g = gamma(rho)?;
    Ok(profile.integrate_slots(rule).into_iter().map(|v| v / g).collect())
}

/// Minimum node count for the inner differentiation.
pub const MIN_DERIVATIVE_NODES: usize = 32;

/// Hilfer-type derivative of order `rho` and type `nu` at `t`: the integral
/// of order `(1-nu)(1-rho)` is differentiated in `phi` and then integrated
/// with order `nu(1-rho)`.
pub fn hilfer_derivative(phi: &PhiFunction, rho: f64, nu: f64, u: &WeightedGridFunction, t: f64) -> Result<f64> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(param(format!("derivative order must lie in (0, 1), got {rho}")));
    }
    if !(0.0..=1.0).contains(&nu) {
        return Err(param(format!("type parameter must lie in [0, 1], got {nu}")));
    }
    if *phi != u.phi {
        return Err(param("grid function was built for a different kernel"));
    }
    if u.len() < MIN_DERIVATIVE_NODES {
        return Err(Error::InsufficientGrid(format!(
            "{} nodes, the derivative needs at least {MIN_DERIVATIVE_NODES}",
            u.len()
        )));
    }
    if u.grid[0] != u.a {
        return Err(Error::InsufficientGrid("grid must start at the left endpoint".into()));
    }
    if !(t > u.grid[0] && t < *u.grid.last().unwrap()) {
        return Err(Error::OutOfRange(format!("t={t} is not strictly inside the grid")));
    }
    let profile = Profile { y: u.offsets()?, v: u.weighted_values.clone() };
    let d = phi.eval(t)? - phi.eval(u.a)?;
    Ok(hilfer_on_profile(rho, nu, u.sigma, &profile, &[d])?[0])
}

/// Piecewise function on `y >= 0` given at nondecreasing abscissae starting at
/// zero. Two consecutive equal abscissae mark a jump (left then right value).
#[derive(Debug, Clone)]
pub(crate) struct Profile {
    pub y: Vec<f64>,
    pub v: Vec<f64>,
}

impl Profile {
    fn links(&self) -> Vec<(usize, usize)> {
        (1..self.y.len()).map(|i| (i - 1, i)).collect()
    }

    pub fn table(&self, rule: MomentRule) -> CellTable {
        CellTable::new(rule, &self.y, &self.links())
    }

    /// `∫_0^{y_j} (y_j - s)^(rho-1) s^gamma g(s) ds` at every slot `j`.
    pub fn integrate_slots(&self, rule: MomentRule) -> Vec<f64> {
        let table = self.table(rule);
        let mut row = vec![0.0; self.y.len()];
        let mut out = vec![0.0; self.y.len()];
        // Limit at y = 0, nonzero when the result is homogeneous of degree zero.
        let degree = rule.rho + rule.gamma;
        out[0] = if degree.abs() < 1e-12 {
            beta_fn(rule.gamma + 1.0, rule.rho) * self.v[0]
        } else if degree > 0.0 {
            0.0
        } else {
            f64::INFINITY * self.v[0].signum()
        };
        for j in 1..self.y.len() {
            row[..=j].fill(0.0);
            table.row(j, self.y[j], &mut row);
            out[j] = row[..=j].iter().zip(&self.v).map(|(w, v)| w * v).sum();
        }
        out
    }

    pub fn integrate_at(&self, rule: MomentRule, d: f64) -> f64 {
        self.integrate_at_with(&self.table(rule), rule.p, d)
    }

    /// Same integral at an arbitrary `d` inside the span; the value at `d`
    /// is interpolated linearly in `y^p`.
    pub fn integrate_at_with(&self, table: &CellTable, p: f64, d: f64) -> f64 {
        if d <= 0.0 {
            return 0.0;
        }
        // Last slot at or left of d.
        let j = self.y.partition_point(|&y| y <= d) - 1;
        let mut row = vec![0.0; self.y.len()];
        table.row(j, d, &mut row);
        let mut s: f64 = row[..=j].iter().zip(&self.v).map(|(w, v)| w * v).sum();
        if self.y[j] < d && j + 1 < self.y.len() {
            let (wl, wd) = table.partial(j, d);
            let vd = interpolate(self.y[j], self.y[j + 1], self.v[j], self.v[j + 1], p, d);
            s += wl * self.v[j] + wd * vd;
        }
        s
    }

    /// Slot ranges of the continuous pieces (split at jumps).
    pub fn pieces(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut start = 0;
        for i in 1..self.y.len() {
            if self.y[i] == self.y[i - 1] {
                out.push((start, i));
                start = i;
            }
        }
        out.push((start, self.y.len()));
        out
    }
}

fn interpolate(y0: f64, y1: f64, v0: f64, v1: f64, p: f64, d: f64) -> f64 {
    let (x0, x1, xd) = if p == 1.0 { (y0, y1, d) } else { (y0.powf(p), y1.powf(p), d.powf(p)) };
    if x1 == x0 {
        return v0;
    }
    let lam = (xd - x0) / (x1 - x0);
    v0 + lam * (v1 - v0)
}

/// Derivative of `values` with respect to `x` on nonuniform nodes: three-point
/// centred formula inside, three-point one-sided formulas at both ends.
pub(crate) fn differentiate(x: &[f64], values: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut d = vec![0.0; n];
    let three = |i0: usize, at: usize| {
        let (x0, x1, x2) = (x[i0], x[i0 + 1], x[i0 + 2]);
        let (f0, f1, f2) = (values[i0], values[i0 + 1], values[i0 + 2]);
        let xa = x[at];
        // Derivative of the quadratic interpolant at x[at].
        f0 * (2.0 * xa - x1 - x2) / ((x0 - x1) * (x0 - x2))
            + f1 * (2.0 * xa - x0 - x2) / ((x1 - x0) * (x1 - x2))
            + f2 * (2.0 * xa - x0 - x1) / ((x2 - x0) * (x2 - x1))
    };
    d[0] = three(0, 0);
    for i in 1..n - 1 {
        d[i] = three(i - 1, i);
    }
    d[n - 1] = three(n - 3, n - 1);
    d
}

/// Hilfer-type derivative of the function whose weighted values (with weight
/// exponent `1 - sigma_u`) are stored in `u`, at the offsets `targets`.
pub(crate) fn hilfer_on_profile(rho: f64, nu: f64, sigma_u: f64, u: &Profile, targets: &[f64]) -> Result<Vec<f64>> {
    let inner = (1.0 - nu) * (1.0 - rho);
    let outer = nu * (1.0 - rho);
    let p = rho;
    // Inner integral, or the raw function itself when the inner order vanishes.
    let g: Vec<f64> = if inner > 0.0 {
        let scale = gamma(inner)?;
        u.integrate_slots(MomentRule::new(inner, sigma_u - 1.0, p)).into_iter().map(|v| v / scale).collect()
    } else {
        if sigma_u != 1.0 && u.y[0] == 0.0 {
            return Err(param("without an inner integral the function must be bounded at the left endpoint"));
        }
        u.y.iter().zip(&u.v).map(|(&y, &w)| if sigma_u == 1.0 { w } else { w * y.powf(sigma_u - 1.0) }).collect()
    };
    // h = rho dG/dxi with xi = y^rho, so that dG/dy = y^(rho-1) h.
    let mut h = vec![0.0; g.len()];
    for (s, e) in u.pieces() {
        if e - s < 3 {
            return Err(Error::InsufficientGrid("a continuous piece has fewer than 3 nodes".into()));
        }
        let xi: Vec<f64> = u.y[s..e].iter().map(|y| y.powf(p)).collect();
        for (k, dv) in differentiate(&xi, &g[s..e]).into_iter().enumerate() {
            h[s + k] = rho * dv;
        }
    }
    let hp = Profile { y: u.y.clone(), v: h };
    if outer > 0.0 {
        let rule = MomentRule::new(outer, rho - 1.0, p);
        let table = hp.table(rule);
        let scale = gamma(outer)?;
        Ok(targets.iter().map(|&d| hp.integrate_at_with(&table, p, d) / scale).collect())
    } else {
        Ok(targets
            .iter()
            .map(|&d| {
                let j = (hp.y.partition_point(|&y| y <= d) - 1).min(hp.y.len() - 2);
                let j = if hp.y[j] == d && j > 0 && hp.y[j - 1] == d { j - 1 } else { j };
                let hd = interpolate(hp.y[j], hp.y[j + 1], hp.v[j], hp.v[j + 1], p, d);
                d.powf(rho - 1.0) * hd
            })
            .collect())
    }
}
