use super::picard::Layout;
use super::{FractionalOrder, ImpulsiveProblem};
use crate::error::{Error, Result};
use crate::frac_calc::{hilfer_on_profile, Profile, WeightedGridFunction};
use crate::phi::PhiFunction;
use crate::special::gamma;

/// A point value of the solution. At `t = a` with `sigma < 1` only the
/// weighted limit exists.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PointValue {
    Raw(f64),
    Weighted(f64),
}

impl PointValue {
    pub fn value(self) -> f64 {
        match self {
            PointValue::Raw(v) | PointValue::Weighted(v) => v,
        }
    }
}

/// Impulse size applied by the solver against the size read back from the
/// computed solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpCheck {
    pub time: f64,
    pub applied: f64,
    pub measured: f64,
}

#[derive(Debug, Clone)]
pub struct PiecewiseSolution {
    pub order: FractionalOrder,
    pub phi: PhiFunction,
    pub a: f64,
    pub t_end: f64,
    pub u_a: f64,
    pub impulse_times: Vec<f64>,
    /// Subinterval `k` on `(t_k, t_{k+1}]`; the first one also holds `a`.
    pub segments: Vec<WeightedGridFunction>,
    /// Weighted right limits `w(t_k+)`, `k = 1..m`.
    pub entry_values: Vec<f64>,
    pub iteration_count: usize,
    pub final_picard_residual: f64,
    /// `S_0 = 0, S_k = J_1(u(t_1-)) + ... + J_k(u(t_k-))`.
    pub jump_sums: Vec<f64>,
    pub jump_values: Vec<f64>,
    /// Sup-norm of every Picard update, in order.
    pub update_history: Vec<f64>,
    layout: Layout,
    w: Vec<f64>,
}

impl PiecewiseSolution {
    pub(crate) fn assemble(
        problem: &ImpulsiveProblem,
        layout: Layout,
        w: Vec<f64>,
        jump_values: Vec<f64>,
        update_history: Vec<f64>,
    ) -> Result<Self> {
        let n = layout.n;
        let mut segments = Vec::with_capacity(layout.segments);
        for k in 0..layout.segments {
            let first = if k == 0 { 0 } else { 1 };
            let range = layout.slot(k, first)..=layout.slot(k, n);
            segments.push(WeightedGridFunction::new(
                layout.t[range.clone()].to_vec(),
                w[range].to_vec(),
                problem.order.sigma,
                problem.phi.clone(),
                problem.a,
            )?);
        }
        let entry_values = (1..layout.segments).map(|k| w[layout.slot(k, 0)]).collect();
        let mut jump_sums = vec![0.0];
        for j in &jump_values {
            jump_sums.push(jump_sums.last().unwrap() + j);
        }
        Ok(PiecewiseSolution {
            order: problem.order,
            phi: problem.phi.clone(),
            a: problem.a,
            t_end: problem.t_end,
            u_a: problem.u_a,
            impulse_times: problem.impulse_times.clone(),
            segments,
            entry_values,
            iteration_count: update_history.len(),
            final_picard_residual: *update_history.last().unwrap_or(&0.0),
            jump_sums,
            jump_values,
            update_history,
            layout,
            w,
        })
    }

    pub fn nodes_per_subinterval(&self) -> usize {
        self.layout.n
    }

    /// Sup of `|w|` over all nodes and one-sided limits.
    pub fn weighted_norm(&self) -> f64 {
        self.w.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// All stored weighted values as `(subinterval, t, w)`, right limits included.
    pub fn slots(&self) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        (0..self.w.len()).map(|j| (self.layout.segment_of(j), self.layout.t[j], self.w[j]))
    }

    fn locate(&self, t: f64) -> Result<usize> {
        if !(t >= self.a && t <= self.t_end) {
            return Err(Error::OutOfRange(format!("t={t} lies outside [{}, {}]", self.a, self.t_end)));
        }
        Ok(self.impulse_times.iter().filter(|&&tk| tk < t).count())
    }

    /// Weighted value at `t`, interpolated linearly in `phi` inside its subinterval.
    pub fn weighted_at(&self, t: f64) -> Result<f64> {
        let k = self.locate(t)?;
        if t == self.a {
            return Ok(self.w[0]);
        }
        let x = self.phi.eval(t)?;
        let (s, e) = (self.layout.slot(k, 0), self.layout.slot(k, self.layout.n));
        let xs = &self.layout.x[s..=e];
        let idx = xs.partition_point(|&v| v < x).clamp(1, xs.len() - 1);
        if xs[idx] == x {
            return Ok(self.w[s + idx]);
        }
        let (x0, x1) = (xs[idx - 1], xs[idx]);
        let lam = (x - x0) / (x1 - x0);
        Ok(self.w[s + idx - 1] + lam * (self.w[s + idx] - self.w[s + idx - 1]))
    }

    /// `u(t)`; at an impulse time this is the left limit.
    pub fn evaluate(&self, t: f64) -> Result<PointValue> {
        let w = self.weighted_at(t)?;
        let y = self.phi.eval(t)? - self.layout.x[0];
        if y == 0.0 {
            return Ok(if self.order.sigma == 1.0 { PointValue::Raw(w) } else { PointValue::Weighted(w) });
        }
        Ok(PointValue::Raw(w * y.powf(self.order.sigma - 1.0)))
    }

    /// Per-slot difference `(phi(t)-phi(a))^(1-sigma) (u - v)` against a
    /// solution on the same grid, using this solution's `sigma` for the
    /// weight. The node `t = a` is left out when the two weights differ.
    pub fn weighted_difference(&self, other: &PiecewiseSolution) -> Result<Vec<(usize, f64, f64)>> {
        if self.layout.t != other.layout.t {
            return Err(Error::Parameter("solutions live on different grids".into()));
        }
        let shift = other.order.sigma - self.order.sigma;
        Ok((0..self.w.len())
            .filter(|&j| shift == 0.0 || self.layout.y[j] > 0.0)
            .map(|j| {
                let wo = if shift == 0.0 { other.w[j] } else { other.w[j] * self.layout.y[j].powf(shift) };
                (self.layout.segment_of(j), self.layout.t[j], self.w[j] - wo)
            })
            .collect())
    }

    /// Impulse sizes read back as `Gamma(sigma) (w(t_k+) - w(t_k-))`, with the
    /// right limit extrapolated from the first interior nodes after `t_k`.
    pub fn measured_jumps(&self) -> Result<Vec<JumpCheck>> {
        let gs = gamma(self.order.sigma)?;
        let n = self.layout.n;
        Ok((1..self.layout.segments)
            .map(|k| {
                let j = self.layout.slot(k, 0);
                let right = 3.0 * self.w[j + 1] - 3.0 * self.w[j + 2] + self.w[j + 3];
                let left = self.w[self.layout.slot(k - 1, n)];
                JumpCheck { time: self.impulse_times[k - 1], applied: self.jump_values[k - 1], measured: gs * (right - left) }
            })
            .collect())
    }

    /// Copy with every weighted value shifted by `dw`.
    pub fn offset_weighted(&self, dw: f64) -> PiecewiseSolution {
        let mut s = self.clone();
        s.w.iter_mut().for_each(|v| *v += dw);
        for seg in &mut s.segments {
            seg.weighted_values.iter_mut().for_each(|v| *v += dw);
        }
        s.entry_values.iter_mut().for_each(|v| *v += dw);
        s
    }

    pub(crate) fn profile(&self) -> Profile {
        Profile { y: self.layout.y.clone(), v: self.w.clone() }
    }

    pub(crate) fn layout(&self) -> &Layout {
        &self.layout
    }
}

/// Max over interior probe points of `|D u(t) - f(t, u(t))|`, with `D` the
/// discretised Hilfer-type derivative. Probes stay at least one cell away
/// from `a`, `T` and the impulse times.
pub fn residual(problem: &ImpulsiveProblem, solution: &PiecewiseSolution, probe_points: usize) -> Result<f64> {
    let layout = solution.layout();
    let n = layout.n;
    let (xa, xt) = (layout.x[0], *layout.x.last().unwrap());
    let mut probes = Vec::new();
    for i in 0..probe_points {
        let x = xa + (xt - xa) * (i as f64 + 0.5) / probe_points as f64;
        let k = (0..layout.segments).find(|&k| x <= layout.x[layout.slot(k, n)]).unwrap_or(layout.segments - 1);
        let (x0, x1) = (layout.x[layout.slot(k, 0)], layout.x[layout.slot(k, n)]);
        let h = (x1 - x0) / n as f64;
        if x - x0 >= h && x1 - x >= h {
            probes.push(x);
        }
    }
    if probes.is_empty() {
        return Err(Error::InsufficientGrid("no probe point lies a full cell away from a breakpoint".into()));
    }
    let ds: Vec<f64> = probes.iter().map(|x| x - xa).collect();
    let order = solution.order;
    let d = hilfer_on_profile(order.rho, order.nu, order.sigma, &solution.profile(), &ds)?;
    let mut worst = 0.0f64;
    for (x, dv) in probes.iter().zip(d) {
        let t = problem.phi.inverse(*x, problem.a, problem.t_end)?;
        let u = solution.evaluate(t)?.value();
        let f = problem.rhs.eval(t, u, &problem.phi)?;
        worst = worst.max((dv - f).abs());
    }
    Ok(worst)
}
