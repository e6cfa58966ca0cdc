use super::solution::PiecewiseSolution;
use super::ImpulsiveProblem;
use crate::error::{param, Error, Result};
use crate::quadrature::{CellTable, MomentRule};
use crate::special::gamma;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    /// Cells per subinterval; each subinterval carries this many nodes plus its left end.
    #[serde(default = "default_nodes")]
    pub nodes_per_subinterval: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
}

fn default_nodes() -> usize {
    256
}
fn default_tol() -> f64 {
    1e-12
}
fn default_max_iter() -> usize {
    500
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { nodes_per_subinterval: default_nodes(), tol: default_tol(), max_iter: default_max_iter() }
    }
}

impl SolverConfig {
    pub fn new(nodes_per_subinterval: usize, tol: f64, max_iter: usize) -> Self {
        SolverConfig { nodes_per_subinterval, tol, max_iter }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes_per_subinterval < 8 {
            return Err(param(format!("need at least 8 nodes per subinterval, got {}", self.nodes_per_subinterval)));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(param(format!("tolerance must be positive, got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(param("max_iter must be at least 1"));
        }
        Ok(())
    }
}

/// Nodes of all subintervals, uniform in `phi` on each. Slot `(k, 0)` of a
/// subinterval `k >= 1` sits at `t_k` and holds the right limit there; slot
/// `(k - 1, n)` holds the left limit.
#[derive(Debug, Clone)]
pub(crate) struct Layout {
    pub n: usize,
    pub segments: usize,
    pub t: Vec<f64>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl Layout {
    pub fn new(problem: &ImpulsiveProblem, n: usize) -> Result<Self> {
        let phi = &problem.phi;
        let bp = problem.breakpoints();
        let xb: Vec<f64> = bp.iter().map(|&t| phi.eval(t)).collect::<Result<_>>()?;
        let xa = xb[0];
        let segments = bp.len() - 1;
        let mut t = Vec::with_capacity(segments * (n + 1));
        let mut x = Vec::with_capacity(segments * (n + 1));
        for k in 0..segments {
            let (x0, x1) = (xb[k], xb[k + 1]);
            for i in 0..=n {
                let (xi, ti) = match i {
                    0 => (x0, bp[k]),
                    i if i == n => (x1, bp[k + 1]),
                    i => {
                        let xi = x0 + (x1 - x0) * i as f64 / n as f64;
                        (xi, phi.inverse(xi, bp[k], bp[k + 1])?)
                    }
                };
                x.push(xi);
                t.push(ti);
            }
        }
        let y = x.iter().map(|&x| x - xa).collect();
        Ok(Layout { n, segments, t, x, y })
    }

    pub fn slot(&self, k: usize, i: usize) -> usize {
        k * (self.n + 1) + i
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn segment_of(&self, j: usize) -> usize {
        j / (self.n + 1)
    }

    /// First slot of a subinterval: `a` itself or a right limit.
    pub fn is_entry(&self, j: usize) -> bool {
        j.is_multiple_of(self.n + 1)
    }

    pub fn links(&self) -> Vec<(usize, usize)> {
        (1..self.len()).map(|j| (j - 1, j)).collect()
    }
}

/// Lower-triangular weight rows `W[j][i]`, already scaled by
/// `y_j^(1-sigma) / Gamma(rho)`, so that `w_j = H_j + sum_i W[j][i] F_i`.
struct Weights {
    offsets: Vec<usize>,
    data: Vec<f64>,
}

impl Weights {
    fn build(layout: &Layout, rho: f64, sigma: f64) -> Result<Self> {
        let p = rho;
        let table = CellTable::new(MomentRule::new(rho, sigma - 1.0, p), &layout.y, &layout.links());
        let g = gamma(rho)?;
        let mut offsets = Vec::with_capacity(layout.len() + 1);
        let mut data = Vec::new();
        offsets.push(0);
        let mut buf = vec![0.0; layout.len()];
        for j in 0..layout.len() {
            if !layout.is_entry(j) {
                buf[..=j].fill(0.0);
                let d = layout.y[j];
                table.row(j, d, &mut buf);
                let scale = d.powf(1.0 - sigma) / g;
                data.extend(buf[..=j].iter().map(|w| w * scale));
            }
            offsets.push(data.len());
        }
        Ok(Weights { offsets, data })
    }

    fn row(&self, j: usize) -> &[f64] {
        &self.data[self.offsets[j]..self.offsets[j + 1]]
    }
}

/// Evaluates `F = y^(1-sigma) f(t, u)` at every slot of the iterate `w`.
pub(crate) struct Forcing<'a> {
    problem: &'a ImpulsiveProblem,
    layout: &'a Layout,
    /// `y^(sigma-1)` per slot (unused at slot 0).
    lift: Vec<f64>,
    probe: Option<(f64, f64)>,
}

impl<'a> Forcing<'a> {
    pub fn new(problem: &'a ImpulsiveProblem, layout: &'a Layout) -> Result<Self> {
        let sigma = problem.order.sigma;
        let lift = layout.y.iter().map(|&y| if y > 0.0 { y.powf(sigma - 1.0) } else { 0.0 }).collect();
        // For sigma < 1 the value at a is the limit y -> 0+; it is taken at a
        // point very close to a.
        let probe = if sigma < 1.0 {
            let eta = layout.y[1] * 1e-12;
            let t = problem.phi.inverse(layout.x[0] + eta, problem.a, layout.t[1])?;
            Some((t, eta))
        } else {
            None
        };
        Ok(Forcing { problem, layout, lift, probe })
    }

    fn at(&self, t: f64, u: f64) -> Result<f64> {
        self.problem
            .rhs
            .eval(t, u, &self.problem.phi)
            .map_err(|e| Error::Evaluation(format!("right-hand side at t={t}, u={u}: {e}")))
    }

    pub fn eval(&self, w: &[f64], out: &mut [f64]) -> Result<()> {
        let sigma = self.problem.order.sigma;
        for j in 1..w.len() {
            let u = w[j] * self.lift[j];
            out[j] = self.at(self.layout.t[j], u)? / self.lift[j];
        }
        out[0] = match self.probe {
            None => self.at(self.problem.a, w[0])?,
            Some((t, eta)) => {
                let lifted = eta.powf(sigma - 1.0);
                match self.at(t, w[0] * lifted) {
                    Ok(v) if (v / lifted).is_finite() => v / lifted,
                    _ => {
                        // Fall back to extrapolation linear in y^rho.
                        let rho = self.problem.order.rho;
                        let (x1, x2) = (self.layout.y[1].powf(rho), self.layout.y[2].powf(rho));
                        out[1] - x1 * (out[2] - out[1]) / (x2 - x1)
                    }
                }
            }
        };
        Ok(())
    }

    pub fn lift(&self, j: usize) -> f64 {
        self.lift[j]
    }
}

/// Impulse values `J_k(u(t_k-))` at the left limits of `w`.
pub(crate) fn jumps(problem: &ImpulsiveProblem, layout: &Layout, lift: impl Fn(usize) -> f64, w: &[f64]) -> Result<Vec<f64>> {
    (1..layout.segments)
        .map(|k| {
            let j = layout.slot(k - 1, layout.n);
            let u = w[j] * lift(j);
            problem.impulse_maps[k - 1]
                .eval(u, &problem.phi)
                .map_err(|e| Error::Evaluation(format!("impulse map {k} at u={u}: {e}")))
        })
        .collect()
}

/// Update size treated as divergence.
const DIVERGENCE: f64 = 1e150;

/// Picard iteration for the weighted unknown on a grid with
/// `nodes_per_subinterval` cells per subinterval.
pub fn solve_picard(
    problem: &ImpulsiveProblem,
    nodes_per_subinterval: usize,
    tol: f64,
    max_iter: usize,
) -> Result<PiecewiseSolution> {
    let config = SolverConfig::new(nodes_per_subinterval, tol, max_iter);
    config.validate()?;
    problem.validate()?;
    let order = problem.order;
    let n = nodes_per_subinterval;
    let layout = Layout::new(problem, n)?;
    let weights = Weights::build(&layout, order.rho, order.sigma)?;
    let forcing = Forcing::new(problem, &layout)?;
    let gs = gamma(order.sigma)?;
    let slots = layout.len();

    // Homogeneous start, impulses applied one after another.
    let mut w = vec![0.0; slots];
    let mut level = problem.u_a / gs;
    for k in 0..layout.segments {
        if k > 0 {
            let j = layout.slot(k - 1, n);
            let jump = problem.impulse_maps[k - 1]
                .eval(level * forcing.lift(j), &problem.phi)
                .map_err(|e| Error::Evaluation(format!("impulse map {k}: {e}")))?;
            level += jump / gs;
        }
        w[layout.slot(k, 0)..=layout.slot(k, n)].fill(level);
    }

    let mut f = vec![0.0; slots];
    let mut next = vec![0.0; slots];
    let mut history = Vec::new();
    // Failures on an iterate that is running away are reported as divergence.
    let diverging = |history: &[f64], e: Error| match history.last() {
        Some(&last) if last > history[0] || last > DIVERGENCE => {
            Error::NonConvergence { iterations: history.len(), last_update: last }
        }
        _ => e,
    };
    loop {
        if let Err(e) = forcing.eval(&w, &mut f) {
            return Err(diverging(&history, e));
        }
        let jump = jumps(problem, &layout, |j| forcing.lift(j), &w).map_err(|e| diverging(&history, e))?;
        let mut base = problem.u_a / gs;
        for k in 0..layout.segments {
            if k > 0 {
                base += jump[k - 1] / gs;
            }
            for i in 0..=n {
                let j = layout.slot(k, i);
                next[j] = if j == 0 {
                    base
                } else if i == 0 {
                    next[j - 1] + jump[k - 1] / gs
                } else {
                    base + weights.row(j).iter().zip(&f).map(|(a, b)| a * b).sum::<f64>()
                };
            }
        }
        let update = next.iter().zip(&w).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        std::mem::swap(&mut w, &mut next);
        history.push(update);
        if !update.is_finite() || update > DIVERGENCE {
            return Err(Error::NonConvergence { iterations: history.len(), last_update: update });
        }
        if update <= tol {
            break;
        }
        if history.len() >= max_iter {
            return Err(Error::NonConvergence { iterations: history.len(), last_update: update });
        }
    }
    let jump = jumps(problem, &layout, |j| forcing.lift(j), &w)?;
    PiecewiseSolution::assemble(problem, layout, w, jump, history)
}
