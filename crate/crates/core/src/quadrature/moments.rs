//! Product-integration weights.
//!
//! For a target abscissa `d` the integral
//!
//! ```text
//!     ∫_0^d (d - y)^(rho-1) y^gamma g(y) dy
//! ```
//!
//! is approximated by interpolating `g` linearly in `xi = y^p` on every
//! cell and integrating the kernel against the two hat functions exactly
//! (series or Beta functions near the singular points, Gauss-Legendre in the
//! interior). `p = 1` is the classical product trapezoid; `p = rho` matches
//! solutions that expand in powers of `y^rho`.

use super::{gauss_legendre, GL_POINTS};
use crate::special::beta_fn;

const SERIES_TOL: f64 = 1e-17;
const SERIES_MAX: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct MomentRule {
    pub rho: f64,
    pub gamma: f64,
    pub p: f64,
}

#[derive(Clone, Copy)]
struct Basis {
    xi0: f64,
    xi1: f64,
    dxi: f64,
}

impl MomentRule {
    pub fn new(rho: f64, gamma: f64, p: f64) -> Self {
        debug_assert!(rho > 0.0 && gamma > -1.0 && p > 0.0);
        MomentRule { rho, gamma, p }
    }

    fn basis(&self, y0: f64, y1: f64) -> Basis {
        let xi0 = if y0 == 0.0 { 0.0 } else { y0.powf(self.p) };
        let xi1 = y1.powf(self.p);
        Basis { xi0, xi1, dxi: xi1 - xi0 }
    }

    /// Weights of the values at `y0` and `y1` for the cell `[y0, y1]`, `y1 <= d`.
    pub fn cell(&self, d: f64, y0: f64, y1: f64) -> (f64, f64) {
        let b = self.basis(y0, y1);
        let mut acc = (0.0, 0.0);
        self.piece(d, y0, y1, b, y0 == 0.0, y1 == d, &mut acc);
        acc
    }

    #[allow(clippy::too_many_arguments)]
    fn piece(&self, d: f64, s0: f64, s1: f64, b: Basis, tz: bool, td: bool, acc: &mut (f64, f64)) {
        let len = s1 - s0;
        if len <= 0.0 {
            return;
        }
        if tz && td {
            self.full(d, b, acc);
        } else if tz && len <= 0.5 * d {
            self.near_zero(d, s1, b, acc);
        } else if td && len <= 0.5 * d {
            self.near_end(d, len, b, acc);
        } else if !tz && !td && s0 >= len && d - s1 >= len {
            self.gauss(d, s0, s1, b, acc);
        } else {
            let mid = 0.5 * (s0 + s1);
            self.piece(d, s0, mid, b, tz, false, acc);
            self.piece(d, mid, s1, b, false, td, acc);
        }
    }

    // Whole range [0, d] in one cell.
    fn full(&self, d: f64, b: Basis, acc: &mut (f64, f64)) {
        let (r, g, p) = (self.rho, self.gamma, self.p);
        let scale = d.powf(r + g);
        let m0 = scale * beta_fn(g + 1.0, r);
        let wr = scale * beta_fn(g + p + 1.0, r) * d.powf(p) / b.dxi;
        acc.0 += m0 - wr;
        acc.1 += wr;
    }

    // Piece [0, s1] with s1 <= d/2: expand the kernel in y/d.
    fn near_zero(&self, d: f64, s1: f64, b: Basis, acc: &mut (f64, f64)) {
        let (r, g, p) = (self.rho, self.gamma, self.p);
        let ratio = s1 / d;
        let (mut c, mut rk) = (1.0, 1.0);
        let (mut s0, mut sp) = (0.0, 0.0);
        for k in 0..SERIES_MAX {
            let kf = k as f64;
            let t = c * rk;
            s0 += t / (g + 1.0 + kf);
            sp += t / (g + p + 1.0 + kf);
            if t.abs() < SERIES_TOL && k > 2 {
                break;
            }
            c *= (kf + 1.0 - r) / (kf + 1.0);
            rk *= ratio;
        }
        let pre = d.powf(r - 1.0) * s1.powf(g + 1.0);
        let m0 = pre * s0;
        let mp = pre * s1.powf(p) * sp;
        let wr = (mp - b.xi0 * m0) / b.dxi;
        acc.0 += m0 - wr;
        acc.1 += wr;
    }

    // Piece [d - len, d] with len <= d/2, and the cell ends at d.
    fn near_end(&self, d: f64, len: f64, b: Basis, acc: &mut (f64, f64)) {
        let (r, g, p) = (self.rho, self.gamma, self.p);
        let ratio = len / d;
        let (mut bg, mut bgp, mut rk) = (1.0, 1.0, 1.0);
        let (mut s0, mut sl) = (1.0 / r, 0.0);
        for k in 1..SERIES_MAX {
            let kf = k as f64;
            bg *= (kf - 1.0 - g) / kf;
            bgp *= (kf - 1.0 - g - p) / kf;
            rk *= ratio;
            s0 += bg * rk / (r + kf);
            let t = (bg - bgp) * rk;
            sl += t / (r + kf);
            if bg.abs().max(bgp.abs()) * rk < SERIES_TOL && k > 2 {
                break;
            }
        }
        let pre = d.powf(g) * len.powf(r);
        let m0 = pre * s0;
        let wl = pre * sl * b.xi1 / b.dxi;
        acc.0 += wl;
        acc.1 += m0 - wl;
    }

    fn gauss(&self, d: f64, s0: f64, s1: f64, b: Basis, acc: &mut (f64, f64)) {
        let (x, w) = gauss_legendre();
        let (c, h) = (0.5 * (s0 + s1), 0.5 * (s1 - s0));
        for q in 0..GL_POINTS {
            let y = c + h * x[q];
            let base = h * w[q] * (d - y).powf(self.rho - 1.0) * y.powf(self.gamma);
            let lr = (y.powf(self.p) - b.xi0) / b.dxi;
            acc.0 += base * (1.0 - lr);
            acc.1 += base * lr;
        }
    }
}

struct Cell {
    left: usize,
    right: usize,
    y0: f64,
    y1: f64,
    nodes: [f64; GL_POINTS],
    lw: [f64; GL_POINTS],
    rw: [f64; GL_POINTS],
}

/// Cells over a set of abscissae with cached interior quadrature data, so
/// that weight rows for many targets share the target-independent work.
pub(crate) struct CellTable {
    rule: MomentRule,
    cells: Vec<Cell>,
}

impl CellTable {
    /// `y` holds slot abscissae; `links` pairs of slot indices forming cells,
    /// ordered by position.
    pub fn new(rule: MomentRule, y: &[f64], links: &[(usize, usize)]) -> Self {
        let (x, w) = gauss_legendre();
        let cells = links
            .iter()
            .map(|&(left, right)| {
                let (y0, y1) = (y[left], y[right]);
                let b = rule.basis(y0, y1);
                let (c, h) = (0.5 * (y0 + y1), 0.5 * (y1 - y0));
                let mut cell = Cell {
                    left,
                    right,
                    y0,
                    y1,
                    nodes: [0.0; GL_POINTS],
                    lw: [0.0; GL_POINTS],
                    rw: [0.0; GL_POINTS],
                };
                for q in 0..GL_POINTS {
                    let yq = c + h * x[q];
                    let base = h * w[q] * yq.powf(rule.gamma);
                    let lr = if b.dxi > 0.0 { (yq.powf(rule.p) - b.xi0) / b.dxi } else { 0.0 };
                    cell.nodes[q] = yq;
                    cell.lw[q] = base * (1.0 - lr);
                    cell.rw[q] = base * lr;
                }
                cell
            })
            .collect();
        CellTable { rule, cells }
    }

    /// Accumulates into `out` the weights of the first `ncells` cells for the
    /// target `d` (which must not lie left of the last used cell's end).
    pub fn row(&self, ncells: usize, d: f64, out: &mut [f64]) {
        let km1 = self.rule.rho - 1.0;
        for cell in &self.cells[..ncells] {
            let len = cell.y1 - cell.y0;
            if len <= 0.0 {
                continue;
            }
            let (wl, wr) = if cell.y0 >= len && d - cell.y1 >= len {
                let (mut wl, mut wr) = (0.0, 0.0);
                for q in 0..GL_POINTS {
                    let k = if km1 == 0.0 { 1.0 } else { (d - cell.nodes[q]).powf(km1) };
                    wl += k * cell.lw[q];
                    wr += k * cell.rw[q];
                }
                (wl, wr)
            } else {
                self.rule.cell(d, cell.y0, cell.y1)
            };
            out[cell.left] += wl;
            out[cell.right] += wr;
        }
    }

    /// Weights for the truncated cell `[y0, d]` of cell `idx`: returned as the
    /// weight on the left slot and the weight on the (interpolated) value at `d`.
    pub fn partial(&self, idx: usize, d: f64) -> (f64, f64) {
        let cell = &self.cells[idx];
        self.rule.cell(d, cell.y0, d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gamma;

    fn row_sum(rule: MomentRule, n: usize, target: usize, f: impl Fn(f64) -> f64) -> f64 {
        let h = 1.0 / n as f64;
        let y: Vec<f64> = (0..=n).map(|i| i as f64 * h).collect();
        let links: Vec<_> = (0..n).map(|i| (i, i + 1)).collect();
        let table = CellTable::new(rule, &y, &links);
        let mut out = vec![0.0; n + 1];
        table.row(target, y[target], &mut out);
        out.iter().zip(&y).map(|(w, &y)| w * f(y)).sum()
    }

    #[test]
    fn constants_are_integrated_exactly() {
        for &(rho, gam, p) in &[(0.5, 0.0, 1.0), (0.3, -0.4, 0.3), (0.8, -0.15, 0.7), (1.4, 0.0, 1.0)] {
            let rule = MomentRule::new(rho, gam, p);
            for &target in &[1usize, 2, 7, 64] {
                let d = target as f64 / 64.0;
                let s = row_sum(rule, 64, target, |_| 1.0);
                let exact = d.powf(rho + gam) * gamma(gam + 1.0).unwrap() * gamma(rho).unwrap()
                    / gamma(rho + gam + 1.0).unwrap();
                assert!((s - exact).abs() <= 1e-13 * exact, "rho={rho} g={gam} t={target}: {s} vs {exact}");
            }
        }
    }

    #[test]
    fn interpolation_variable_power_is_exact() {
        // g(y) = y^p is reproduced exactly by hats linear in y^p.
        let (rho, gam, p) = (0.4, -0.3, 0.4);
        let rule = MomentRule::new(rho, gam, p);
        for &target in &[1usize, 3, 50, 128] {
            let d = target as f64 / 128.0;
            let s = row_sum(rule, 128, target, |y| y.powf(p));
            let exact = d.powf(rho + gam + p) * gamma(gam + p + 1.0).unwrap() * gamma(rho).unwrap()
                / gamma(rho + gam + p + 1.0).unwrap();
            assert!((s - exact).abs() <= 1e-13 * exact, "target={target}: {s} vs {exact}");
        }
    }

    #[test]
    fn partial_cell_matches_full_when_ending_at_node() {
        let rule = MomentRule::new(0.6, 0.0, 1.0);
        let (a, b) = rule.cell(1.0, 0.5, 1.0);
        let y = [0.0, 0.5, 1.0];
        let table = CellTable::new(rule, &y, &[(0, 1), (1, 2)]);
        let (pa, pb) = table.partial(1, 1.0);
        assert_eq!((a, b), (pa, pb));
    }
}
