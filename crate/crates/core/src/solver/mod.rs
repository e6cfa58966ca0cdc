//! Impulsive initial-value problems and their Picard solver.
//!
//! The unknown is the weighted function `w(t) = (phi(t) - phi(a))^(1-sigma) u(t)`
//! satisfying, on the k-th subinterval,
//!
//! ```text
//! w(t) = (u_a + S_k) / Gamma(sigma) + y^(1-sigma) I^rho f(t, u)(t),   y = phi(t) - phi(a)
//! ```
//!
//! where `S_k` sums the impulse maps evaluated at the left limits `u(t_i-)`.

mod picard;
mod solution;

pub use picard::{solve_picard, SolverConfig};
pub use solution::{residual, JumpCheck, PiecewiseSolution, PointValue};

use crate::error::{param, Error, Result};
use crate::expr::{Bindings, Expression, Scope};
use crate::phi::{validate_phi, PhiFunction};
use serde::{Serialize, Serializer};
use std::fmt;
use std::sync::Arc;

/// Samples used to check the kernel before a solve.
pub(crate) const PHI_CHECK_SAMPLES: usize = 200;

/// Order `rho`, type `nu`, and the derived `sigma = rho + nu - rho nu`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FractionalOrder {
    pub rho: f64,
    pub nu: f64,
    pub sigma: f64,
    pub delta: Option<f64>,
    pub sigma_star: Option<f64>,
}

impl FractionalOrder {
    pub fn new(rho: f64, nu: f64) -> Result<Self> {
        if !(rho > 0.0 && rho < 1.0) {
            return Err(param(format!("order rho must lie in (0, 1), got {rho}")));
        }
        if !(0.0..=1.0).contains(&nu) {
            return Err(param(format!("type nu must lie in [0, 1], got {nu}")));
        }
        Ok(FractionalOrder { rho, nu, sigma: rho + nu - rho * nu, delta: None, sigma_star: None })
    }

    /// Attaches an order perturbation `0 < delta < rho`; `sigma_star = sigma + delta (nu - 1)`.
    pub fn with_delta(self, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < self.rho) {
            return Err(param(format!("order shift must lie in (0, rho = {}), got {delta}", self.rho)));
        }
        Ok(FractionalOrder { delta: Some(delta), sigma_star: Some(self.sigma + delta * (self.nu - 1.0)), ..self })
    }

    /// The order `(rho - delta, nu)`, whose sigma is `sigma_star`.
    pub fn shifted(&self) -> Option<FractionalOrder> {
        self.delta.map(|d| FractionalOrder::new(self.rho - d, self.nu).expect("validated shift"))
    }
}

pub type RhsFn = Arc<dyn Fn(f64, f64) -> Result<f64> + Send + Sync>;
pub type MapFn = Arc<dyn Fn(f64) -> Result<f64> + Send + Sync>;

/// Right-hand side `f(t, u)`.
#[derive(Clone)]
pub enum Rhs {
    Expr(Expression),
    Native { label: String, f: RhsFn },
}

impl Rhs {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(Rhs::Expr(Expression::parse(text, Scope::RHS)?))
    }

    pub fn native(label: impl Into<String>, f: impl Fn(f64, f64) -> Result<f64> + Send + Sync + 'static) -> Self {
        Rhs::Native { label: label.into(), f: Arc::new(f) }
    }

    pub fn zero() -> Self {
        Rhs::Expr(Expression::constant(0.0))
    }

    pub fn eval(&self, t: f64, u: f64, phi: &PhiFunction) -> Result<f64> {
        let v = match self {
            Rhs::Expr(e) => e.eval(&Bindings::tu(t, u, phi))?,
            Rhs::Native { f, .. } => f(t, u)?,
        };
        if !v.is_finite() {
            return Err(Error::Evaluation(format!("right-hand side is not finite at t={t}, u={u}")));
        }
        Ok(v)
    }

    pub fn label(&self) -> String {
        match self {
            Rhs::Expr(e) => e.to_string(),
            Rhs::Native { label, .. } => format!("<{label}>"),
        }
    }
}

/// Impulse map `J_k(u)` applied to the left limit `u(t_k-)`.
#[derive(Clone)]
pub enum ImpulseMap {
    Expr(Expression),
    Native { label: String, f: MapFn },
}

impl ImpulseMap {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(ImpulseMap::Expr(Expression::parse(text, Scope::IMPULSE)?))
    }

    pub fn native(label: impl Into<String>, f: impl Fn(f64) -> Result<f64> + Send + Sync + 'static) -> Self {
        ImpulseMap::Native { label: label.into(), f: Arc::new(f) }
    }

    pub fn constant(c: f64) -> Self {
        ImpulseMap::Expr(Expression::constant(c))
    }

    pub fn eval(&self, u: f64, phi: &PhiFunction) -> Result<f64> {
        let v = match self {
            ImpulseMap::Expr(e) => e.eval(&Bindings { u: Some(u), phi: Some(phi), ..Default::default() })?,
            ImpulseMap::Native { f, .. } => f(u)?,
        };
        if !v.is_finite() {
            return Err(Error::Evaluation(format!("impulse map is not finite at u={u}")));
        }
        Ok(v)
    }

    pub fn label(&self) -> String {
        match self {
            ImpulseMap::Expr(e) => e.to_string(),
            ImpulseMap::Native { label, .. } => format!("<{label}>"),
        }
    }
}

/// A function of `t` alone, such as a weight or a perturbation waveform.
#[derive(Clone)]
pub enum TimeFunction {
    Expr(Expression),
    Native { label: String, f: MapFn },
}

impl TimeFunction {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(TimeFunction::Expr(Expression::parse(text, Scope::TIME)?))
    }

    pub fn native(label: impl Into<String>, f: impl Fn(f64) -> Result<f64> + Send + Sync + 'static) -> Self {
        TimeFunction::Native { label: label.into(), f: Arc::new(f) }
    }

    pub fn constant(c: f64) -> Self {
        TimeFunction::Expr(Expression::constant(c))
    }

    pub fn eval(&self, t: f64, phi: &PhiFunction) -> Result<f64> {
        let v = match self {
            TimeFunction::Expr(e) => e.eval(&Bindings { t: Some(t), phi: Some(phi), ..Default::default() })?,
            TimeFunction::Native { f, .. } => f(t)?,
        };
        if !v.is_finite() {
            return Err(Error::Evaluation(format!("{} is not finite at t={t}", self.label())));
        }
        Ok(v)
    }

    pub fn label(&self) -> String {
        match self {
            TimeFunction::Expr(e) => e.to_string(),
            TimeFunction::Native { label, .. } => format!("<{label}>"),
        }
    }
}

macro_rules! label_impls {
    ($t:ty) => {
        impl fmt::Debug for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.label())
            }
        }
        impl Serialize for $t {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.serialize_str(&self.label())
            }
        }
    };
}
label_impls!(Rhs);
label_impls!(ImpulseMap);
label_impls!(TimeFunction);

#[derive(Debug, Clone, Serialize)]
pub struct ImpulsiveProblem {
    pub order: FractionalOrder,
    pub phi: PhiFunction,
    pub a: f64,
    #[serde(rename = "T")]
    pub t_end: f64,
    pub u_a: f64,
    pub rhs: Rhs,
    pub impulse_times: Vec<f64>,
    pub impulse_maps: Vec<ImpulseMap>,
}

impl ImpulsiveProblem {
    pub fn new(order: FractionalOrder, phi: PhiFunction, a: f64, t_end: f64, u_a: f64, rhs: Rhs) -> Result<Self> {
        let p = ImpulsiveProblem { order, phi, a, t_end, u_a, rhs, impulse_times: vec![], impulse_maps: vec![] };
        p.validate()?;
        Ok(p)
    }

    pub fn with_impulse(mut self, t: f64, map: ImpulseMap) -> Result<Self> {
        self.impulse_times.push(t);
        self.impulse_maps.push(map);
        self.validate()?;
        Ok(self)
    }

    /// Number of impulses.
    pub fn m(&self) -> usize {
        self.impulse_times.len()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a.is_finite() && self.t_end.is_finite() && self.a < self.t_end) {
            return Err(param(format!("need finite a < T, got a={} T={}", self.a, self.t_end)));
        }
        if !self.u_a.is_finite() {
            return Err(param("initial datum must be finite"));
        }
        if self.impulse_times.len() != self.impulse_maps.len() {
            return Err(param("one map per impulse time is required"));
        }
        let mut prev = self.a;
        for &t in &self.impulse_times {
            if !(t > prev && t < self.t_end) {
                return Err(param(format!("impulse times must increase strictly inside (a, T); {t} does not")));
            }
            prev = t;
        }
        validate_phi(&self.phi, self.a, self.t_end, PHI_CHECK_SAMPLES).into_result()
    }

    /// Subinterval endpoints `a = t_0 < t_1 < ... < t_m < t_{m+1} = T`.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b = Vec::with_capacity(self.m() + 2);
        b.push(self.a);
        b.extend_from_slice(&self.impulse_times);
        b.push(self.t_end);
        b
    }

    /// `phi(T) - phi(a)`.
    pub fn span(&self) -> Result<f64> {
        Ok(self.phi.eval(self.t_end)? - self.phi.eval(self.a)?)
    }

    /// Index of the subinterval `(t_k, t_{k+1}]` holding `t` (0 for `t = a`).
    pub fn subinterval_of(&self, t: f64) -> usize {
        self.impulse_times.iter().filter(|&&tk| tk < t).count()
    }
}
