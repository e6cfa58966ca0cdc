//! The kernel-generating function and its admissibility checks.

use crate::error::{param, Error, Result};
use crate::expr::{Bindings, Expression, Scope};
use serde::{Deserialize, Serialize};

/// Step used by the finite-difference derivative fallback, relative to `1 + |t|`.
const FD_STEP: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub enum Derivative {
    Expr(Expression),
    FiniteDifference,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PhiFunction {
    Identity,
    Log,
    Power(f64),
    Expr { phi: Expression, dphi: Derivative },
}

/// Serializable description, as it appears in configuration files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PhiSpec {
    Identity,
    #[serde(alias = "logarithm")]
    Log,
    Power {
        p: f64,
    },
    Expr {
        phi: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dphi: Option<String>,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        finite_difference: bool,
    },
}

impl PhiFunction {
    pub fn power(p: f64) -> Result<Self> {
        if !(p > 0.0 && p.is_finite()) {
            return Err(param(format!("power kernel needs a positive exponent, got {p}")));
        }
        Ok(PhiFunction::Power(p))
    }

    /// A user kernel `phi(t)` with an explicit derivative expression, or with
    /// central finite differences when `dphi` is `None`.
    pub fn expression(phi: &str, dphi: Option<&str>) -> Result<Self> {
        let phi = Expression::parse(phi, Scope::KERNEL)?;
        let dphi = match dphi {
            Some(d) => Derivative::Expr(Expression::parse(d, Scope::KERNEL)?),
            None => Derivative::FiniteDifference,
        };
        Ok(PhiFunction::Expr { phi, dphi })
    }

    pub fn from_spec(spec: &PhiSpec) -> Result<Self> {
        match spec {
            PhiSpec::Identity => Ok(PhiFunction::Identity),
            PhiSpec::Log => Ok(PhiFunction::Log),
            PhiSpec::Power { p } => PhiFunction::power(*p),
            PhiSpec::Expr { phi, dphi, finite_difference } => match (dphi, finite_difference) {
                (Some(d), false) => PhiFunction::expression(phi, Some(d)),
                (None, true) => PhiFunction::expression(phi, None),
                (Some(_), true) => Err(param("give either dphi or finite_difference, not both")),
                (None, false) => Err(param("expression kernel needs dphi (or finite_difference: true)")),
            },
        }
    }

    pub fn spec(&self) -> PhiSpec {
        match self {
            PhiFunction::Identity => PhiSpec::Identity,
            PhiFunction::Log => PhiSpec::Log,
            PhiFunction::Power(p) => PhiSpec::Power { p: *p },
            PhiFunction::Expr { phi, dphi } => PhiSpec::Expr {
                phi: phi.to_string(),
                dphi: match dphi {
                    Derivative::Expr(d) => Some(d.to_string()),
                    Derivative::FiniteDifference => None,
                },
                finite_difference: matches!(dphi, Derivative::FiniteDifference),
            },
        }
    }

    fn expr_at(e: &Expression, t: f64) -> Result<f64> {
        let b = Bindings { t: Some(t), ..Default::default() };
        e.eval(&b).map_err(|err| Error::Domain(format!("kernel at t={t}: {err}")))
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if !t.is_finite() {
            return Err(Error::Domain(format!("kernel argument {t} is not finite")));
        }
        match self {
            PhiFunction::Identity => Ok(t),
            PhiFunction::Log => {
                if t <= 0.0 {
                    return Err(Error::Domain(format!("log kernel needs t > 0, got {t}")));
                }
                Ok(t.ln())
            }
            PhiFunction::Power(p) => {
                if t < 0.0 {
                    return Err(Error::Domain(format!("power kernel needs t >= 0, got {t}")));
                }
                Ok(t.powf(*p))
            }
            PhiFunction::Expr { phi, .. } => Self::expr_at(phi, t),
        }
    }

    pub fn deriv(&self, t: f64) -> Result<f64> {
        let d = match self {
            PhiFunction::Identity => {
                self.eval(t)?;
                1.0
            }
            PhiFunction::Log => {
                self.eval(t)?;
                1.0 / t
            }
            PhiFunction::Power(p) => {
                self.eval(t)?;
                p * t.powf(p - 1.0)
            }
            PhiFunction::Expr { dphi: Derivative::Expr(d), .. } => Self::expr_at(d, t)?,
            PhiFunction::Expr { phi, dphi: Derivative::FiniteDifference } => {
                let h = FD_STEP * (1.0 + t.abs());
                (Self::expr_at(phi, t + h)? - Self::expr_at(phi, t - h)?) / (2.0 * h)
            }
        };
        if !d.is_finite() {
            return Err(Error::Domain(format!("kernel derivative is not finite at t={t}")));
        }
        Ok(d)
    }

    /// Solves `phi(t) = x` for `t` in `[lo, hi]` (closed forms for the
    /// built-in kinds, bisection otherwise).
    pub fn inverse(&self, x: f64, lo: f64, hi: f64) -> Result<f64> {
        match self {
            PhiFunction::Identity => Ok(x),
            PhiFunction::Log => Ok(x.exp()),
            PhiFunction::Power(p) => {
                if x < 0.0 {
                    return Err(Error::Domain(format!("power kernel has no preimage of {x}")));
                }
                Ok(x.powf(1.0 / p))
            }
            PhiFunction::Expr { .. } => {
                let (mut a, mut b) = (lo, hi);
                let (fa, fb) = (self.eval(a)?, self.eval(b)?);
                if x <= fa {
                    return Ok(lo);
                }
                if x >= fb {
                    return Ok(hi);
                }
                for _ in 0..200 {
                    let m = 0.5 * (a + b);
                    if m <= a || m >= b {
                        break;
                    }
                    if self.eval(m)? < x {
                        a = m;
                    } else {
                        b = m;
                    }
                }
                Ok(0.5 * (a + b))
            }
        }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, PhiFunction::Identity)
    }
}

impl Serialize for PhiFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.spec().serialize(s)
    }
}

pub fn phi_eval(phi: &PhiFunction, t: f64) -> Result<f64> {
    phi.eval(t)
}

pub fn phi_deriv(phi: &PhiFunction, t: f64) -> Result<f64> {
    phi.deriv(t)
}

#[derive(Debug, Clone, PartialEq)]
pub enum ViolationKind {
    NotIncreasing,
    NonPositiveDerivative(f64),
    Undefined(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub t: f64,
    pub kind: ViolationKind,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.kind {
            ViolationKind::NotIncreasing => write!(f, "phi is not strictly increasing at t={}", self.t),
            ViolationKind::NonPositiveDerivative(d) => write!(f, "phi'({}) = {d} is not positive", self.t),
            ViolationKind::Undefined(msg) => write!(f, "phi undefined at t={}: {msg}", self.t),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhiValidation {
    pub passed: bool,
    pub samples: usize,
    pub first_violation: Option<Violation>,
}

impl PhiValidation {
    pub fn into_result(self) -> Result<()> {
        match self.first_violation {
            None => Ok(()),
            Some(v) => Err(Error::PhiValidation(v.to_string())),
        }
    }
}

/// Samples `phi` at `n_samples` equispaced points of `[a, t_end]` and checks
/// strict increase, and positivity of the derivative at the points right of `a`.
pub fn validate_phi(phi: &PhiFunction, a: f64, t_end: f64, n_samples: usize) -> PhiValidation {
    let fail = |t: f64, kind: ViolationKind| PhiValidation {
        passed: false,
        samples: n_samples,
        first_violation: Some(Violation { t, kind }),
    };
    if !(a < t_end) || n_samples < 2 {
        return fail(a, ViolationKind::Undefined(format!("need a < T and at least 2 samples (a={a}, T={t_end})")));
    }
    let mut prev = f64::NEG_INFINITY;
    for i in 0..n_samples {
        let t = if i + 1 == n_samples { t_end } else { a + (t_end - a) * i as f64 / (n_samples - 1) as f64 };
        let v = match phi.eval(t) {
            Ok(v) => v,
            Err(e) => return fail(t, ViolationKind::Undefined(e.to_string())),
        };
        if v <= prev {
            return fail(t, ViolationKind::NotIncreasing);
        }
        prev = v;
        if i > 0 {
            match phi.deriv(t) {
                Ok(d) if d > 0.0 => {}
                Ok(d) => return fail(t, ViolationKind::NonPositiveDerivative(d)),
                Err(e) => return fail(t, ViolationKind::Undefined(e.to_string())),
            }
        }
    }
    PhiValidation { passed: true, samples: n_samples, first_violation: None }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_values() {
        assert_eq!(phi_eval(&PhiFunction::Identity, 2.0).unwrap(), 2.0);
        assert!((phi_eval(&PhiFunction::Log, std::f64::consts::E).unwrap() - 1.0).abs() < 1e-16);
        assert_eq!(phi_eval(&PhiFunction::Power(2.0), 3.0).unwrap(), 9.0);
        assert_eq!(phi_deriv(&PhiFunction::Identity, 5.0).unwrap(), 1.0);
        assert_eq!(phi_deriv(&PhiFunction::Log, 2.0).unwrap(), 0.5);
        assert_eq!(phi_deriv(&PhiFunction::Power(2.0), 3.0).unwrap(), 6.0);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(PhiFunction::Log.eval(0.0), Err(Error::Domain(_))));
        assert!(matches!(PhiFunction::Log.deriv(-1.0), Err(Error::Domain(_))));
        assert!(matches!(PhiFunction::Power(0.5).eval(-1.0), Err(Error::Domain(_))));
        assert!(matches!(PhiFunction::Power(0.5).deriv(0.0), Err(Error::Domain(_))));
        assert!(PhiFunction::power(0.0).is_err());
    }

    #[test]
    fn inverse_roundtrips() {
        let e = PhiFunction::expression("t^3 + t", Some("3*t^2 + 1")).unwrap();
        for phi in [PhiFunction::Identity, PhiFunction::Log, PhiFunction::Power(2.0), e] {
            for &t in &[0.5, 1.0, 1.7] {
                let x = phi.eval(t).unwrap();
                let back = phi.inverse(x, 0.1, 3.0).unwrap();
                assert!((back - t).abs() < 1e-13, "{phi:?} {t} {back}");
            }
        }
    }

    #[test]
    fn spec_roundtrip() {
        let e = PhiFunction::expression("exp(t)", Some("exp(t)")).unwrap();
        for phi in [PhiFunction::Identity, PhiFunction::Log, PhiFunction::Power(0.5), e] {
            assert_eq!(PhiFunction::from_spec(&phi.spec()).unwrap(), phi);
        }
        let json = serde_json::to_string(&PhiFunction::Power(2.0)).unwrap();
        assert_eq!(json, r#"{"kind":"power","p":2.0}"#);
    }

    #[test]
    fn finite_difference_fallback() {
        let phi = PhiFunction::expression("sin(t) + 2*t", None).unwrap();
        let d = phi.deriv(0.3).unwrap();
        assert!((d - (0.3f64.cos() + 2.0)).abs() < 1e-8);
    }
}
