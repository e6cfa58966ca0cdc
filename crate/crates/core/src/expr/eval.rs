use super::{BinOp, Constant, Func, Node, Var};
use crate::phi::PhiFunction;
use crate::special;
use std::fmt;

/// Values for the free names of an expression.
#[derive(Clone, Copy, Default)]
pub struct Bindings<'a> {
    pub t: Option<f64>,
    pub u: Option<f64>,
    pub phi: Option<&'a PhiFunction>,
}

impl<'a> Bindings<'a> {
    pub fn tu(t: f64, u: f64, phi: &'a PhiFunction) -> Self {
        Bindings { t: Some(t), u: Some(u), phi: Some(phi) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum EvalErrorKind {
    MissingBinding(&'static str),
    Domain(String),
}

/// Evaluation failure together with the offending subexpression.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub struct EvalError {
    pub kind: EvalErrorKind,
    pub subexpr: String,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            EvalErrorKind::MissingBinding(v) => write!(f, "no value bound for '{v}' in {}", self.subexpr),
            EvalErrorKind::Domain(msg) => write!(f, "{msg} in {}", self.subexpr),
        }
    }
}

fn domain(node: &Node, msg: impl Into<String>) -> EvalError {
    EvalError { kind: EvalErrorKind::Domain(msg.into()), subexpr: node.to_string() }
}

fn finite(node: &Node, v: f64) -> Result<f64, EvalError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(domain(node, "non-finite result"))
    }
}

pub(super) fn eval(node: &Node, b: &Bindings<'_>) -> Result<f64, EvalError> {
    match node {
        Node::Num(x) => Ok(*x),
        Node::Const(Constant::Pi) => Ok(std::f64::consts::PI),
        Node::Const(Constant::E) => Ok(std::f64::consts::E),
        Node::Var(v) => {
            let val = match v {
                Var::T => b.t,
                Var::U => b.u,
            };
            val.ok_or_else(|| EvalError { kind: EvalErrorKind::MissingBinding(v.name()), subexpr: node.to_string() })
        }
        Node::Neg(x) => Ok(-eval(x, b)?),
        Node::Binary(op, l, r) => {
            let (x, y) = (eval(l, b)?, eval(r, b)?);
            let v = match op {
                BinOp::Add => x + y,
                BinOp::Sub => x - y,
                BinOp::Mul => x * y,
                BinOp::Div => {
                    if y == 0.0 {
                        return Err(domain(node, "division by zero"));
                    }
                    x / y
                }
                BinOp::Pow => power(node, x, y)?,
            };
            finite(node, v)
        }
        Node::Call(func, args) => {
            let x = eval(&args[0], b)?;
            let v = match func {
                Func::Sin => x.sin(),
                Func::Cos => x.cos(),
                Func::Exp => x.exp(),
                Func::Ln => {
                    if x <= 0.0 {
                        return Err(domain(node, format!("logarithm of nonpositive value {x}")));
                    }
                    x.ln()
                }
                Func::Abs => x.abs(),
                Func::Sqrt => {
                    if x < 0.0 {
                        return Err(domain(node, format!("square root of negative value {x}")));
                    }
                    x.sqrt()
                }
                Func::Pow => power(node, x, eval(&args[1], b)?)?,
                Func::Min => x.min(eval(&args[1], b)?),
                Func::Max => x.max(eval(&args[1], b)?),
                Func::Erf => special::erf(x),
                Func::Gamma => special::gamma(x).map_err(|e| domain(node, e.to_string()))?,
                Func::Phi => {
                    let phi = b.phi.ok_or_else(|| domain(node, "phi is not available in this context"))?;
                    phi.eval(x).map_err(|e| domain(node, e.to_string()))?
                }
            };
            finite(node, v)
        }
    }
}

fn power(node: &Node, x: f64, y: f64) -> Result<f64, EvalError> {
    if x == 0.0 && y < 0.0 {
        return Err(domain(node, "zero raised to a negative power"));
    }
    if x < 0.0 && y.fract() != 0.0 {
        return Err(domain(node, format!("negative base {x} with non-integer exponent {y}")));
    }
    Ok(x.powf(y))
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;
    use std::collections::HashMap;

    #[test]
    fn evaluates_with_named_bindings() {
        let e = parse("t*u", &["t", "u"]).unwrap();
        let m: HashMap<&str, f64> = [("t", 2.0), ("u", 3.0)].into_iter().collect();
        assert_eq!(super::super::eval(&e, &m).unwrap(), 6.0);
        assert_eq!(parse("exp(0)", &[]).unwrap().eval(&Bindings::default()).unwrap(), 1.0);
        let g = parse("gamma(0.5)", &[]).unwrap().eval(&Bindings::default()).unwrap();
        assert!((g - std::f64::consts::PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn domain_violations_are_errors() {
        let b = Bindings { t: Some(0.0), u: Some(-1.0), phi: None };
        for s in ["ln(t)", "1/t", "sqrt(u)", "u^0.5", "t^(-1)", "gamma(t)", "exp(1000)", "phi(t)"] {
            let e = parse(s, &["t", "u"]).unwrap().eval(&b).unwrap_err();
            assert!(matches!(e.kind, EvalErrorKind::Domain(_)), "{s}");
        }
    }

    #[test]
    fn missing_binding_names_the_variable() {
        let e = parse("t + 1", &["t"]).unwrap().eval(&Bindings::default()).unwrap_err();
        assert_eq!(e.kind, EvalErrorKind::MissingBinding("t"));
        assert_eq!(e.subexpr, "t");
    }

    #[test]
    fn error_carries_offending_subexpression() {
        let e = parse("1 + ln(u - 2)", &["u"]).unwrap().eval(&Bindings { u: Some(1.0), ..Default::default() });
        assert_eq!(e.unwrap_err().subexpr, "ln(u - 2.0)");
    }
}
