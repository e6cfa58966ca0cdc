//! A small arithmetic expression language for right-hand sides, impulse
//! maps, kernel functions, weights and waveforms.
//!
//! ```text
//! expr    = sum ;
//! sum     = product { ("+" | "-") product } ;
//! product = unary { ("*" | "/") unary } ;
//! unary   = "-" unary | power ;
//! power   = atom [ "^" unary ] ;
//! atom    = number | name | name "(" expr { "," expr } ")" | "(" expr ")" ;
//! ```
//!
//! `^` is right-associative and binds tighter than unary minus, so `-2^2`
//! is `-4`.

mod eval;
mod parse;

pub use eval::{Bindings, EvalError, EvalErrorKind};
pub use parse::{ParseError, ParseErrorKind};

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    T,
    U,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::T => "t",
            Var::U => "u",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constant {
    Pi,
    E,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Ln,
    Abs,
    Sqrt,
    Pow,
    Min,
    Max,
    Erf,
    Gamma,
    Phi,
}

impl Func {
    pub(crate) fn lookup(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "abs" => Func::Abs,
            "sqrt" => Func::Sqrt,
            "pow" => Func::Pow,
            "min" => Func::Min,
            "max" => Func::Max,
            "erf" => Func::Erf,
            "gamma" => Func::Gamma,
            "phi" => Func::Phi,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Abs => "abs",
            Func::Sqrt => "sqrt",
            Func::Pow => "pow",
            Func::Min => "min",
            Func::Max => "max",
            Func::Erf => "erf",
            Func::Gamma => "gamma",
            Func::Phi => "phi",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Func::Pow | Func::Min | Func::Max => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Num(f64),
    Const(Constant),
    Var(Var),
    Neg(Box<Node>),
    Binary(BinOp, Box<Node>, Box<Node>),
    Call(Func, Vec<Node>),
}

/// Which names an expression may refer to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Scope {
    pub t: bool,
    pub u: bool,
    pub phi: bool,
}

impl Scope {
    /// Right-hand sides: `f(t, u)`.
    pub const RHS: Scope = Scope { t: true, u: true, phi: true };
    /// Impulse maps: `J(u)`.
    pub const IMPULSE: Scope = Scope { t: false, u: true, phi: true };
    /// Functions of time (weights, waveforms).
    pub const TIME: Scope = Scope { t: true, u: false, phi: true };
    /// The kernel function itself, which cannot refer to `phi`.
    pub const KERNEL: Scope = Scope { t: true, u: false, phi: false };

    pub fn from_names(names: &[&str], phi: bool) -> Scope {
        Scope { t: names.contains(&"t"), u: names.contains(&"u"), phi }
    }

    fn allows(self, v: Var) -> bool {
        match v {
            Var::T => self.t,
            Var::U => self.u,
        }
    }
}

/// A parsed expression together with the scope it was checked against.
#[derive(Debug, Clone)]
pub struct Expression {
    root: Node,
    scope: Scope,
}

impl PartialEq for Expression {
    fn eq(&self, other: &Self) -> bool {
        self.root == other.root
    }
}

impl Expression {
    pub fn parse(text: &str, scope: Scope) -> Result<Expression, ParseError> {
        let root = parse::parse(text, scope)?;
        Ok(Expression { root, scope })
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn scope(&self) -> Scope {
        self.scope
    }

    pub fn uses(&self, v: Var) -> bool {
        self.root.uses(v)
    }

    /// A constant expression (no variables, no calls to `phi`).
    pub fn constant(value: f64) -> Expression {
        Expression { root: Node::Num(value), scope: Scope::RHS }
    }

    pub fn eval(&self, b: &Bindings<'_>) -> Result<f64, EvalError> {
        eval::eval(&self.root, b)
    }
}

/// Parses `text`, allowing only the variables named in `allowed_vars`.
pub fn parse(text: &str, allowed_vars: &[&str]) -> Result<Expression, ParseError> {
    Expression::parse(text, Scope::from_names(allowed_vars, true))
}

/// Evaluates with bindings given by name (`t`, `u`).
pub fn eval(e: &Expression, bindings: &std::collections::HashMap<&str, f64>) -> Result<f64, EvalError> {
    let b = Bindings { t: bindings.get("t").copied(), u: bindings.get("u").copied(), phi: None };
    e.eval(&b)
}

impl Node {
    fn uses(&self, v: Var) -> bool {
        match self {
            Node::Var(w) => *w == v,
            Node::Num(_) | Node::Const(_) => false,
            Node::Neg(x) => x.uses(v),
            Node::Binary(_, l, r) => l.uses(v) || r.uses(v),
            Node::Call(_, args) => args.iter().any(|a| a.uses(v)),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Node::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
            Node::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
            Node::Neg(_) => 3,
            Node::Binary(BinOp::Pow, ..) => 4,
            _ => 5,
        }
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, child: &Node, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Num(x) => write!(f, "{x:?}"),
            Node::Const(Constant::Pi) => f.write_str("pi"),
            Node::Const(Constant::E) => f.write_str("e"),
            Node::Var(v) => f.write_str(v.name()),
            Node::Neg(x) => {
                f.write_str("-")?;
                write_child(f, x, x.precedence() < 3)
            }
            Node::Binary(op, l, r) => {
                let p = self.precedence();
                let sym = match op {
                    BinOp::Add => " + ",
                    BinOp::Sub => " - ",
                    BinOp::Mul => " * ",
                    BinOp::Div => " / ",
                    BinOp::Pow => "^",
                };
                let (lp, rp) = if *op == BinOp::Pow {
                    (l.precedence() <= p, r.precedence() < p)
                } else {
                    (l.precedence() < p, r.precedence() <= p)
                };
                write_child(f, l, lp)?;
                f.write_str(sym)?;
                write_child(f, r, rp)
            }
            Node::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.fmt(f)
    }
}

impl serde::Serialize for Expression {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
