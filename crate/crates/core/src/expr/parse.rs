use super::{BinOp, Constant, Func, Node, Scope, Var};
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    InvalidNumber(String),
    UnexpectedToken { found: String, expected: Vec<&'static str> },
    UnexpectedEnd { expected: Vec<&'static str> },
    UnknownIdentifier(String),
    DisallowedVariable(String),
    Arity { name: &'static str, expected: usize, found: usize },
}

/// Parse failure with a 0-based byte offset into the source text.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.position;
        match &self.kind {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character '{c}' at position {p}"),
            ParseErrorKind::InvalidNumber(s) => write!(f, "invalid number '{s}' at position {p}"),
            ParseErrorKind::UnexpectedToken { found, expected } => {
                write!(f, "syntax error at position {p}: found '{found}', expected one of {}", expected.join(", "))
            }
            ParseErrorKind::UnexpectedEnd { expected } => {
                write!(f, "syntax error at position {p}: unexpected end of input, expected one of {}", expected.join(", "))
            }
            ParseErrorKind::UnknownIdentifier(s) => write!(f, "unknown identifier '{s}' at position {p}"),
            ParseErrorKind::DisallowedVariable(s) => {
                write!(f, "variable or function '{s}' is not allowed here (position {p})")
            }
            ParseErrorKind::Arity { name, expected, found } => {
                write!(f, "{name} takes {expected} argument(s), got {found} (position {p})")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    Comma,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(x) => format!("{x}"),
            Tok::Ident(s) => s.clone(),
            Tok::Op(c) => c.to_string(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
            Tok::Comma => ",".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() || c == '.' {
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let s = &text[start..i];
            match s.parse::<f64>() {
                Ok(v) if v.is_finite() => out.push((Tok::Num(v), start)),
                _ => return Err(ParseError { position: start, kind: ParseErrorKind::InvalidNumber(s.into()) }),
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(text[start..i].to_string()), start));
            continue;
        }
        let tok = match c {
            '+' | '-' | '*' | '/' | '^' => Tok::Op(c),
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            _ => {
                let ch = text[i..].chars().next().unwrap_or(c);
                return Err(ParseError { position: start, kind: ParseErrorKind::UnexpectedChar(ch) });
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

const OPERAND: &[&str] = &["number", "identifier", "'('", "'-'"];
const AFTER_OPERAND: &[&str] = &["operator", "')'", "','", "end of input"];
const NEG_BP: u8 = 5;

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    scope: Scope,
}

pub(super) fn parse(text: &str, scope: Scope) -> Result<Node, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0, scope };
    let node = p.expr(0)?;
    match p.peek() {
        Tok::End => Ok(node),
        _ => Err(p.unexpected(AFTER_OPERAND)),
    }
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&'static str]) -> ParseError {
        let position = self.offset();
        let kind = match self.peek() {
            Tok::End => ParseErrorKind::UnexpectedEnd { expected: expected.to_vec() },
            t => ParseErrorKind::UnexpectedToken { found: t.describe(), expected: expected.to_vec() },
        };
        ParseError { position, kind }
    }

    fn expr(&mut self, min_bp: u8) -> Result<Node, ParseError> {
        let mut lhs = self.operand()?;
        loop {
            let (op, lbp, rbp) = match self.peek() {
                Tok::Op('+') => (BinOp::Add, 1, 2),
                Tok::Op('-') => (BinOp::Sub, 1, 2),
                Tok::Op('*') => (BinOp::Mul, 3, 4),
                Tok::Op('/') => (BinOp::Div, 3, 4),
                Tok::Op('^') => (BinOp::Pow, 7, 6),
                Tok::End | Tok::RParen | Tok::Comma => break,
                _ => return Err(self.unexpected(AFTER_OPERAND)),
            };
            if lbp <= min_bp {
                break;
            }
            self.bump();
            let rhs = self.expr(rbp)?;
            lhs = Node::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn operand(&mut self) -> Result<Node, ParseError> {
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(Node::Num(v))
            }
            Tok::Op('-') => {
                self.bump();
                Ok(Node::Neg(Box::new(self.expr(NEG_BP)?)))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr(0)?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                let at = self.offset();
                self.bump();
                if *self.peek() == Tok::LParen {
                    self.call(&name, at)
                } else {
                    self.name(&name, at)
                }
            }
            _ => Err(self.unexpected(OPERAND)),
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::RParen {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&["operator", "')'"]))
        }
    }

    fn name(&self, name: &str, at: usize) -> Result<Node, ParseError> {
        let var = match name {
            "t" => Var::T,
            "u" => Var::U,
            "pi" => return Ok(Node::Const(Constant::Pi)),
            "e" => return Ok(Node::Const(Constant::E)),
            _ => return Err(ParseError { position: at, kind: ParseErrorKind::UnknownIdentifier(name.into()) }),
        };
        if !self.scope.allows(var) {
            return Err(ParseError { position: at, kind: ParseErrorKind::DisallowedVariable(name.into()) });
        }
        Ok(Node::Var(var))
    }

    fn call(&mut self, name: &str, at: usize) -> Result<Node, ParseError> {
        let Some(func) = Func::lookup(name) else {
            return Err(ParseError { position: at, kind: ParseErrorKind::UnknownIdentifier(name.into()) });
        };
        if func == Func::Phi && !self.scope.phi {
            return Err(ParseError { position: at, kind: ParseErrorKind::DisallowedVariable(name.into()) });
        }
        self.bump(); // '('
        let mut args = vec![self.expr(0)?];
        loop {
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                    args.push(self.expr(0)?);
                }
                Tok::RParen => {
                    self.bump();
                    break;
                }
                _ => return Err(self.unexpected(&["operator", "','", "')'"])),
            }
        }
        if args.len() != func.arity() {
            return Err(ParseError {
                position: at,
                kind: ParseErrorKind::Arity { name: func.name(), expected: func.arity(), found: args.len() },
            });
        }
        Ok(Node::Call(func, args))
    }
}
