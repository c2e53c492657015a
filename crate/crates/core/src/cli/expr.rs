//! Expression language for user-supplied functions of `x`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?
//! atom   := number | 'x' | 'pi' | 'e' | 'c'
//!         | ('ln' | 'exp' | 'sin' | 'cos' | 'sqrt') '(' expr ')'
//!         | '(' expr ')'
//! ```
//!
//! `^` is right-associative and binds tighter than unary minus, so
//! `-x^2` is `-(x^2)` and `2^3^2` is `2^(3^2)`.

use std::fmt;

use crate::error::PqError;
use crate::function::{Interval, RealFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constant {
    Pi,
    E,
    /// User-bound constant, `1` unless set.
    C,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Ln,
    Exp,
    Sin,
    Cos,
    Sqrt,
}

impl Func {
    fn name(&self) -> &'static str {
        match self {
            Func::Ln => "ln",
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sqrt => "sqrt",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "ln" => Func::Ln,
            "exp" => Func::Exp,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(&self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Pow => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    X,
    Const(Constant),
    Neg(Box<Expr>),
    Call(Func, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
}

const NEG_PRECEDENCE: u8 = 3;
const ATOM_PRECEDENCE: u8 = 5;

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(op, ..) => op.precedence(),
            Expr::Neg(_) => NEG_PRECEDENCE,
            _ => ATOM_PRECEDENCE,
        }
    }

    fn write_child(&self, f: &mut fmt::Formatter<'_>, min_precedence: u8) -> fmt::Result {
        if self.precedence() < min_precedence {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }

    /// Whether the tree mentions the bound constant `c`.
    pub fn uses_c(&self) -> bool {
        match self {
            Expr::Const(Constant::C) => true,
            Expr::Num(_) | Expr::X | Expr::Const(_) => false,
            Expr::Neg(e) | Expr::Call(_, e) => e.uses_c(),
            Expr::Binary(_, l, r) => l.uses_c() || r.uses_c(),
        }
    }
}

/// Prints with the minimum parentheses needed to parse back to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::X => f.write_str("x"),
            Expr::Const(Constant::Pi) => f.write_str("pi"),
            Expr::Const(Constant::E) => f.write_str("e"),
            Expr::Const(Constant::C) => f.write_str("c"),
            Expr::Neg(e) => {
                f.write_str("-")?;
                e.write_child(f, NEG_PRECEDENCE)
            }
            Expr::Call(func, e) => write!(f, "{}({e})", func.name()),
            Expr::Binary(op, l, r) => {
                let prec = op.precedence();
                let (left_min, right_min) = match op {
                    BinOp::Pow => (ATOM_PRECEDENCE, NEG_PRECEDENCE),
                    _ => (prec, prec + 1),
                };
                l.write_child(f, left_min)?;
                write!(f, " {} ", op.symbol())?;
                r.write_child(f, right_min)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("syntax error at offset {offset}: expected {expected}")]
pub struct SyntaxError {
    pub offset: usize,
    pub expected: String,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Token {
    Num(f64),
    Ident(usize, usize),
    Op(char),
    LParen,
    RParen,
    End,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    peeked: Option<(usize, Token)>,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Self {
            src,
            pos: 0,
            peeked: None,
        }
    }

    fn error(&self, offset: usize, expected: &str) -> SyntaxError {
        SyntaxError {
            offset,
            expected: expected.to_string(),
        }
    }

    fn lex(&mut self) -> Result<(usize, Token), SyntaxError> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&b) = bytes.get(start) else {
            return Ok((start, Token::End));
        };
        let token = match b {
            b'0'..=b'9' | b'.' => {
                let mut end = start;
                while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'.') {
                    end += 1;
                }
                // Scientific notation only when digits follow the exponent marker.
                if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
                    let mut k = end + 1;
                    if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                        k += 1;
                    }
                    if k < bytes.len() && bytes[k].is_ascii_digit() {
                        while k < bytes.len() && bytes[k].is_ascii_digit() {
                            k += 1;
                        }
                        end = k;
                    }
                }
                let text = &self.src[start..end];
                let value: f64 = text.parse().map_err(|_| self.error(start, "a number"))?;
                self.pos = end;
                Token::Num(value)
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let mut end = start;
                while end < bytes.len()
                    && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_')
                {
                    end += 1;
                }
                self.pos = end;
                Token::Ident(start, end)
            }
            b'+' | b'-' | b'*' | b'/' | b'^' => {
                self.pos += 1;
                Token::Op(b as char)
            }
            b'(' => {
                self.pos += 1;
                Token::LParen
            }
            b')' => {
                self.pos += 1;
                Token::RParen
            }
            _ => return Err(self.error(start, "a number, identifier, operator or parenthesis")),
        };
        Ok((start, token))
    }

    fn peek(&mut self) -> Result<(usize, Token), SyntaxError> {
        if let Some(t) = self.peeked {
            return Ok(t);
        }
        let t = self.lex()?;
        self.peeked = Some(t);
        Ok(t)
    }

    fn next(&mut self) -> Result<(usize, Token), SyntaxError> {
        let t = self.peek()?;
        self.peeked = None;
        Ok(t)
    }

    fn expr(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek()?.1 {
                Token::Op('+') => BinOp::Add,
                Token::Op('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.next()?;
            let rhs = self.term()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek()?.1 {
                Token::Op('*') => BinOp::Mul,
                Token::Op('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.next()?;
            let rhs = self.unary()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr, SyntaxError> {
        if let Token::Op('-') = self.peek()?.1 {
            self.next()?;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, SyntaxError> {
        let base = self.atom()?;
        if let Token::Op('^') = self.peek()?.1 {
            self.next()?;
            let exponent = self.unary()?;
            return Ok(Expr::Binary(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, SyntaxError> {
        let (offset, token) = self.next()?;
        match token {
            Token::Num(v) => Ok(Expr::Num(v)),
            Token::LParen => {
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Token::Ident(s, e) => {
                let name = &self.src[s..e];
                match name {
                    "x" => Ok(Expr::X),
                    "pi" => Ok(Expr::Const(Constant::Pi)),
                    "e" => Ok(Expr::Const(Constant::E)),
                    "c" => Ok(Expr::Const(Constant::C)),
                    _ => {
                        let func = Func::from_name(name).ok_or_else(|| {
                            self.error(offset, "x, pi, e, c or one of ln, exp, sin, cos, sqrt")
                        })?;
                        let (open, t) = self.next()?;
                        if t != Token::LParen {
                            return Err(self.error(open, "'(' after function name"));
                        }
                        let arg = self.expr()?;
                        self.expect_rparen()?;
                        Ok(Expr::Call(func, Box::new(arg)))
                    }
                }
            }
            _ => Err(self.error(offset, "a number, x, a constant, a function call or '('")),
        }
    }

    fn expect_rparen(&mut self) -> Result<(), SyntaxError> {
        let (offset, t) = self.next()?;
        if t == Token::RParen {
            Ok(())
        } else {
            Err(self.error(offset, "')'"))
        }
    }
}

/// Parses an expression in `x`.
pub fn parse_expr(source: &str) -> Result<Expr, SyntaxError> {
    let mut parser = Parser::new(source);
    let expr = parser.expr()?;
    match parser.next()? {
        (_, Token::End) => Ok(expr),
        (offset, _) => Err(parser.error(offset, "an operator or end of input")),
    }
}

/// Values for named constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bindings {
    pub c: f64,
}

impl Default for Bindings {
    fn default() -> Self {
        Self { c: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{reason} in `{subtree}`")]
pub struct EvalError {
    pub subtree: String,
    pub reason: String,
}

fn fault(e: &Expr, reason: &str) -> EvalError {
    EvalError {
        subtree: e.to_string(),
        reason: reason.to_string(),
    }
}

/// Evaluates at `x`; domain faults name the offending subtree.
pub fn eval_expr(e: &Expr, x: f64, bindings: &Bindings) -> Result<f64, EvalError> {
    let value = match e {
        Expr::Num(v) => *v,
        Expr::X => x,
        Expr::Const(Constant::Pi) => std::f64::consts::PI,
        Expr::Const(Constant::E) => std::f64::consts::E,
        Expr::Const(Constant::C) => bindings.c,
        Expr::Neg(inner) => -eval_expr(inner, x, bindings)?,
        Expr::Call(func, arg) => {
            let a = eval_expr(arg, x, bindings)?;
            match func {
                Func::Ln if a <= 0.0 => return Err(fault(e, "logarithm of a non-positive value")),
                Func::Ln => a.ln(),
                Func::Sqrt if a < 0.0 => return Err(fault(e, "square root of a negative value")),
                Func::Sqrt => a.sqrt(),
                Func::Exp => a.exp(),
                Func::Sin => a.sin(),
                Func::Cos => a.cos(),
            }
        }
        Expr::Binary(op, l, r) => {
            let a = eval_expr(l, x, bindings)?;
            let b = eval_expr(r, x, bindings)?;
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div if b == 0.0 => return Err(fault(e, "division by zero")),
                BinOp::Div => a / b,
                BinOp::Pow => a.powf(b),
            }
        }
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(fault(e, "non-finite result"))
    }
}

/// Adapts an expression to a [`RealFunction`] on `[0, ∞)`.
pub fn to_function(e: &Expr, bindings: Bindings) -> RealFunction {
    let e = e.clone();
    RealFunction::fallible(Interval::non_negative(), move |x| {
        eval_expr(&e, x, &bindings).map_err(|err| PqError::Eval(err.to_string()))
    })
}
