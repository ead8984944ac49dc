//! Arithmetical expressions over `x_1..x_n` built from `+ - * /`, integer
//! powers and the elementary functions `abs sqrt sqr exp ln sin cos arctan`.
//!
//! An [`Expr`] is evaluated two ways: in plain floating point at a point
//! ([`Expr::eval_point`], no rigor) and as its natural interval extension
//! over a box ([`Expr::eval_interval`]), which encloses the exact range.
//!
//! Grammar accepted by [`parse`]:
//!
//! ```text
//! expr    = term { ("+" | "-") term } ;
//! term    = unary { ("*" | "/") unary } ;
//! unary   = ("-" | "+") unary | power ;
//! power   = primary { "^" integer } ;
//! primary = number | variable | "pi" | "e"
//!         | function "(" expr ")" | "(" expr ")" ;
//! function = "abs" | "sqrt" | "sqr" | "exp" | "ln" | "sin" | "cos"
//!          | "arctan" | "atan" ;
//! number  = digits [ "." digits ] [ ("e" | "E") [ "+" | "-" ] digits ] ;
//! ```
//!
//! Variable names shadow the constants `pi` and `e`.

mod parser;

use std::fmt;

use thiserror::Error;

use crate::interval::{Interval, IntervalBox, IntervalError};

pub use parser::{parse, ParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NamedConstant {
    Pi,
    E,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Neg,
    Abs,
    Sqrt,
    Sqr,
    Exp,
    Ln,
    Sin,
    Cos,
    Arctan,
}

impl UnaryOp {
    /// Elementary functions callable by name.
    pub const FUNCTIONS: [UnaryOp; 8] = [
        UnaryOp::Abs,
        UnaryOp::Sqrt,
        UnaryOp::Sqr,
        UnaryOp::Exp,
        UnaryOp::Ln,
        UnaryOp::Sin,
        UnaryOp::Cos,
        UnaryOp::Arctan,
    ];

    pub fn name(self) -> &'static str {
        match self {
            UnaryOp::Neg => "-",
            UnaryOp::Abs => "abs",
            UnaryOp::Sqrt => "sqrt",
            UnaryOp::Sqr => "sqr",
            UnaryOp::Exp => "exp",
            UnaryOp::Ln => "ln",
            UnaryOp::Sin => "sin",
            UnaryOp::Cos => "cos",
            UnaryOp::Arctan => "arctan",
        }
    }

    fn from_name(name: &str) -> Option<UnaryOp> {
        match name {
            "atan" => Some(UnaryOp::Arctan),
            _ => UnaryOp::FUNCTIONS.into_iter().find(|f| f.name() == name),
        }
    }

    fn apply_interval(self, a: &Interval) -> Result<Interval, IntervalError> {
        match self {
            UnaryOp::Neg => Ok(a.neg()),
            UnaryOp::Abs => Ok(a.abs()),
            UnaryOp::Sqrt => a.sqrt(),
            UnaryOp::Sqr => a.sqr(),
            UnaryOp::Exp => a.exp(),
            UnaryOp::Ln => a.ln(),
            UnaryOp::Sin => a.sin(),
            UnaryOp::Cos => a.cos(),
            UnaryOp::Arctan => a.arctan(),
        }
    }

    fn apply_point(self, x: f64) -> Result<f64, EvalError> {
        let v = match self {
            UnaryOp::Neg => -x,
            UnaryOp::Abs => x.abs(),
            UnaryOp::Sqrt if x < 0.0 => return Err(EvalError::domain("sqrt", x)),
            UnaryOp::Sqrt => x.sqrt(),
            UnaryOp::Sqr => x * x,
            UnaryOp::Exp => x.exp(),
            UnaryOp::Ln if x <= 0.0 => return Err(EvalError::domain("ln", x)),
            UnaryOp::Ln => x.ln(),
            UnaryOp::Sin => x.sin(),
            UnaryOp::Cos => x.cos(),
            UnaryOp::Arctan => x.atan(),
        };
        Ok(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinaryOp {
    fn symbol(self) -> char {
        match self {
            BinaryOp::Add => '+',
            BinaryOp::Sub => '-',
            BinaryOp::Mul => '*',
            BinaryOp::Div => '/',
        }
    }
}

/// Expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    /// Decimal literal: source text, nearest double and rigorous enclosure.
    Literal {
        text: String,
        nearest: f64,
        value: Interval,
    },
    Named(NamedConstant),
    Var(usize),
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("{function} is undefined at {value}")]
    DomainViolation { function: &'static str, value: f64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("expected a point of dimension {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

impl EvalError {
    fn domain(function: &'static str, value: f64) -> Self {
        EvalError::DomainViolation { function, value }
    }
}

impl Expr {
    /// Exact literal for a finite double. Negative values become `-(|v|)`
    /// so that printing and re-parsing yields the same tree.
    pub fn constant(v: f64) -> Expr {
        let lit = Expr::Literal {
            text: format!("{:?}", v.abs()),
            nearest: v.abs(),
            value: Interval::point(v.abs()).expect("finite constant"),
        };
        if v.is_sign_negative() && v != 0.0 {
            Expr::Unary(UnaryOp::Neg, Box::new(lit))
        } else {
            lit
        }
    }

    #[cfg(test)]
    pub(crate) fn with_text(self, t: &str) -> Expr {
        match self {
            Expr::Literal { nearest, value, .. } => Expr::Literal {
                text: t.to_string(),
                nearest,
                value,
            },
            other => other,
        }
    }

    pub fn var(i: usize) -> Expr {
        Expr::Var(i)
    }

    pub fn unary(op: UnaryOp, e: Expr) -> Expr {
        Expr::Unary(op, Box::new(e))
    }

    pub fn binary(op: BinaryOp, a: Expr, b: Expr) -> Expr {
        Expr::Binary(op, Box::new(a), Box::new(b))
    }

    /// One more than the largest variable index used, or 0.
    pub fn min_arity(&self) -> usize {
        match self {
            Expr::Literal { .. } | Expr::Named(_) => 0,
            Expr::Var(i) => i + 1,
            Expr::Unary(_, a) | Expr::Pow(a, _) => a.min_arity(),
            Expr::Binary(_, a, b) => a.min_arity().max(b.min_arity()),
        }
    }

    /// Plain floating-point evaluation.
    pub fn eval_point(&self, x: &[f64]) -> Result<f64, EvalError> {
        match self {
            Expr::Literal { nearest, .. } => Ok(*nearest),
            Expr::Named(NamedConstant::Pi) => Ok(std::f64::consts::PI),
            Expr::Named(NamedConstant::E) => Ok(std::f64::consts::E),
            Expr::Var(i) => x.get(*i).copied().ok_or(EvalError::DimensionMismatch {
                expected: self.min_arity(),
                got: x.len(),
            }),
            Expr::Unary(op, a) => op.apply_point(a.eval_point(x)?),
            Expr::Binary(op, a, b) => {
                let (a, b) = (a.eval_point(x)?, b.eval_point(x)?);
                match op {
                    BinaryOp::Add => Ok(a + b),
                    BinaryOp::Sub => Ok(a - b),
                    BinaryOp::Mul => Ok(a * b),
                    BinaryOp::Div if b == 0.0 => Err(EvalError::DivisionByZero),
                    BinaryOp::Div => Ok(a / b),
                }
            }
            Expr::Pow(a, k) => Ok(a.eval_point(x)?.powi(*k as i32)),
        }
    }

    /// Natural interval extension: an enclosure of `{ e(x) : x in region }`.
    pub fn eval_interval(&self, region: &IntervalBox) -> Result<Interval, EvalError> {
        match self {
            Expr::Literal { value, .. } => Ok(*value),
            Expr::Named(NamedConstant::Pi) => Ok(Interval::PI),
            Expr::Named(NamedConstant::E) => Ok(Interval::E),
            Expr::Var(i) => {
                if *i >= region.dim() {
                    return Err(EvalError::DimensionMismatch {
                        expected: self.min_arity(),
                        got: region.dim(),
                    });
                }
                Ok(region.get(*i))
            }
            Expr::Unary(op, a) => Ok(op.apply_interval(&a.eval_interval(region)?)?),
            Expr::Binary(op, a, b) => {
                let (a, b) = (a.eval_interval(region)?, b.eval_interval(region)?);
                let r = match op {
                    BinaryOp::Add => a.add(&b),
                    BinaryOp::Sub => a.sub(&b),
                    BinaryOp::Mul => a.mul(&b),
                    BinaryOp::Div => a.div(&b),
                };
                Ok(r?)
            }
            Expr::Pow(a, k) => Ok(a.eval_interval(region)?.powi(*k)?),
        }
    }

    /// Fully parenthesised rendering that [`parse`] maps back to `self`.
    pub fn display<'a>(&'a self, vars: &'a [String]) -> ExprDisplay<'a> {
        ExprDisplay { expr: self, vars }
    }
}

pub struct ExprDisplay<'a> {
    expr: &'a Expr,
    vars: &'a [String],
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(f, self.expr, self.vars)
    }
}

fn write_expr(f: &mut fmt::Formatter<'_>, e: &Expr, vars: &[String]) -> fmt::Result {
    match e {
        Expr::Literal { text, .. } => write!(f, "{text}"),
        Expr::Named(NamedConstant::Pi) => write!(f, "pi"),
        Expr::Named(NamedConstant::E) => write!(f, "e"),
        Expr::Var(i) => match vars.get(*i) {
            Some(name) => write!(f, "{name}"),
            None => write!(f, "x{i}"),
        },
        Expr::Unary(UnaryOp::Neg, a) => {
            write!(f, "(-")?;
            write_expr(f, a, vars)?;
            write!(f, ")")
        }
        Expr::Unary(op, a) => {
            write!(f, "{}(", op.name())?;
            write_expr(f, a, vars)?;
            write!(f, ")")
        }
        Expr::Binary(op, a, b) => {
            write!(f, "(")?;
            write_expr(f, a, vars)?;
            write!(f, " {} ", op.symbol())?;
            write_expr(f, b, vars)?;
            write!(f, ")")
        }
        Expr::Pow(a, k) => {
            write!(f, "(")?;
            write_expr(f, a, vars)?;
            write!(f, "^{k})")
        }
    }
}

/// `f : R^n -> R^m` given by `m` expressions in the same `n` variables.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorFunction {
    vars: Vec<String>,
    components: Vec<Expr>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FunctionError {
    #[error("a function needs at least one component")]
    NoComponents,
    #[error("component {component} uses variable index {index} but arity is {arity}")]
    VariableOutOfRange {
        component: usize,
        index: usize,
        arity: usize,
    },
    #[error("component {component}: {source}")]
    Parse {
        component: usize,
        #[source]
        source: ParseError,
    },
}

impl VectorFunction {
    pub fn new(vars: Vec<String>, components: Vec<Expr>) -> Result<Self, FunctionError> {
        if components.is_empty() {
            return Err(FunctionError::NoComponents);
        }
        for (c, e) in components.iter().enumerate() {
            if e.min_arity() > vars.len() {
                return Err(FunctionError::VariableOutOfRange {
                    component: c,
                    index: e.min_arity() - 1,
                    arity: vars.len(),
                });
            }
        }
        Ok(VectorFunction { vars, components })
    }

    /// Parses each component text against the shared variable list.
    pub fn parse<S: AsRef<str>>(texts: &[S], vars: &[&str]) -> Result<Self, FunctionError> {
        let names: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
        let components = texts
            .iter()
            .enumerate()
            .map(|(component, t)| {
                parse(t.as_ref(), &names).map_err(|source| FunctionError::Parse { component, source })
            })
            .collect::<Result<Vec<_>, _>>()?;
        VectorFunction::new(names, components)
    }

    /// Scalar function of the given variables.
    pub fn scalar(text: &str, vars: &[&str]) -> Result<Self, FunctionError> {
        VectorFunction::parse(&[text], vars)
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn output_dim(&self) -> usize {
        self.components.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }

    pub fn eval_point(&self, x: &[f64]) -> Result<Vec<f64>, EvalError> {
        if x.len() != self.arity() {
            return Err(EvalError::DimensionMismatch {
                expected: self.arity(),
                got: x.len(),
            });
        }
        self.components.iter().map(|e| e.eval_point(x)).collect()
    }

    pub fn eval_interval(&self, region: &IntervalBox) -> Result<Vec<Interval>, EvalError> {
        if region.dim() != self.arity() {
            return Err(EvalError::DimensionMismatch {
                expected: self.arity(),
                got: region.dim(),
            });
        }
        self.components.iter().map(|e| e.eval_interval(region)).collect()
    }
}
