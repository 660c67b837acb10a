//! The `.lehn` manifest language.
//!
//! A manifest is a list of `check` blocks. Each block declares an integer
//! parameter grid, a series in an inner variable, an optional substitution
//! expressing `z` in that variable, the coefficient to extract and the
//! expected value:
//!
//! ```text
//! check "blowup/k3" {
//!   params n in 1..8, k in 0..24
//!   require k <= 3n
//!   series = (1-w)^(k+2) * (1-2w)^(-k+6n-1) / (1-6w+6w^2)^(3n-1);
//!   subst  = w(1-w)(1-2w)^4/(1-6w+6w^2)^3;
//!   coeff  = n;
//!   expect = binom(k-n+1, n);
//! }
//! ```

use std::fmt;

use thiserror::Error;

pub mod ast;
mod check;
mod eval;
mod lexer;
mod parser;

pub use ast::{print_manifest, Affine, CheckSpec, Constraint, Exponent, Expr, ParamRange, Relation};
pub use check::{
    run_check, run_point, targets, CheckResult, PreparedCheck, RunError, Status, Targets,
    DEFAULT_CHECK_ORDER,
};
pub use eval::{evaluate, evaluate_scalar, Bindings};
pub use lexer::Pos;
pub use parser::{parse_expr, parse_manifest};

use crate::rational::{to_pq, Rational};
use crate::series::{SeriesError, Var};

/// A syntax or declaration error with its 1-based source position.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(pos: Pos, message: impl Into<String>) -> ParseError {
        ParseError { line: pos.line, col: pos.col, message: message.into() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum EvalErrorKind {
    Series(SeriesError),
    Unbound(String),
    NotAffine,
    WrongVariable { found: Var, expected: Var },
    VariableInScalar(Var),
    NotInteger(Rational),
    DivisionByZero,
    IrrationalSqrt(Rational),
    NegativeBinomialBottom(i64),
}

impl fmt::Display for EvalErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalErrorKind::Series(e) => write!(f, "{e}"),
            EvalErrorKind::Unbound(p) => write!(f, "unbound parameter '{p}'"),
            EvalErrorKind::NotAffine => write!(f, "exponent is not affine in the parameters"),
            EvalErrorKind::WrongVariable { found, expected } => {
                write!(f, "variable {found} where {expected} was expected")
            }
            EvalErrorKind::VariableInScalar(v) => write!(f, "series variable {v} in a scalar expression"),
            EvalErrorKind::NotInteger(r) => write!(f, "expected an integer, got {}", to_pq(r)),
            EvalErrorKind::DivisionByZero => write!(f, "division by zero"),
            EvalErrorKind::IrrationalSqrt(r) => write!(f, "sqrt({}) is not rational", to_pq(r)),
            EvalErrorKind::NegativeBinomialBottom(k) => write!(f, "binomial lower index {k} is negative"),
        }
    }
}

/// An evaluation failure, located by the path of the failing sub-expression.
#[derive(Clone, Debug, PartialEq, Error)]
#[error("{}{kind}", if path.is_empty() { String::new() } else { format!("at {path}: ") })]
pub struct EvalError {
    pub path: String,
    pub kind: EvalErrorKind,
}
