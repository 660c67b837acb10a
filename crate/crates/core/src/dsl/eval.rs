//! Evaluation of manifest expressions to exact series and scalars.
//!
//! All arithmetic is delegated to [`crate::series`]; errors carry the path of
//! the failing sub-expression (e.g. `div.den/sqrt`).

use std::collections::BTreeMap;

use num_traits::{Signed, ToPrimitive, Zero};

use super::ast::{Affine, Exponent, Expr};
use super::{EvalError, EvalErrorKind};
use crate::rational::{binom_general, pow_i64, Rational};
use crate::series::{Series, Var};

pub type Bindings = BTreeMap<String, i64>;

struct Ctx<'a> {
    bindings: &'a Bindings,
    path: Vec<&'static str>,
}

impl Ctx<'_> {
    fn err(&self, kind: EvalErrorKind) -> EvalError {
        EvalError { path: self.path.join("/"), kind }
    }

    fn nested<T>(&mut self, label: &'static str, f: impl FnOnce(&mut Self) -> Result<T, EvalError>) -> Result<T, EvalError> {
        self.path.push(label);
        let out = f(self);
        self.path.pop();
        out
    }

    fn param(&self, name: &str) -> Result<Rational, EvalError> {
        self.bindings
            .get(name)
            .map(|&v| Rational::from_integer(v.into()))
            .ok_or_else(|| self.err(EvalErrorKind::Unbound(name.to_string())))
    }

    fn exponent(&self, e: &Exponent) -> Result<Rational, EvalError> {
        match e {
            Exponent::Literal(r) => Ok(r.clone()),
            Exponent::Affine(x) => Affine::from_expr(x)
                .ok_or_else(|| self.err(EvalErrorKind::NotAffine))?
                .eval(self.bindings)
                .ok_or_else(|| self.err(EvalErrorKind::Unbound(format!("{x}")))),
        }
    }

    fn series(&mut self, e: &Expr, var: Var, order: usize) -> Result<Series, EvalError> {
        let lift = |ctx: &Self, r: Result<Series, crate::series::SeriesError>| {
            r.map_err(|s| ctx.err(EvalErrorKind::Series(s)))
        };
        match e {
            Expr::Num(r) => Ok(Series::constant(var, r.clone(), order)),
            Expr::Var(v) if *v == var => Ok(Series::identity(var, order)),
            Expr::Var(v) => Err(self.err(EvalErrorKind::WrongVariable { found: *v, expected: var })),
            Expr::Param(p) => Ok(Series::constant(var, self.param(p)?, order)),
            Expr::Neg(a) => Ok(self.nested("neg", |c| c.series(a, var, order))?.neg()),
            Expr::Add(a, b) => {
                let (x, y) = self.pair("add", a, b, var, order)?;
                lift(self, x.add(&y))
            }
            Expr::Sub(a, b) => {
                let (x, y) = self.pair("sub", a, b, var, order)?;
                lift(self, x.sub(&y))
            }
            Expr::Mul(a, b) => {
                let (x, y) = self.pair("mul", a, b, var, order)?;
                lift(self, x.mul(&y))
            }
            Expr::Div(a, b) => {
                let x = self.nested("div.num", |c| c.series(a, var, order))?;
                let y = self.nested("div.den", |c| c.series(b, var, order))?;
                self.path.push("div");
                // A constant divisor is a scalar division, not a series inversion.
                let r = if y.is_constant() {
                    lift(self, x.scalar_div(y.constant_term()))
                } else {
                    lift(self, x.div(&y))
                };
                self.path.pop();
                r
            }
            Expr::Pow(a, ex) => {
                let base = self.nested("pow.base", |c| c.series(a, var, order))?;
                self.path.push("pow");
                let r = self.exponent(ex).and_then(|p| lift(self, base.pow(&p)));
                self.path.pop();
                r
            }
            Expr::Sqrt(a) => {
                let inner = self.nested("sqrt", |c| c.series(a, var, order))?;
                self.path.push("sqrt");
                let r = lift(self, inner.sqrt());
                self.path.pop();
                r
            }
            Expr::Binom(..) => Ok(Series::constant(var, self.scalar(e)?, order)),
        }
    }

    fn pair(&mut self, op: &'static str, a: &Expr, b: &Expr, var: Var, order: usize) -> Result<(Series, Series), EvalError> {
        self.path.push(op);
        let x = self.nested("lhs", |c| c.series(a, var, order));
        let y = x.and_then(|x| Ok((x, self.nested("rhs", |c| c.series(b, var, order))?)));
        self.path.pop();
        y
    }

    fn integer(&mut self, label: &'static str, e: &Expr) -> Result<i64, EvalError> {
        let v = self.nested(label, |c| c.scalar(e))?;
        if !v.is_integer() {
            return Err(self.err(EvalErrorKind::NotInteger(v)));
        }
        v.to_integer().to_i64().ok_or_else(|| self.err(EvalErrorKind::NotInteger(v)))
    }

    fn scalar(&mut self, e: &Expr) -> Result<Rational, EvalError> {
        match e {
            Expr::Num(r) => Ok(r.clone()),
            Expr::Var(v) => Err(self.err(EvalErrorKind::VariableInScalar(*v))),
            Expr::Param(p) => self.param(p),
            Expr::Neg(a) => Ok(-self.nested("neg", |c| c.scalar(a))?),
            Expr::Add(a, b) => Ok(self.nested("add.lhs", |c| c.scalar(a))? + self.nested("add.rhs", |c| c.scalar(b))?),
            Expr::Sub(a, b) => Ok(self.nested("sub.lhs", |c| c.scalar(a))? - self.nested("sub.rhs", |c| c.scalar(b))?),
            Expr::Mul(a, b) => Ok(self.nested("mul.lhs", |c| c.scalar(a))? * self.nested("mul.rhs", |c| c.scalar(b))?),
            Expr::Div(a, b) => {
                let x = self.nested("div.num", |c| c.scalar(a))?;
                let y = self.nested("div.den", |c| c.scalar(b))?;
                if y.is_zero() {
                    return Err(self.err(EvalErrorKind::DivisionByZero));
                }
                Ok(x / y)
            }
            Expr::Pow(a, ex) => {
                let base = self.nested("pow.base", |c| c.scalar(a))?;
                let p = self.exponent(ex)?;
                let p = p
                    .is_integer()
                    .then(|| p.to_integer().to_i64())
                    .flatten()
                    .ok_or_else(|| self.err(EvalErrorKind::NotInteger(p.clone())))?;
                if base.is_zero() && p < 0 {
                    return Err(self.err(EvalErrorKind::DivisionByZero));
                }
                Ok(pow_i64(&base, p))
            }
            Expr::Sqrt(a) => {
                let v = self.nested("sqrt", |c| c.scalar(a))?;
                exact_sqrt(&v).ok_or_else(|| self.err(EvalErrorKind::IrrationalSqrt(v)))
            }
            Expr::Binom(a, b) => {
                let top = self.integer("binom.top", a)?;
                let bottom = self.integer("binom.bottom", b)?;
                if bottom < 0 {
                    return Err(self.err(EvalErrorKind::NegativeBinomialBottom(bottom)));
                }
                Ok(binom_general(&top.into(), bottom as u64))
            }
        }
    }
}

fn exact_sqrt(v: &Rational) -> Option<Rational> {
    if v.is_negative() {
        return None;
    }
    let (n, d) = (v.numer().sqrt(), v.denom().sqrt());
    (&n * &n == *v.numer() && &d * &d == *v.denom()).then(|| Rational::new(n, d))
}

/// Evaluates `e` as a series in `var` through `order`.
pub fn evaluate(e: &Expr, bindings: &Bindings, var: Var, order: usize) -> Result<Series, EvalError> {
    Ctx { bindings, path: Vec::new() }.series(e, var, order)
}

/// Evaluates a variable-free expression to a rational.
pub fn evaluate_scalar(e: &Expr, bindings: &Bindings) -> Result<Rational, EvalError> {
    Ctx { bindings, path: Vec::new() }.scalar(e)
}
