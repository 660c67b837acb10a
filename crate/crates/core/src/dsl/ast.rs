use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;
use crate::series::Var;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(Rational),
    Var(Var),
    Param(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Exponent),
    Sqrt(Box<Expr>),
    Binom(Box<Expr>, Box<Expr>),
}

/// A power's exponent: a constant (`^3`, `^(-1/2)`) or an affine
/// combination of parameters (`^(k+2)`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Exponent {
    Literal(Rational),
    Affine(Box<Expr>),
}

/// `constant + sum coeff * param`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Affine {
    pub constant: Rational,
    pub terms: BTreeMap<String, Rational>,
}

impl Affine {
    fn constant(c: Rational) -> Affine {
        Affine { constant: c, terms: BTreeMap::new() }
    }

    fn scale(mut self, c: &Rational) -> Affine {
        self.constant *= c;
        for v in self.terms.values_mut() {
            *v *= c;
        }
        self.terms.retain(|_, v| !v.is_zero());
        self
    }

    fn plus(mut self, other: Affine) -> Affine {
        self.constant += other.constant;
        for (k, v) in other.terms {
            *self.terms.entry(k).or_insert_with(Rational::zero) += v;
        }
        self.terms.retain(|_, v| !v.is_zero());
        self
    }

    fn as_constant(&self) -> Option<&Rational> {
        self.terms.is_empty().then_some(&self.constant)
    }

    /// Interprets `e` as an affine form in parameters, if it is one.
    pub fn from_expr(e: &Expr) -> Option<Affine> {
        Some(match e {
            Expr::Num(r) => Affine::constant(r.clone()),
            Expr::Param(p) => Affine {
                constant: Rational::zero(),
                terms: BTreeMap::from([(p.clone(), Rational::one())]),
            },
            Expr::Neg(a) => Affine::from_expr(a)?.scale(&-Rational::one()),
            Expr::Add(a, b) => Affine::from_expr(a)?.plus(Affine::from_expr(b)?),
            Expr::Sub(a, b) => {
                Affine::from_expr(a)?.plus(Affine::from_expr(b)?.scale(&-Rational::one()))
            }
            Expr::Mul(a, b) => {
                let (a, b) = (Affine::from_expr(a)?, Affine::from_expr(b)?);
                match (a.as_constant(), b.as_constant()) {
                    (Some(c), _) => b.scale(&c.clone()),
                    (_, Some(c)) => a.scale(&c.clone()),
                    _ => return None,
                }
            }
            Expr::Div(a, b) => {
                let c = Affine::from_expr(b)?.as_constant()?.clone();
                if c.is_zero() {
                    return None;
                }
                Affine::from_expr(a)?.scale(&c.recip())
            }
            Expr::Var(_) | Expr::Pow(..) | Expr::Sqrt(_) | Expr::Binom(..) => return None,
        })
    }

    pub fn eval(&self, bindings: &BTreeMap<String, i64>) -> Option<Rational> {
        let mut acc = self.constant.clone();
        for (k, v) in &self.terms {
            acc += v * Rational::from_integer((*bindings.get(k)?).into());
        }
        Some(acc)
    }
}

impl Expr {
    /// Series variables mentioned anywhere in the expression.
    pub fn variables(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.walk(&mut |e| {
            if let Expr::Var(v) = e {
                out.insert(*v);
            }
        });
        out
    }

    pub fn has_params(&self) -> bool {
        let mut found = false;
        self.walk(&mut |e| found |= matches!(e, Expr::Param(_)));
        found
    }

    fn walk(&self, f: &mut impl FnMut(&Expr)) {
        f(self);
        match self {
            Expr::Num(_) | Expr::Var(_) | Expr::Param(_) => {}
            Expr::Neg(a) | Expr::Sqrt(a) => a.walk(f),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Binom(a, b) => {
                a.walk(f);
                b.walk(f);
            }
            Expr::Pow(a, e) => {
                a.walk(f);
                if let Exponent::Affine(x) = e {
                    x.walk(f);
                }
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Num(r) if !r.is_integer() => 2,
            _ => 5,
        }
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, e: &Expr, needs_parens: bool) -> fmt::Result {
    if needs_parens {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

/// Prints with the minimal parentheses needed to reparse to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.precedence();
        match self {
            Expr::Num(r) if r.is_integer() => write!(f, "{r}"),
            Expr::Num(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Param(s) => f.write_str(s),
            Expr::Neg(a) => {
                f.write_str("-")?;
                write_child(f, a, a.precedence() < p)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                let op = match self {
                    Expr::Add(..) => " + ",
                    Expr::Sub(..) => " - ",
                    Expr::Mul(..) => " * ",
                    _ => " / ",
                };
                write_child(f, a, a.precedence() < p)?;
                f.write_str(op)?;
                write_child(f, b, b.precedence() <= p)
            }
            Expr::Pow(a, e) => {
                write_child(f, a, a.precedence() < 5)?;
                match e {
                    Exponent::Literal(r) if r.is_integer() && !r.is_negative() => write!(f, "^{r}"),
                    Exponent::Literal(r) if r.is_integer() => write!(f, "^({r})"),
                    Exponent::Literal(r) => write!(f, "^({}/{})", r.numer(), r.denom()),
                    Exponent::Affine(x) => write!(f, "^({x})"),
                }
            }
            Expr::Sqrt(a) => write!(f, "sqrt({a})"),
            Expr::Binom(a, b) => write!(f, "binom({a}, {b})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Le,
    Ge,
    Lt,
    Gt,
    Even,
}

impl Relation {
    pub fn as_str(self) -> &'static str {
        match self {
            Relation::Eq => "==",
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Lt => "<",
            Relation::Gt => ">",
            Relation::Even => "even",
        }
    }
}

/// `lhs REL rhs`, or `lhs even`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub lhs: Expr,
    pub relation: Relation,
    pub rhs: Option<Expr>,
}

impl Constraint {
    pub fn holds(&self, bindings: &BTreeMap<String, i64>) -> bool {
        let value = |e: &Expr| Affine::from_expr(e).and_then(|a| a.eval(bindings));
        let Some(l) = value(&self.lhs) else { return false };
        match (self.relation, &self.rhs) {
            (Relation::Even, _) => l.is_integer() && (l.numer() % 2u8).is_zero(),
            (rel, Some(r)) => {
                let Some(r) = value(r) else { return false };
                match rel {
                    Relation::Eq => l == r,
                    Relation::Le => l <= r,
                    Relation::Ge => l >= r,
                    Relation::Lt => l < r,
                    Relation::Gt => l > r,
                    Relation::Even => unreachable!(),
                }
            }
            (_, None) => false,
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.lhs, self.relation.as_str())?;
        if let Some(r) = &self.rhs {
            write!(f, " {r}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamRange {
    pub name: String,
    pub lo: i64,
    pub hi: i64,
}

/// One declarative identity check. Equality ignores the source line.
#[derive(Clone, Debug)]
pub struct CheckSpec {
    pub name: String,
    pub params: Vec<ParamRange>,
    pub constraints: Vec<Constraint>,
    pub series: Expr,
    /// `z` written in the inner variable; absent when `series` is already the
    /// generating series.
    pub subst: Option<Expr>,
    /// Which coefficient to compare; absent for whole-series comparison.
    pub coeff: Option<Expr>,
    pub expect: Expr,
    pub order: Option<usize>,
    /// Source line of the `check` keyword.
    pub line: usize,
}

impl PartialEq for CheckSpec {
    fn eq(&self, other: &CheckSpec) -> bool {
        self.name == other.name
            && self.params == other.params
            && self.constraints == other.constraints
            && self.series == other.series
            && self.subst == other.subst
            && self.coeff == other.coeff
            && self.expect == other.expect
            && self.order == other.order
    }
}

impl Eq for CheckSpec {}

impl CheckSpec {
    /// The variable `series` (and `subst`) are written in; `z` when none.
    pub fn inner_var(&self) -> Var {
        self.series
            .variables()
            .into_iter()
            .chain(self.subst.iter().flat_map(Expr::variables))
            .next()
            .unwrap_or(Var::Z)
    }

    /// Manifest suite: the part of the name before the first `/`.
    pub fn suite(&self) -> &str {
        self.name.split('/').next().unwrap_or(&self.name)
    }

    /// All parameter assignments in the grid that satisfy the constraints, in
    /// lexicographic order of the declared ranges.
    pub fn grid(&self) -> Vec<BTreeMap<String, i64>> {
        let mut out = Vec::new();
        let mut current = BTreeMap::new();
        self.fill(0, &mut current, &mut out);
        out
    }

    fn fill(&self, i: usize, cur: &mut BTreeMap<String, i64>, out: &mut Vec<BTreeMap<String, i64>>) {
        if i == self.params.len() {
            if self.constraints.iter().all(|c| c.holds(cur)) {
                out.push(cur.clone());
            }
            return;
        }
        let p = &self.params[i];
        for v in p.lo..=p.hi {
            cur.insert(p.name.clone(), v);
            self.fill(i + 1, cur, out);
        }
        cur.remove(&p.name);
    }
}

impl fmt::Display for CheckSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "check \"{}\" {{", self.name)?;
        if !self.params.is_empty() {
            let ps: Vec<String> =
                self.params.iter().map(|p| format!("{} in {}..{}", p.name, p.lo, p.hi)).collect();
            writeln!(f, "  params {}", ps.join(", "))?;
        }
        if !self.constraints.is_empty() {
            let cs: Vec<String> = self.constraints.iter().map(ToString::to_string).collect();
            writeln!(f, "  require {}", cs.join(", "))?;
        }
        writeln!(f, "  series = {};", self.series)?;
        if let Some(s) = &self.subst {
            writeln!(f, "  subst = {s};")?;
        }
        if let Some(c) = &self.coeff {
            writeln!(f, "  coeff = {c};")?;
        }
        writeln!(f, "  expect = {};", self.expect)?;
        if let Some(o) = self.order {
            writeln!(f, "  order = {o};")?;
        }
        writeln!(f, "}}")
    }
}

/// Prints a whole manifest.
pub fn print_manifest(checks: &[CheckSpec]) -> String {
    checks.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n")
}
