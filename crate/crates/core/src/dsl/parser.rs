//! Recursive-descent parser for `.lehn` manifests.

use std::collections::BTreeSet;

use num_traits::ToPrimitive;

use super::ast::{Affine, CheckSpec, Constraint, Exponent, Expr, ParamRange, Relation};
use super::lexer::{tokenize, Keyword, Pos, Tok, Token};
use super::ParseError;
use crate::rational::Rational;
use crate::series::Var;

pub fn parse_manifest(text: &str) -> Result<Vec<CheckSpec>, ParseError> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, i: 0, params: BTreeSet::new() };
    let mut checks = Vec::new();
    loop {
        if p.peek() == &Tok::Eof {
            break;
        }
        checks.push(p.check()?);
    }
    if checks.is_empty() {
        return Err(ParseError::new(p.pos(), "expected at least one 'check'"));
    }
    let mut names = BTreeSet::new();
    for c in &checks {
        if !names.insert(c.name.clone()) {
            return Err(ParseError::new(
                Pos { line: c.line, col: 1 },
                format!("duplicate check name \"{}\"", c.name),
            ));
        }
    }
    Ok(checks)
}

/// Parses a standalone expression over the given parameter names.
pub fn parse_expr(text: &str, params: &[&str]) -> Result<Expr, ParseError> {
    let tokens = tokenize(text)?;
    let mut p = Parser {
        tokens,
        i: 0,
        params: params.iter().map(|s| s.to_string()).collect(),
    };
    let e = p.expr()?;
    p.expect(Tok::Eof)?;
    Ok(e)
}

struct Parser {
    tokens: Vec<Token>,
    i: usize,
    params: BTreeSet<String>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.i].tok
    }

    fn pos(&self) -> Pos {
        self.tokens[self.i].pos
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.i].clone();
        if t.tok != Tok::Eof {
            self.i += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.advance();
            true
        } else {
            false
        }
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        ParseError::new(self.pos(), format!("expected {expected}, found {}", self.peek().describe()))
    }

    fn expect(&mut self, tok: Tok) -> Result<Token, ParseError> {
        if self.peek() == &tok {
            Ok(self.advance())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn check(&mut self) -> Result<CheckSpec, ParseError> {
        let start = self.pos();
        self.expect(Tok::Kw(Keyword::Check))?;
        let name = match self.advance() {
            Token { tok: Tok::Str(s), .. } if !s.is_empty() => s,
            t => {
                return Err(ParseError::new(t.pos, format!("expected check name string, found {}", t.tok.describe())))
            }
        };
        self.expect(Tok::LBrace)?;
        self.params.clear();

        let mut params = Vec::new();
        if self.eat(&Tok::Kw(Keyword::Params)) {
            loop {
                params.push(self.param()?);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.eat(&Tok::Semi);
        }
        let mut constraints = Vec::new();
        if self.eat(&Tok::Kw(Keyword::Require)) {
            loop {
                constraints.push(self.constraint()?);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.eat(&Tok::Semi);
        }

        let mut series = None;
        let mut subst = None;
        let mut coeff = None;
        let mut expect = None;
        let mut order = None;
        while self.peek() != &Tok::RBrace {
            let at = self.pos();
            let kw = match self.peek() {
                Tok::Kw(k @ (Keyword::Series | Keyword::Subst | Keyword::Expect | Keyword::Coeff | Keyword::Order)) => *k,
                _ => return Err(self.unexpected("a clause (series, subst, expect, coeff, order) or '}'")),
            };
            self.advance();
            self.expect(Tok::Assign)?;
            let dup = match kw {
                Keyword::Order => {
                    let t = self.advance();
                    let Tok::Number(n) = t.tok else {
                        return Err(ParseError::new(t.pos, format!("expected integer order, found {}", t.tok.describe())));
                    };
                    let n = n.to_usize().ok_or_else(|| ParseError::new(t.pos, "order out of range"))?;
                    order.replace(n).is_some()
                }
                _ => {
                    let e_pos = self.pos();
                    let e = self.expr()?;
                    match kw {
                        Keyword::Series => {
                            single_var(&e, e_pos, "series")?;
                            series.replace(e).is_some()
                        }
                        Keyword::Subst => {
                            let v = single_var(&e, e_pos, "subst")?;
                            if v == Some(Var::Z) {
                                return Err(ParseError::new(e_pos, "subst must express z in another variable"));
                            }
                            subst.replace(e).is_some()
                        }
                        Keyword::Coeff => {
                            if Affine::from_expr(&e).is_none() {
                                return Err(ParseError::new(e_pos, "coefficient index must be affine in parameters"));
                            }
                            coeff.replace(e).is_some()
                        }
                        _ => {
                            single_var(&e, e_pos, "expect")?;
                            expect.replace(e).is_some()
                        }
                    }
                }
            };
            if dup {
                return Err(ParseError::new(at, format!("duplicate '{}' clause", kw.as_str())));
            }
            self.expect(Tok::Semi)?;
        }
        let close = self.pos();
        self.expect(Tok::RBrace)?;

        let series = series.ok_or_else(|| ParseError::new(close, "check is missing a 'series' clause"))?;
        let expect = expect.ok_or_else(|| ParseError::new(close, "check is missing an 'expect' clause"))?;
        let spec = CheckSpec {
            name,
            params,
            constraints,
            series,
            subst,
            coeff,
            expect,
            order,
            line: start.line,
        };
        validate(&spec, close)?;
        Ok(spec)
    }

    fn param(&mut self) -> Result<ParamRange, ParseError> {
        let t = self.advance();
        let name = match t.tok {
            Tok::Ident(s) if Var::from_name(&s).is_none() => s,
            Tok::Ident(s) => {
                return Err(ParseError::new(t.pos, format!("'{s}' is a series variable and cannot be a parameter")))
            }
            other => return Err(ParseError::new(t.pos, format!("expected parameter name, found {}", other.describe()))),
        };
        if !self.params.insert(name.clone()) {
            return Err(ParseError::new(t.pos, format!("parameter '{name}' declared twice")));
        }
        self.expect(Tok::Kw(Keyword::In))?;
        let lo = self.int_literal()?;
        self.expect(Tok::DotDot)?;
        let hi_pos = self.pos();
        let hi = self.int_literal()?;
        if hi < lo {
            return Err(ParseError::new(hi_pos, format!("empty range {lo}..{hi}")));
        }
        Ok(ParamRange { name, lo, hi })
    }

    fn int_literal(&mut self) -> Result<i64, ParseError> {
        let neg = self.eat(&Tok::Minus);
        let t = self.advance();
        let Tok::Number(n) = t.tok else {
            return Err(ParseError::new(t.pos, format!("expected integer, found {}", t.tok.describe())));
        };
        let n = if neg { -n } else { n };
        n.to_i64().ok_or_else(|| ParseError::new(t.pos, "integer out of range"))
    }

    fn constraint(&mut self) -> Result<Constraint, ParseError> {
        let lhs = self.affine_expr()?;
        let relation = match self.peek() {
            Tok::EqEq => Relation::Eq,
            Tok::Le => Relation::Le,
            Tok::Ge => Relation::Ge,
            Tok::Lt => Relation::Lt,
            Tok::Gt => Relation::Gt,
            Tok::Kw(Keyword::Even) => Relation::Even,
            _ => return Err(self.unexpected("'==', '<=', '>=', '<', '>' or 'even'")),
        };
        self.advance();
        let rhs = if relation == Relation::Even { None } else { Some(self.affine_expr()?) };
        Ok(Constraint { lhs, relation, rhs })
    }

    fn affine_expr(&mut self) -> Result<Expr, ParseError> {
        let at = self.pos();
        let e = self.expr()?;
        if Affine::from_expr(&e).is_none() {
            return Err(ParseError::new(at, "expected an affine expression in parameters"));
        }
        Ok(e)
    }

    // expr := term (("+"|"-") term)*
    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(&Tok::Minus) {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    // term := unary (("*"|"/")? unary)*, juxtaposition meaning '*'
    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(&Tok::Star) {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(&Tok::Slash) {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else if matches!(
                self.peek(),
                Tok::Number(_) | Tok::Ident(_) | Tok::LParen | Tok::Kw(Keyword::Sqrt | Keyword::Binom)
            ) {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat(&Tok::Minus) {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    // power := base ("^" exponent)?
    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.base()?;
        if !self.eat(&Tok::Caret) {
            return Ok(base);
        }
        let at = self.pos();
        let exponent = match self.peek().clone() {
            // `x^2/2` divides by two; fractional exponents need parentheses.
            Tok::Number(p) => {
                self.advance();
                Exponent::Literal(Rational::from_integer(p))
            }
            Tok::LParen => {
                self.advance();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                if Affine::from_expr(&e).is_none() {
                    return Err(ParseError::new(at, "non-affine exponent: expected a rational or an affine combination of parameters"));
                }
                match Affine::from_expr(&e).filter(|a| a.terms.is_empty()) {
                    Some(a) => Exponent::Literal(a.constant),
                    None => Exponent::Affine(Box::new(e)),
                }
            }
            Tok::Ident(_) => Exponent::Affine(Box::new(self.base()?)),
            _ => return Err(self.unexpected("exponent")),
        };
        if let Exponent::Affine(e) = &exponent {
            if !e.variables().is_empty() {
                return Err(ParseError::new(at, "non-affine exponent: series variables cannot appear in exponents"));
            }
        }
        Ok(Expr::Pow(Box::new(base), exponent))
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        let t = self.advance();
        match t.tok {
            Tok::Number(n) => Ok(Expr::Num(Rational::from_integer(n))),
            Tok::Ident(s) => {
                if let Some(v) = Var::from_name(&s) {
                    Ok(Expr::Var(v))
                } else if self.params.contains(&s) {
                    Ok(Expr::Param(s))
                } else {
                    Err(ParseError::new(t.pos, format!("undeclared identifier '{s}'")))
                }
            }
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Kw(Keyword::Sqrt) => {
                self.expect(Tok::LParen)?;
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(Expr::Sqrt(Box::new(e)))
            }
            Tok::Kw(Keyword::Binom) => {
                self.expect(Tok::LParen)?;
                let top = self.affine_expr()?;
                self.expect(Tok::Comma)?;
                let bottom = self.affine_expr()?;
                self.expect(Tok::RParen)?;
                Ok(Expr::Binom(Box::new(top), Box::new(bottom)))
            }
            other => Err(ParseError::new(t.pos, format!("expected expression, found {}", other.describe()))),
        }
    }
}

fn single_var(e: &Expr, at: Pos, clause: &str) -> Result<Option<Var>, ParseError> {
    let vars = e.variables();
    if vars.len() > 1 {
        let names: Vec<&str> = vars.iter().map(|v| v.name()).collect();
        return Err(ParseError::new(at, format!("{clause} mixes series variables {}", names.join(", "))));
    }
    Ok(vars.into_iter().next())
}

fn validate(spec: &CheckSpec, at: Pos) -> Result<(), ParseError> {
    let series_var = spec.series.variables().into_iter().next();
    let subst_var = spec.subst.as_ref().and_then(|s| s.variables().into_iter().next());
    if let (Some(a), Some(b)) = (series_var, subst_var) {
        if a != b {
            return Err(ParseError::new(at, format!("series is written in {a} but subst in {b}")));
        }
    }
    if let Some(v) = spec.expect.variables().into_iter().next() {
        if spec.coeff.is_some() {
            return Err(ParseError::new(at, "expect must be a number when coeff is given"));
        }
        if v != Var::Z && v != spec.inner_var() {
            return Err(ParseError::new(at, format!("expect is written in {v}, which is neither z nor the series variable")));
        }
    }
    Ok(())
}
