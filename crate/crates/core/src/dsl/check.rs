//! Running a [`CheckSpec`] over its parameter grid.

use std::collections::BTreeMap;

use num_traits::{Signed, ToPrimitive};
use thiserror::Error;

use super::ast::{CheckSpec, Expr};
use super::eval::{evaluate, evaluate_scalar, Bindings};
use super::EvalError;
use crate::rational::{to_pq, Rational};
use crate::series::{Series, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        }
    }
}

/// Outcome of one check at one parameter assignment.
///
/// In coefficient mode `computed` and `expected` are the compared
/// coefficients. In whole-series mode they are the coefficients at the first
/// mismatch, or at the comparison order when the series agree.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub params: BTreeMap<String, i64>,
    pub status: Status,
    pub computed: Option<Rational>,
    pub expected: Option<Rational>,
    pub first_mismatch_order: Option<usize>,
    pub message: Option<String>,
}

impl CheckResult {
    pub fn error(name: &str, params: &Bindings, message: String) -> CheckResult {
        CheckResult {
            name: name.to_string(),
            params: params.clone(),
            status: Status::Error,
            computed: None,
            expected: None,
            first_mismatch_order: None,
            message: Some(message),
        }
    }

    /// Compares two exact values; `at` is the coefficient they belong to.
    pub fn compared(name: &str, params: &Bindings, computed: Rational, expected: Rational, at: usize) -> CheckResult {
        let pass = computed == expected;
        CheckResult {
            name: name.to_string(),
            params: params.clone(),
            status: if pass { Status::Pass } else { Status::Fail },
            message: (!pass).then(|| format!("[{at}]: computed {}, expected {}", to_pq(&computed), to_pq(&expected))),
            computed: Some(computed),
            expected: Some(expected),
            first_mismatch_order: (!pass).then_some(at),
        }
    }

    /// Compares two series at their common order.
    pub fn series(name: &str, params: &Bindings, computed: &Series, expected: &Series) -> CheckResult {
        match computed.compare(expected) {
            Ok(cmp) => {
                let at = cmp.first_mismatch.unwrap_or(cmp.order);
                let c = computed.coeffs()[at].clone();
                let e = expected.coeffs()[at].clone();
                CheckResult::compared(name, params, c, e, at)
            }
            Err(e) => CheckResult::error(name, params, e.to_string()),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RunError {
    #[error("check '{check}': order too small: coefficient {needed} requested at order {order}")]
    OrderTooSmall { check: String, needed: usize, order: usize },
}

/// A check bound to a truncation order, with the reverted substitution cached
/// when it does not depend on the parameters.
pub struct PreparedCheck<'a> {
    pub spec: &'a CheckSpec,
    pub order: usize,
    inverse: Option<Series>,
}

/// Order used when neither the run nor the check specifies one.
pub const DEFAULT_CHECK_ORDER: usize = 12;

impl<'a> PreparedCheck<'a> {
    /// `order_override` takes precedence over the check's own `order`.
    pub fn new(spec: &'a CheckSpec, order_override: Option<usize>) -> PreparedCheck<'a> {
        let order = order_override.or(spec.order).unwrap_or(DEFAULT_CHECK_ORDER);
        let inverse = match &spec.subst {
            Some(s) if !s.has_params() => inverse_substitution(s, spec.inner_var(), &Bindings::new(), order).ok(),
            _ => None,
        };
        PreparedCheck { spec, order, inverse }
    }

    /// Grid points matching `filter`. A filter key the check does not declare
    /// excludes the check entirely. Fails if a targeted coefficient lies
    /// beyond the truncation order.
    pub fn points(&self, filter: &BTreeMap<String, i64>) -> Result<Vec<Bindings>, RunError> {
        if filter.keys().any(|k| !self.spec.params.iter().any(|p| &p.name == k)) {
            return Ok(Vec::new());
        }
        let points: Vec<Bindings> = self
            .spec
            .grid()
            .into_iter()
            .filter(|b| filter.iter().all(|(k, v)| b.get(k) == Some(v)))
            .collect();
        if let Some(c) = &self.spec.coeff {
            for b in &points {
                if let Ok(n) = coefficient_index(c, b) {
                    if n > self.order {
                        return Err(RunError::OrderTooSmall {
                            check: self.spec.name.clone(),
                            needed: n,
                            order: self.order,
                        });
                    }
                }
            }
        }
        Ok(points)
    }

    pub fn run(&self, bindings: &Bindings) -> CheckResult {
        run_point(self.spec, bindings, self.order, self.inverse.as_ref())
    }
}

fn coefficient_index(e: &Expr, b: &Bindings) -> Result<usize, String> {
    let v = evaluate_scalar(e, b).map_err(|e| format!("coeff: {e}"))?;
    if !v.is_integer() || v.is_negative() {
        return Err(format!("coeff: {} is not a natural number", to_pq(&v)));
    }
    v.to_integer().to_usize().ok_or_else(|| "coeff: index out of range".to_string())
}

/// The inner variable as a series in `z`.
fn inverse_substitution(subst: &Expr, var: Var, b: &Bindings, order: usize) -> Result<Series, EvalError> {
    let s = evaluate(subst, b, var, order)?;
    s.revert(Var::Z).map_err(|e| EvalError { path: "subst".into(), kind: super::EvalErrorKind::Series(e) })
}

/// Both sides of a check after substitution, as series in the target
/// variable (`z` when there is a substitution). `expect` is `None` in
/// coefficient mode, where the expected value is a scalar.
#[derive(Clone, Debug)]
pub struct Targets {
    pub series: Series,
    pub expect: Option<Series>,
}

/// Evaluates the series side and, in whole-series mode, the expected side.
/// `inverse` may supply the reverted substitution.
pub fn targets(spec: &CheckSpec, b: &Bindings, order: usize, inverse: Option<&Series>) -> Result<Targets, String> {
    let var = spec.inner_var();
    let inverse = match (&spec.subst, inverse) {
        (None, _) => None,
        (Some(_), Some(inv)) => Some(inv.clone()),
        (Some(s), None) => Some(inverse_substitution(s, var, b, order).map_err(|e| format!("subst: {e}"))?),
    };
    let to_target = |s: Series| -> Result<Series, String> {
        match &inverse {
            Some(inv) => s.compose(inv).map_err(|e| e.to_string()),
            None => Ok(s),
        }
    };
    let series = evaluate(&spec.series, b, var, order)
        .map_err(|e| e.to_string())
        .and_then(to_target)
        .map_err(|e| format!("series: {e}"))?;
    if spec.coeff.is_some() {
        return Ok(Targets { series, expect: None });
    }
    // `expect` in the inner variable goes through the same substitution;
    // otherwise it is read in the target variable directly.
    let expect_var = spec.expect.variables().into_iter().next();
    let expect = if expect_var == Some(var) && inverse.is_some() {
        evaluate(&spec.expect, b, var, order).map_err(|e| e.to_string()).and_then(to_target)
    } else {
        evaluate(&spec.expect, b, series.var(), order).map_err(|e| e.to_string())
    }
    .map_err(|e| format!("expect: {e}"))?;
    Ok(Targets { series, expect: Some(expect) })
}

/// Evaluates one grid point. `inverse` may supply the reverted substitution.
pub fn run_point(spec: &CheckSpec, b: &Bindings, order: usize, inverse: Option<&Series>) -> CheckResult {
    let name = spec.name.as_str();
    let fail = |m: String| CheckResult::error(name, b, m);
    let t = match targets(spec, b, order, inverse) {
        Ok(t) => t,
        Err(e) => return fail(e),
    };
    match (&spec.coeff, t.expect) {
        (Some(c), _) => {
            let n = match coefficient_index(c, b) {
                Ok(n) => n,
                Err(e) => return fail(e),
            };
            let computed = match t.series.coefficient(n) {
                Ok(v) => v.clone(),
                Err(e) => return fail(e.to_string()),
            };
            match evaluate_scalar(&spec.expect, b) {
                Ok(expected) => CheckResult::compared(name, b, computed, expected, n),
                Err(e) => fail(format!("expect: {e}")),
            }
        }
        (None, Some(expected)) => CheckResult::series(name, b, &t.series, &expected),
        (None, None) => unreachable!("whole-series mode always evaluates expect"),
    }
}

/// Runs a check sequentially over its (filtered) grid.
pub fn run_check(
    spec: &CheckSpec,
    order_override: Option<usize>,
    filter: &BTreeMap<String, i64>,
) -> Result<Vec<CheckResult>, RunError> {
    let prepared = PreparedCheck::new(spec, order_override);
    Ok(prepared.points(filter)?.iter().map(|b| prepared.run(b)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::residue_chain_check;
    use crate::dsl::parse_manifest;
    use crate::rational::int;

    const BLOWUP: &str = r#"
        check "blowup/k3" {
          params n in 1..3, k in 0..9
          require k <= 3n
          series = (1-w)^(k+2) * (1-2w)^(-k+6n-1) / (1-6w+6w^2)^(3n-1);
          subst = w(1-w)(1-2w)^4/(1-6w+6w^2)^3;
          coeff = n;
          expect = binom(k-n+1, n);
        }
    "#;

    #[test]
    fn blowup_point_from_the_evaluator_examples() {
        let spec = &parse_manifest(BLOWUP).unwrap()[0];
        let filter: BTreeMap<_, _> = [("n".to_string(), 1), ("k".to_string(), 0)].into();
        let r = run_check(spec, Some(3), &filter).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].computed, Some(int(0)));
        assert_eq!(r[0].status, Status::Pass);
        assert_eq!(residue_chain_check(1, 0).unwrap().direct, int(0));
    }

    #[test]
    fn vanishing_range_and_nonvanishing_range() {
        let spec = &parse_manifest(BLOWUP).unwrap()[0];
        let all = run_check(spec, None, &BTreeMap::new()).unwrap();
        assert_eq!(all.len(), 4 + 7 + 10);
        assert!(all.iter().all(|r| r.status == Status::Pass), "{all:?}");
    }

    #[test]
    fn order_too_small() {
        let spec = &parse_manifest(BLOWUP).unwrap()[0];
        let err = run_check(spec, Some(0), &BTreeMap::new()).unwrap_err();
        assert!(err.to_string().contains("order too small"));
    }

    #[test]
    fn failing_point_reports_both_values() {
        let src = r#"check "bad" { series = (1+z)^2; coeff = 1; expect = 3; }"#;
        let r = &run_check(&parse_manifest(src).unwrap()[0], None, &BTreeMap::new()).unwrap()[0];
        assert_eq!(r.status, Status::Fail);
        assert_eq!((r.computed.clone(), r.expected.clone()), (Some(int(2)), Some(int(3))));
        assert_eq!(r.first_mismatch_order, Some(1));
    }

    #[test]
    fn whole_series_mode_with_substitution() {
        let src = r#"
            check "w-of-z" {
              series = w;
              subst = w(1-w)(1-2w)^4/(1-6w+6w^2)^3;
              expect = z - 9z^2 + 94z^3 - 1051z^4;
              order = 4;
            }
            check "identity-through-subst" {
              series = (1+t)^2;
              subst = t(1+t)^2/2;
              expect = 1 + 2t + t^2;
            }
        "#;
        for spec in parse_manifest(src).unwrap() {
            let r = &run_check(&spec, None, &BTreeMap::new()).unwrap()[0];
            assert_eq!(r.status, Status::Pass, "{r:?}");
        }
        let spec = &parse_manifest(src).unwrap()[0];
        let r = &run_check(spec, Some(5), &BTreeMap::new()).unwrap()[0];
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.first_mismatch_order, Some(5));
    }

    #[test]
    fn evaluation_errors_are_per_point() {
        let src = r#"check "e" { series = 1/(w); subst = w; coeff = 0; expect = 0; }"#;
        let r = &run_check(&parse_manifest(src).unwrap()[0], None, &BTreeMap::new()).unwrap()[0];
        assert_eq!(r.status, Status::Error);
        assert!(r.message.as_deref().unwrap().contains("zero constant term"));
    }
}
