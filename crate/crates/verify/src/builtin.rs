//! Built-in suites: identity checks computed directly from the catalog.

use std::collections::BTreeMap;
use std::sync::Arc;

use lehn_core::catalog::{
    conjecture1_series, conjecture2_series, curve_segre_rhs, higher_rank_curve_check, lehn_rhs,
    lehn_w_of_z, lehn_z_of_w, residue_chain_check, t_vs_w_check, verlinde_series, BlowupModel,
    CatalogError, CurveInvariants, SurfaceInvariants, UniversalSeries,
};
use lehn_core::chern::{ch_tautological, ch_to_total_chern, segre_class, segre_integral_p1, tautological_rank_r, CohomClass};
use lehn_core::dsl::{Bindings, CheckResult};
use lehn_core::rational::{binom, int, Rational};
use lehn_core::series::{Series, Var};

pub const BUILTIN_SUITES: [&str; 6] = ["lehn", "curve", "higher-rank", "conjectures", "verlinde", "chern"];

/// Order at which the t-forms are compared with the w-forms, whatever the run
/// order; comparing through `t^15` exercises the square roots deeply.
pub const T_VS_W_ORDER: usize = 15;

type Job = Box<dyn Fn() -> Vec<CheckResult> + Send + Sync>;

/// One unit of work: a parameter point of a built-in check. A single unit may
/// report several named results computed from one shared construction.
pub struct Work {
    pub name: String,
    pub params: Bindings,
    /// Highest coefficient index the unit reads (checked against the order).
    pub needs: usize,
    job: Job,
}

impl Work {
    fn new(name: &str, params: &[(&str, i64)], needs: usize, job: impl Fn() -> Vec<CheckResult> + Send + Sync + 'static) -> Work {
        Work {
            name: name.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            needs,
            job: Box::new(job),
        }
    }

    pub fn run(&self) -> Vec<CheckResult> {
        (self.job)()
    }
}

fn bindings(params: &[(&str, i64)]) -> Bindings {
    params.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn coefficient(name: &str, params: &Bindings, r: Result<(Rational, Rational), CatalogError>, at: usize) -> CheckResult {
    match r {
        Ok((c, e)) => CheckResult::compared(name, params, c, e, at),
        Err(e) => CheckResult::error(name, params, e.to_string()),
    }
}

fn series(name: &str, params: &Bindings, r: Result<(Series, Series), CatalogError>) -> CheckResult {
    match r {
        Ok((a, b)) => CheckResult::series(name, params, &a, &b),
        Err(e) => CheckResult::error(name, params, e.to_string()),
    }
}

/// The work list of a built-in suite, or `None` for an unknown name.
pub fn suite(name: &str, order: usize) -> Option<Vec<Work>> {
    Some(match name {
        "lehn" => lehn(order),
        "curve" => curve(order),
        "higher-rank" => higher_rank(order),
        "conjectures" => conjectures(order),
        "verlinde" => verlinde(order),
        "chern" => chern(),
        _ => return None,
    })
}

fn lehn(order: usize) -> Vec<Work> {
    let mut out = Vec::new();
    // First terms of w(z), as printed with the change of variables.
    for (n, v) in [(1usize, 1i64), (2, -9), (3, 94)] {
        let p = [("n", n as i64)];
        out.push(Work::new("lehn/reversion", &p, n, move || {
            let b = bindings(&p);
            let w = lehn_w_of_z(order);
            vec![CheckResult::compared("lehn/reversion", &b, w.coeffs()[n].clone(), int(v), n)]
        }));
    }
    out.push(Work::new("lehn/reversion-roundtrip", &[], 0, move || {
        let b = Bindings::new();
        let r = lehn_z_of_w(order.max(1))
            .compose(&lehn_w_of_z(order.max(1)))
            .map(|s| (s.truncate(order), Series::identity(Var::Z, order.max(1)).truncate(order)))
            .map_err(CatalogError::from);
        vec![series("lehn/reversion-roundtrip", &b, r)]
    }));

    let universal = match UniversalSeries::new(order) {
        Ok(u) => Arc::new(u),
        Err(e) => {
            let msg = e.to_string();
            out.push(Work::new("lehn/universal", &[], 0, move || {
                vec![CheckResult::error("lehn/universal", &Bindings::new(), msg.clone())]
            }));
            return out;
        }
    };

    for h2 in -2..=6 {
        for chi in -1..=3 {
            for hk in -2..=4 {
                for k2 in -3..=2 {
                    if (h2 - hk) % 2 != 0 {
                        continue;
                    }
                    let p = [("H2", h2), ("HK", hk), ("K2", k2), ("chi", chi)];
                    let u = Arc::clone(&universal);
                    out.push(Work::new("lehn/splitting", &p, 0, move || {
                        let si = SurfaceInvariants::new(h2, chi, hk, k2);
                        let r = u.product(&si).and_then(|prod| Ok((prod, lehn_rhs(&si, order)?)));
                        vec![series("lehn/splitting", &bindings(&p), r)]
                    }));
                }
            }
        }
    }

    let models = [
        (BlowupModel::K3Blowup, "lehn/blowup-k3", 8usize, true),
        (BlowupModel::Enriques2, "lehn/blowup-enriques", 6, false),
        (BlowupModel::Abelian3, "lehn/blowup-abelian", 6, false),
    ];
    for (model, name, n_max, from_vanishing) in models {
        for n in 1..=n_max {
            let ni = n as i64;
            let k_lo = if from_vanishing { ni - 1 } else { 0 };
            for k in k_lo..=3 * ni {
                let p = [("k", k), ("n", ni)];
                let u = Arc::clone(&universal);
                out.push(Work::new(name, &p, n, move || {
                    vec![coefficient(name, &bindings(&p), u.blowup(n, k, model), n)]
                }));
            }
        }
    }

    for n in 0..=10usize {
        for h2 in (0..=20).step_by(2) {
            let p = [("H2", h2), ("n", n as i64)];
            let u = Arc::clone(&universal);
            out.push(Work::new("lehn/k3-closed-form", &p, n, move || {
                vec![coefficient("lehn/k3-closed-form", &bindings(&p), u.k3(n, h2), n)]
            }));
        }
    }

    for n in 1..=6usize {
        for k in 0..=3 * n as i64 {
            let p = [("k", k), ("n", n as i64)];
            out.push(Work::new("lehn/residue-chain", &p, 0, move || {
                let b = bindings(&p);
                let r = match residue_chain_check(n, k) {
                    Ok(c) => {
                        let routes = [&c.direct, &c.w_transport, &c.w_form, &c.u_form];
                        let mut r = CheckResult::compared("lehn/residue-chain", &b, c.direct.clone(), c.binomial.clone(), n);
                        if let Some(bad) = routes.iter().find(|v| **v != &c.binomial) {
                            r = CheckResult::compared("lehn/residue-chain", &b, (*bad).clone(), c.binomial.clone(), n);
                        }
                        r
                    }
                    Err(e) => CheckResult::error("lehn/residue-chain", &b, e.to_string()),
                };
                vec![r]
            }));
        }
    }

    out.push(Work::new("lehn/t-vs-w", &[], 0, move || {
        let b = Bindings::new();
        match t_vs_w_check(order.max(T_VS_W_ORDER)) {
            Ok(cmps) => cmps
                .iter()
                .map(|c| CheckResult::series(&format!("lehn/t-vs-w/{}", c.label), &b, &c.lhs, &c.rhs))
                .collect(),
            Err(e) => vec![CheckResult::error("lehn/t-vs-w", &b, e.to_string())],
        }
    }));
    out
}

fn curve(order: usize) -> Vec<Work> {
    let mut out = Vec::new();
    for d in -5..=12 {
        let p = [("d", d)];
        out.push(Work::new("curve/rank1-vs-p1", &p, 0, move || {
            let b = bindings(&p);
            let r = curve_segre_rhs(&CurveInvariants::line_bundle(d, 0), order).map(|s| {
                let mut c = vec![int(1)];
                c.extend((1..=order).map(|n| segre_integral_p1(d, 1, n)));
                (s, Series::from_polynomial(Var::Z, c, order))
            });
            vec![series("curve/rank1-vs-p1", &b, r)]
        }));
    }
    out
}

fn higher_rank(order: usize) -> Vec<Work> {
    let mut out = Vec::new();
    for r in -3..=5 {
        for d in -5..=10 {
            let p = [("d", d), ("r", r)];
            out.push(Work::new("higher-rank/curve", &p, 0, move || {
                let b = bindings(&p);
                let report = match higher_rank_curve_check(r, d, order) {
                    Ok(rep) => rep,
                    Err(e) => return vec![CheckResult::error("higher-rank/curve", &b, e.to_string())],
                };
                let mut layers = vec![&report.lemma3, &report.theorem2, &report.sign_transport];
                layers.extend(report.p1_pipeline.as_ref());
                layers
                    .into_iter()
                    .map(|c| CheckResult::series(&format!("higher-rank/{}", c.label), &b, &c.lhs, &c.rhs))
                    .collect()
            }));
        }
    }
    for r in 1..=4 {
        for d in -5..=12 {
            for n in 1..=8usize {
                let p = [("d", d), ("n", n as i64), ("r", r)];
                out.push(Work::new("higher-rank/p1-binomial", &p, 0, move || {
                    let sign = if n % 2 == 0 { int(1) } else { int(-1) };
                    let expected = sign * binom(d - r * n as i64 + r, n as u64);
                    vec![CheckResult::compared("higher-rank/p1-binomial", &bindings(&p), segre_integral_p1(d, r, n), expected, n)]
                }));
            }
        }
    }
    out
}

fn conjectures(order: usize) -> Vec<Work> {
    let mut out = Vec::new();
    out.push(Work::new("conjectures/relations", &[], 0, move || {
        let b = Bindings::new();
        let rel = match conjecture2_series(order).and_then(|c| c.relations()) {
            Ok(rel) => rel,
            Err(e) => return vec![CheckResult::error("conjectures/relations", &b, e.to_string())],
        };
        [&rel.a_product, &rel.b_equal, &rel.b_squared_back, &rel.w_rank_minus2, &rel.w_rank_plus2]
            .into_iter()
            .map(|c| CheckResult::series(&format!("conjectures/{}", c.label), &b, &c.lhs, &c.rhs))
            .collect()
    }));
    out.push(Work::new("conjectures/rank1", &[], 0, move || {
        let b = Bindings::new();
        let c = match conjecture1_series(1, order) {
            Ok(c) => c,
            Err(e) => return vec![CheckResult::error("conjectures/rank1", &b, e.to_string())],
        };
        let one = Series::one(Var::Z, order);
        let one_plus_z = Series::linear(Var::Z, 1, 1, order.max(1)).truncate(order);
        let expected = [one_plus_z, one.clone(), one];
        c.z_forms
            .iter()
            .zip(expected)
            .map(|(fam, e)| CheckResult::series(&format!("conjectures/rank1-{}", fam.name), &b, &fam.series, &e))
            .collect()
    }));
    out
}

fn verlinde(order: usize) -> Vec<Work> {
    let mut out = Vec::new();
    for r in 1..=4 {
        let v = verlinde_series(r, order).map(Arc::new);
        for n in 0..=8usize {
            for chi in 0..=10 {
                let p = [("chi", chi), ("n", n as i64), ("r", r)];
                let v = v.clone();
                out.push(Work::new("verlinde/k3", &p, n, move || {
                    let b = bindings(&p);
                    let expected = binom(chi - (r * r - 1) * (n as i64 - 1), n as u64);
                    let r = v.as_ref().map_err(Clone::clone).and_then(|v| Ok((v.k3_coefficient(n, chi)?, expected)));
                    vec![coefficient("verlinde/k3", &b, r, n)]
                }));
            }
        }
    }
    out
}

fn chern() -> Vec<Work> {
    let mut out = Vec::new();
    for d in -5..=12 {
        for r in 1..=4 {
            for n in 1..=8usize {
                let p = [("d", d), ("n", n as i64), ("r", r)];
                out.push(Work::new("chern/segre-inverse", &p, 0, move || {
                    let b = bindings(&p);
                    let c = ch_to_total_chern(&tautological_rank_r(d, r, n));
                    let r = match segre_class(&c) {
                        Ok(s) => {
                            let prod = &s * &c;
                            let at = (0..=n).find(|&i| prod.degree(i) != CohomClass::one(n).degree(i)).unwrap_or(n);
                            CheckResult::compared("chern/segre-inverse", &b, prod.degree(at), CohomClass::one(n).degree(at), at)
                        }
                        Err(e) => CheckResult::error("chern/segre-inverse", &b, e.to_string()),
                    };
                    vec![r]
                }));
            }
        }
    }
    for d in -5..=12 {
        for e in -5..=12 {
            for n in 1..=6usize {
                let p = [("d", d), ("e", e), ("n", n as i64)];
                out.push(Work::new("chern/whitney", &p, 0, move || {
                    let b = bindings(&p);
                    let (x, y) = (ch_tautological(d, n), ch_tautological(e, n));
                    let lhs = ch_to_total_chern(&x.sum(&y));
                    let rhs = &ch_to_total_chern(&x) * &ch_to_total_chern(&y);
                    let at = (0..=n).find(|&i| lhs.degree(i) != rhs.degree(i)).unwrap_or(n);
                    vec![CheckResult::compared("chern/whitney", &b, lhs.degree(at), rhs.degree(at), at)]
                }));
            }
        }
    }
    out
}

/// Name and parameters of every unit, for listing without running.
pub fn describe(work: &[Work]) -> Vec<(String, BTreeMap<String, i64>)> {
    work.iter().map(|w| (w.name.clone(), w.params.clone())).collect()
}
