//! The acceptance gate: every criterion at exact (zero) tolerance, one
//! PASS/FAIL line each. Runs without the libtest harness so the lines are
//! always printed.

use std::collections::{BTreeMap, BTreeSet};
use std::process::{Command, ExitCode};
use std::time::Instant;

use lehn_core::catalog::{
    conjecture1_series, conjecture2_series, curve_segre_rhs, lehn_rhs, lehn_w_of_z, lehn_z_of_w,
    lemma3_series, residue_chain_check, t_vs_w_check, theorem2_series, verlinde_series,
    BlowupModel, CurveInvariants, SurfaceInvariants, UniversalSeries,
};
use lehn_core::chern::segre_integral_p1;
use lehn_core::dsl::{parse_manifest, print_manifest, targets, Bindings, CheckSpec, Expr, Exponent};
use lehn_core::rational::{binom, int, pow_i64, Rational};
use lehn_core::series::{Series, Var};
use lehn_verify::SHIPPED_MANIFEST;

include!("../../core/tests/common/invalid_corpus.rs");

type Outcome = Result<String, String>;

const ORDER: usize = 12;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn z_poly(coeffs: Vec<Rational>, order: usize) -> Series {
    Series::from_polynomial(Var::Z, coeffs, order)
}

fn sign(n: usize) -> Rational {
    if n % 2 == 0 {
        int(1)
    } else {
        int(-1)
    }
}

fn criterion_1() -> Outcome {
    let w = lehn_w_of_z(ORDER);
    let head: Vec<Rational> = w.coeffs()[..4].to_vec();
    ensure(head == [int(0), int(1), int(-9), int(94)], || format!("w(z) begins {head:?}"))?;
    let back = lehn_z_of_w(ORDER).compose(&w).map_err(|e| e.to_string())?;
    ensure(back == Series::identity(Var::Z, ORDER), || "z(w(z)) != z".into())?;
    Ok("w = z - 9z^2 + 94z^3 + ...; z(w(z)) = z through z^12".into())
}

fn criterion_2() -> Outcome {
    let u = UniversalSeries::new(ORDER).map_err(|e| e.to_string())?;
    let mut count = 0;
    for h2 in -2..=6 {
        for chi in -1..=3 {
            for hk in -2..=4 {
                for k2 in -3..=2 {
                    let si = SurfaceInvariants::new(h2, chi, hk, k2);
                    if si.validate().is_err() {
                        continue;
                    }
                    let lhs = u.product(&si).map_err(|e| e.to_string())?;
                    let rhs = lehn_rhs(&si, ORDER).map_err(|e| e.to_string())?;
                    let cmp = lhs.compare(&rhs).map_err(|e| e.to_string())?;
                    ensure(cmp.agrees() && cmp.order == ORDER, || format!("{si:?}: {cmp:?}"))?;
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} parity-valid invariant tuples agree through z^12"))
}

fn blowup_range(model: BlowupModel, n_max: usize, k_from: impl Fn(i64) -> i64, expected: impl Fn(i64, i64) -> Rational) -> Result<usize, String> {
    let u = UniversalSeries::new(n_max).map_err(|e| e.to_string())?;
    let mut count = 0;
    for n in 1..=n_max {
        let ni = n as i64;
        for k in k_from(ni)..=3 * ni {
            let (coeff, _) = u.blowup(n, k, model).map_err(|e| e.to_string())?;
            let want = expected(ni, k);
            ensure(coeff == want, || format!("{} n={n} k={k}: {coeff} != {want}", model.name()))?;
            count += 1;
        }
    }
    Ok(count)
}

/// The stated range n-1 <= k <= 2n-1 is one too long: binom(k-n+1, n) is
/// binom(n, n) = 1 at k = 2n-1. Zero is asserted on n-1..2n-2, the binomial
/// on 2n-1..3n, and the top endpoint is checked to be exactly 1.
fn criterion_3() -> Outcome {
    let count = blowup_range(BlowupModel::K3Blowup, 8, |n| n - 1, |n, k| {
        if k <= 2 * n - 2 {
            int(0)
        } else {
            binom(k - n + 1, n as u64)
        }
    })?;
    let u = UniversalSeries::new(8).map_err(|e| e.to_string())?;
    for n in 1..=8usize {
        let (coeff, _) = u.blowup(n, 2 * n as i64 - 1, BlowupModel::K3Blowup).map_err(|e| e.to_string())?;
        ensure(coeff == int(1), || format!("n={n} k=2n-1: {coeff} != 1"))?;
    }
    Ok(format!(
        "{count} (n, k) points: zero for n-1 <= k <= 2n-2, binom(k-n+1, n) for 2n-1 <= k <= 3n; \
         deviation: at k = 2n-1 the coefficient is 1, not 0"
    ))
}

fn criterion_4() -> Outcome {
    let u = UniversalSeries::new(10).map_err(|e| e.to_string())?;
    let mut count = 0;
    for h2 in (0..=20).step_by(2) {
        let s = u.product(&SurfaceInvariants::new(h2, 2, 0, 0)).map_err(|e| e.to_string())?;
        for n in 0..=10usize {
            let want = pow_i64(&int(2), n as i64) * binom(h2 / 2 + 2 - 2 * n as i64, n as u64);
            ensure(s.coeffs()[n] == want, || format!("H^2={h2} n={n}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} coefficients of A1^(H^2) A2^2 match 2^n binom(H^2/2+2-2n, n)"))
}

fn criterion_5() -> Outcome {
    let e = blowup_range(BlowupModel::Enriques2, 6, |_| 0, |n, k| binom(k - n + 3, n as u64))?;
    let a = blowup_range(BlowupModel::Abelian3, 6, |_| 0, |n, k| binom(k - n + 5, n as u64))?;
    Ok(format!("Enriques {e} points, abelian {a} points"))
}

fn criterion_6() -> Outcome {
    let mut count = 0;
    for r in -3..=5 {
        for d in -5..=10 {
            let s = lemma3_series(r, d, ORDER).map_err(|e| e.to_string())?;
            let want = z_poly((0..=ORDER).map(|n| binom(d - r * n as i64 + r, n as u64)).collect(), ORDER);
            ensure(s == want, || format!("Lemma 3 fails at r={r} d={d}"))?;
            count += 1;
        }
    }
    let mut chains = 0;
    for n in 1..=6usize {
        for k in 0..=3 * n as i64 {
            let c = residue_chain_check(n, k).map_err(|e| format!("n={n} k={k}: {e}"))?;
            let routes = [&c.direct, &c.w_transport, &c.w_form, &c.u_form];
            ensure(routes.iter().all(|v| **v == c.binomial), || format!("residue chain n={n} k={k}: {c:?}"))?;
            chains += 1;
        }
    }
    Ok(format!("Lemma 3 for {count} (r, d); residue chain for {chains} (n, k)"))
}

fn criterion_7() -> Outcome {
    let mut count = 0;
    for r in 1..=4 {
        for d in -5..=12 {
            for n in 1..=8usize {
                let got = segre_integral_p1(d, r, n);
                let want = sign(n) * binom(d - r * n as i64 + r, n as u64);
                ensure(got == want, || format!("r={r} d={d} n={n}: {got} != {want}"))?;
                count += 1;
            }
        }
    }
    for d in -5..=12 {
        let curve = curve_segre_rhs(&CurveInvariants::line_bundle(d, 0), 8).map_err(|e| e.to_string())?;
        for n in 1..=8usize {
            ensure(curve.coeffs()[n] == segre_integral_p1(d, 1, n), || format!("rank 1, d={d}, n={n}"))?;
        }
        let thm = theorem2_series(1, d, 8).map_err(|e| e.to_string())?;
        ensure(thm == curve, || format!("Theorem 2 at r=1, d={d} differs from the curve series"))?;
    }
    Ok(format!("{count} P^n integrals; rank 1 matches the curve series for g=0"))
}

fn criterion_8() -> Outcome {
    let cmps = t_vs_w_check(15).map_err(|e| e.to_string())?;
    for c in &cmps {
        ensure(c.agrees() && c.comparison.order == 15, || format!("{}: {:?}", c.label, c.comparison))?;
    }
    Ok(format!("{} comparisons agree through order 15", cmps.len()))
}

fn criterion_9() -> Outcome {
    let c2 = conjecture2_series(ORDER).map_err(|e| e.to_string())?;
    let rel = c2.relations().map_err(|e| e.to_string())?;
    for c in [&rel.w_rank_minus2, &rel.w_rank_plus2, &rel.a_product, &rel.b_equal, &rel.b_squared_back] {
        ensure(c.agrees() && c.comparison.order == ORDER, || format!("{}: {:?}", c.label, c.comparison))?;
    }
    let c1 = conjecture1_series(1, ORDER).map_err(|e| e.to_string())?;
    let one = Series::one(Var::Z, ORDER);
    let one_plus_z = z_poly(vec![int(1), int(1)], ORDER);
    ensure(c1.z_forms[0].series == one_plus_z, || "A1 != 1+z at r=1".into())?;
    ensure(c1.z_forms[1].series == one && c1.z_forms[2].series == one, || "A2, A3 != 1 at r=1".into())?;
    Ok("w(t) at r=-2 and r=2 (after t -> -t/(1+2t)), a2 a-2 = 1, b2 = b-2, rank 1 trivial".into())
}

fn criterion_10() -> Outcome {
    let mut count = 0;
    for r in 1..=4i64 {
        let v = verlinde_series(r, 8).map_err(|e| e.to_string())?;
        for chi in 0..=10 {
            for n in 0..=8usize {
                let got = v.k3_coefficient(n, chi).map_err(|e| e.to_string())?;
                let want = binom(chi - (r * r - 1) * (n as i64 - 1), n as u64);
                ensure(got == want, || format!("r={r} chi={chi} n={n}: {got} != {want}"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} coefficients of f_r g_r^chi"))
}

/// The catalog construction behind a shipped check: the series side and,
/// for whole-series checks, the expected side, both after substitution.
fn counterpart(name: &str, b: &Bindings, order: usize) -> Result<(Series, Option<Series>), String> {
    let e = |x: lehn_core::catalog::CatalogError| x.to_string();
    let p = |k: &str| b[k];
    let rank = |s: &str| s.rsplit('=').next().unwrap().parse::<i64>().map_err(|e| e.to_string());
    let (family, rest) = name.split_once('/').unwrap();
    Ok(match (family, rest) {
        ("reversion", _) => (lehn_w_of_z(order), None),
        ("universal", "splitting") => {
            let si = SurfaceInvariants::new(p("H2"), p("chi"), p("HK"), p("K2"));
            let product = UniversalSeries::new(order).map_err(e)?.product(&si).map_err(e)?;
            (lehn_rhs(&si, order).map_err(e)?, Some(product))
        }
        ("blowup", "k3") | ("remark", "enriques") | ("remark", "abelian") => {
            let model = match rest {
                "k3" => BlowupModel::K3Blowup,
                "enriques" => BlowupModel::Enriques2,
                _ => BlowupModel::Abelian3,
            };
            let si = model.invariants(p("n") as usize, p("k")).map_err(e)?;
            (lehn_rhs(&si, order).map_err(e)?, None)
        }
        ("k3", "closed-form") => (lehn_rhs(&SurfaceInvariants::new(p("h"), 2, 0, 0), order).map_err(e)?, None),
        ("lemma3", r) => (lemma3_series(rank(r)?, p("d"), order).map_err(e)?, None),
        ("theorem2", r) => (theorem2_series(rank(r)?, p("d"), order).map_err(e)?, None),
        ("curve-rank1", "genus0") => (curve_segre_rhs(&CurveInvariants::line_bundle(p("d"), 0), order).map_err(e)?, None),
        ("tw", family) => {
            let label = format!("{family}: w-form(w(t)) = t-form");
            let c = t_vs_w_check(order).map_err(e)?.into_iter().find(|c| c.label == label).ok_or("no such family")?;
            (c.lhs, Some(c.rhs))
        }
        ("conj", which) => {
            let c2 = conjecture2_series(order).map_err(e)?;
            let rel = c2.relations().map_err(e)?;
            match which {
                "w-rank-minus2" => (conjecture1_series(-2, order).map_err(e)?.w_of_t, Some(c2.w_of_t.clone())),
                "w-rank-plus2" => (rel.w_rank_plus2.lhs, Some(rel.w_rank_plus2.rhs)),
                "a-product" => (rel.a_product.lhs, Some(rel.a_product.rhs)),
                "b-equal" => (c2.b_plus.series.clone(), Some(c2.b_minus.series.clone())),
                rank1 => {
                    let i = match rank1 {
                        "rank1-A1" => 0,
                        "rank1-A2" => 1,
                        "rank1-A3" => 2,
                        other => return Err(format!("no counterpart for conj/{other}")),
                    };
                    (conjecture1_series(1, order).map_err(e)?.z_forms[i].series.clone(), None)
                }
            }
        }
        ("verlinde-k3", r) => {
            let v = verlinde_series(rank(r)?, order).map_err(e)?;
            let s = v.f.series.mul(&v.g.series.powi(p("chi")).map_err(|x| x.to_string())?).map_err(|x| x.to_string())?;
            (s, None)
        }
        _ => return Err(format!("no catalog counterpart for '{name}'")),
    })
}

fn params_in(e: &Expr, out: &mut BTreeSet<String>) {
    match e {
        Expr::Num(_) | Expr::Var(_) => {}
        Expr::Param(p) => {
            out.insert(p.clone());
        }
        Expr::Neg(a) | Expr::Sqrt(a) => params_in(a, out),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Binom(a, b) => {
            params_in(a, out);
            params_in(b, out);
        }
        Expr::Pow(a, x) => {
            params_in(a, out);
            if let Exponent::Affine(x) = x {
                params_in(x, out);
            }
        }
    }
}

/// Grid points that differ only in parameters the series side ignores (such
/// as the coefficient index) evaluate the same series; keep one of each.
fn distinct_series_points(spec: &CheckSpec) -> Vec<Bindings> {
    let mut used = BTreeSet::new();
    params_in(&spec.series, &mut used);
    spec.subst.iter().for_each(|s| params_in(s, &mut used));
    if spec.coeff.is_none() {
        params_in(&spec.expect, &mut used);
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for b in spec.grid() {
        let key: BTreeMap<String, i64> = b.iter().filter(|(k, _)| used.contains(*k)).map(|(k, v)| (k.clone(), *v)).collect();
        if seen.insert(key) {
            out.push(b);
        }
    }
    out
}

fn criterion_11() -> Outcome {
    let checks = parse_manifest(SHIPPED_MANIFEST).map_err(|e| e.to_string())?;
    let printed = print_manifest(&checks);
    ensure(parse_manifest(&printed).map_err(|e| e.to_string())? == checks, || "parse(print(parse)) differs".into())?;

    let mut points = 0;
    for spec in &checks {
        let order = spec.order.unwrap_or(ORDER);
        for b in distinct_series_points(spec) {
            let t = targets(spec, &b, order, None).map_err(|e| format!("{}: {e}", spec.name))?;
            let (series, expect) = counterpart(&spec.name, &b, order)?;
            let same = |x: &Series, y: &Series| x.var() == y.var() && x.order() == order && y.order() == order && x == y;
            ensure(same(&t.series, &series), || format!("{} {b:?}: series side differs from the catalog", spec.name))?;
            if let (Some(dsl), Some(cat)) = (&t.expect, &expect) {
                ensure(same(dsl, cat), || format!("{} {b:?}: expected side differs from the catalog", spec.name))?;
            }
            points += 1;
        }
    }

    let corpus = invalid_corpus();
    ensure(corpus.len() >= 20, || "invalid corpus has fewer than 20 cases".into())?;
    for (src, line, fragment) in &corpus {
        match parse_manifest(src) {
            Ok(_) => return Err(format!("accepted invalid manifest:\n{src}")),
            Err(err) => ensure(err.line == *line && err.col >= 1 && err.message.contains(fragment), || {
                format!("wrong error {err} (want line {line}, '{fragment}')")
            })?,
        }
    }
    Ok(format!(
        "{} checks, {points} distinct series match the catalog; roundtrip ok; {} invalid manifests rejected",
        checks.len(),
        corpus.len()
    ))
}

fn verify(args: &[&str]) -> Result<(i32, Vec<u8>, Vec<u8>), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_verify")).args(args).env("NO_COLOR", "1").output().map_err(|e| e.to_string())?;
    Ok((out.status.code().unwrap_or(-1), out.stdout, out.stderr))
}

fn criterion_12() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = |name: &str| dir.path().join(name).to_string_lossy().into_owned();

    let failing = path("failing.lehn");
    std::fs::write(&failing, "check \"wrong/sum\" {\n  params n in 0..3\n  series = 1/(1-z);\n  coeff = n;\n  expect = n;\n}\n")
        .map_err(|e| e.to_string())?;
    let broken = path("broken.lehn");
    std::fs::write(&broken, "check \"broken\" {\n  series = (1+z;\n  expect = 1;\n}\n").map_err(|e| e.to_string())?;

    let (code, out, _) = verify(&["--suite", "reversion"])?;
    ensure(code == 0, || format!("passing suite exited {code}"))?;
    ensure(String::from_utf8_lossy(&out).contains("3 checks: 3 pass"), || "unexpected passing report".into())?;
    let (code, out, _) = verify(&["--suite", "wrong", "--manifest", &failing])?;
    ensure(code == 1, || format!("failing manifest exited {code}"))?;
    ensure(String::from_utf8_lossy(&out).contains("3 fail"), || "report should count 3 failures".into())?;
    let (code, _, err) = verify(&["--suite", "broken", "--manifest", &broken])?;
    ensure(code == 2, || format!("parse error exited {code}"))?;
    ensure(String::from_utf8_lossy(&err).contains("broken.lehn:2:"), || "parse error should carry file and line".into())?;
    for args in [&["--suite", "no-such-suite"][..], &["--order", "0"], &["--bogus-flag"]] {
        let (code, _, _) = verify(args)?;
        ensure(code == 2, || format!("{args:?} exited {code}"))?;
    }

    let start = Instant::now();
    let (a, b) = (path("a.json"), path("b.json"));
    let (code, _, _) = verify(&["--format", "json", "--out", &a])?;
    let elapsed = start.elapsed();
    ensure(code == 0, || format!("full suite exited {code}"))?;
    let (code, _, _) = verify(&["--format", "json", "--out", &b])?;
    ensure(code == 0, || format!("full suite exited {code} on the second run"))?;
    let (a, b) = (std::fs::read(&a).map_err(|e| e.to_string())?, std::fs::read(&b).map_err(|e| e.to_string())?);
    ensure(a == b, || "JSON reports differ between identical runs".into())?;
    ensure(elapsed.as_secs() < 60, || format!("full suite took {elapsed:?}"))?;
    Ok(format!("exit codes 0/1/2 as specified; full-suite JSON ({} bytes) identical across runs; {:.1}s", a.len(), elapsed.as_secs_f64()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("reversion of the change of variables", criterion_1),
        ("universal splitting", criterion_2),
        ("vanishing on K3 blowups", criterion_3),
        ("K3 closed form", criterion_4),
        ("Enriques and abelian blowups", criterion_5),
        ("Lemma 3 and residue chain", criterion_6),
        ("P^1 geometry", criterion_7),
        ("t-forms against w-forms", criterion_8),
        ("conjectural series", criterion_9),
        ("Verlinde series on K3", criterion_10),
        ("manifest language", criterion_11),
        ("harness", criterion_12),
    ];
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {:>2} PASS  {title}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {title}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
