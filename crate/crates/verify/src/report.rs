//! Text and JSON rendering of a [`SuiteReport`].
//!
//! JSON keys are sorted, rationals are `"p/q"` strings, and the runtime is
//! left out so that identical runs produce identical bytes.

use std::fmt::Write as _;

use lehn_core::dsl::{CheckResult, Status};
use lehn_core::rational::to_pq;
use serde_json::{json, Map, Value};

use crate::SuiteReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

pub fn render_report(r: &SuiteReport, format: Format, color: bool) -> String {
    match format {
        Format::Text => render_text(r, color),
        Format::Json => render_json(r),
    }
}

fn params_text(r: &CheckResult) -> String {
    r.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
}

fn opt_pq(v: &Option<lehn_core::Rational>) -> String {
    v.as_ref().map(to_pq).unwrap_or_else(|| "-".into())
}

fn paint(status: Status, color: bool) -> String {
    let s = status.as_str();
    if !color {
        return s.to_string();
    }
    let code = match status {
        Status::Pass => "32",
        Status::Fail => "31",
        Status::Error => "33",
    };
    format!("\x1b[{code}m{s}\x1b[0m")
}

fn render_text(r: &SuiteReport, color: bool) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "suite {}  order {}  lehn-verify {}", r.suite, r.order, r.version);
    let header = ["CHECK", "PARAMS", "STATUS", "COMPUTED", "EXPECTED", "AT"];
    let rows: Vec<[String; 6]> = r
        .results
        .iter()
        .map(|c| {
            [
                c.name.clone(),
                params_text(c),
                c.status.as_str().to_string(),
                opt_pq(&c.computed),
                opt_pq(&c.expected),
                c.first_mismatch_order.map(|n| n.to_string()).unwrap_or_else(|| "-".into()),
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[String; 6], status: Option<Status>| {
        let mut s = String::new();
        for (i, (cell, w)) in cells.iter().zip(widths).enumerate() {
            let pad = w - cell.chars().count();
            match (i, status) {
                (2, Some(st)) => s.push_str(&paint(st, color)),
                _ => s.push_str(cell),
            }
            if i + 1 < cells.len() {
                s.push_str(&" ".repeat(pad + 2));
            }
        }
        s
    };
    if !rows.is_empty() {
        let _ = writeln!(out, "{}", line(&header.map(String::from), None));
        for (row, res) in rows.iter().zip(&r.results) {
            let _ = writeln!(out, "{}", line(row, Some(res.status)));
            if res.status != Status::Pass {
                if let Some(m) = &res.message {
                    let _ = writeln!(out, "    {m}");
                }
            }
        }
    }
    let c = &r.counts;
    let _ = writeln!(
        out,
        "{} checks: {} pass, {} fail, {} error ({:.2}s)",
        c.total(),
        c.pass,
        c.fail,
        c.error,
        r.runtime.as_secs_f64()
    );
    out
}

fn result_json(r: &CheckResult) -> Value {
    let params: Map<String, Value> = r.params.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
    json!({
        "name": r.name,
        "params": params,
        "status": r.status.as_str(),
        "computed": r.computed.as_ref().map(to_pq),
        "expected": r.expected.as_ref().map(to_pq),
        "first_mismatch_order": r.first_mismatch_order,
        "message": r.message,
    })
}

fn render_json(r: &SuiteReport) -> String {
    let v = json!({
        "suite": r.suite,
        "order": r.order,
        "version": r.version,
        "counts": {
            "pass": r.counts.pass,
            "fail": r.counts.fail,
            "error": r.counts.error,
            "total": r.counts.total(),
        },
        "results": r.results.iter().map(result_json).collect::<Vec<_>>(),
    });
    let mut s = serde_json::to_string_pretty(&v).expect("JSON values always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::time::Duration;

    #[test]
    fn empty_report() {
        let r = SuiteReport::new("none", Vec::new(), 12, Duration::ZERO);
        let text = render_report(&r, Format::Text, false);
        assert!(text.starts_with("suite none  order 12"));
        assert!(text.contains("0 checks"));
        let json: Value = serde_json::from_str(&render_report(&r, Format::Json, false)).unwrap();
        assert_eq!(json["counts"]["total"], 0);
    }

    #[test]
    fn json_keys_are_sorted_and_rationals_are_strings() {
        let b = [("n".to_string(), 2)].into();
        let res = CheckResult::compared("x/y", &b, lehn_core::rational::ratio(1, 2), lehn_core::rational::int(3), 2);
        let r = SuiteReport::new("x", vec![res], 12, Duration::from_secs(3));
        let s = render_report(&r, Format::Json, false);
        assert!(s.contains("\"computed\": \"1/2\""));
        assert!(s.contains("\"expected\": \"3/1\""));
        let keys: Vec<usize> = ["\"computed\"", "\"expected\"", "\"first_mismatch_order\"", "\"message\"", "\"name\""]
            .iter()
            .map(|k| s.find(k).unwrap())
            .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
        assert!(!s.contains("runtime"));
    }

    #[test]
    fn text_columns_align_and_color_is_optional() {
        let b1 = [("n".to_string(), 2)].into();
        let b2 = [("n".to_string(), 10)].into();
        let results = vec![
            CheckResult::compared("a/long-name", &b1, lehn_core::rational::int(0), lehn_core::rational::int(0), 2),
            CheckResult::compared("b", &b2, lehn_core::rational::int(1), lehn_core::rational::int(2), 10),
        ];
        let r = SuiteReport::new("x", results, 12, Duration::ZERO);
        let plain = render_report(&r, Format::Text, false);
        let lines: Vec<&str> = plain.lines().collect();
        let col = lines[1].find("STATUS").unwrap();
        assert_eq!(lines[2].find("pass"), Some(col));
        assert_eq!(lines[3].find("fail"), Some(col));
        assert!(!plain.contains('\x1b'));
        assert!(render_report(&r, Format::Text, true).contains("\x1b[31mfail"));
    }
}
