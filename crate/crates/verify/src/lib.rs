//! Batch verification of Segre generating-series identities.
//!
//! Suites come from two places: built-in checks computed straight from the
//! catalog ([`builtin`]) and `.lehn` manifests, including the one shipped with
//! this crate. A manifest check belongs to the suite named by the part of its
//! name before the first `/`.

pub mod builtin;
pub mod report;

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use lehn_core::dsl::{parse_manifest, Bindings, CheckResult, CheckSpec, ParseError, PreparedCheck, RunError, Status};
use rayon::prelude::*;
use thiserror::Error;

pub use report::{render_report, Format};

/// The manifest shipped with the tool; it encodes the full identity suite.
pub const SHIPPED_MANIFEST: &str = include_str!("../manifests/default.lehn");
pub const SHIPPED_MANIFEST_NAME: &str = "<shipped>/default.lehn";

pub const DEFAULT_ORDER: usize = 12;
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("unknown suite '{name}' (available: {})", available.join(", "))]
    UnknownSuite { name: String, available: Vec<String> },
    #[error("{path}:{error}")]
    Manifest { path: String, error: ParseError },
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Run(#[from] RunError),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counts {
    pub pass: usize,
    pub fail: usize,
    pub error: usize,
}

impl Counts {
    pub fn tally(results: &[CheckResult]) -> Counts {
        let mut c = Counts::default();
        for r in results {
            match r.status {
                Status::Pass => c.pass += 1,
                Status::Fail => c.fail += 1,
                Status::Error => c.error += 1,
            }
        }
        c
    }

    pub fn total(&self) -> usize {
        self.pass + self.fail + self.error
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: String,
    /// Sorted by check name, then parameter assignment.
    pub results: Vec<CheckResult>,
    pub counts: Counts,
    pub runtime: Duration,
    pub order: usize,
    pub version: String,
}

impl SuiteReport {
    pub fn new(suite: &str, mut results: Vec<CheckResult>, order: usize, runtime: Duration) -> SuiteReport {
        results.sort_by(|a, b| (&a.name, &a.params).cmp(&(&b.name, &b.params)));
        SuiteReport {
            suite: suite.to_string(),
            counts: Counts::tally(&results),
            results,
            runtime,
            order,
            version: VERSION.to_string(),
        }
    }

    pub fn all_passed(&self) -> bool {
        self.counts.pass == self.counts.total()
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// A suite name, or `all`.
    pub suite: String,
    pub order: Option<usize>,
    pub manifests: Vec<PathBuf>,
    /// Only grid points with these parameter values; checks that do not
    /// declare every filtered parameter are skipped.
    pub filter: BTreeMap<String, i64>,
    /// Leave out the shipped manifest (built-in suites only, plus `manifests`).
    pub skip_shipped: bool,
}

impl RunOptions {
    pub fn suite(name: &str) -> RunOptions {
        RunOptions { suite: name.to_string(), ..RunOptions::default() }
    }
}

/// Loads the shipped manifest and the given files, in that order.
pub fn load_manifests(paths: &[PathBuf], skip_shipped: bool) -> Result<Vec<CheckSpec>, HarnessError> {
    let mut checks = Vec::new();
    if !skip_shipped {
        checks.extend(parse_named(SHIPPED_MANIFEST, SHIPPED_MANIFEST_NAME)?);
    }
    for p in paths {
        let text = std::fs::read_to_string(p).map_err(|source| HarnessError::Io { path: display(p), source })?;
        checks.extend(parse_named(&text, &display(p))?);
    }
    Ok(checks)
}

fn display(p: &Path) -> String {
    p.display().to_string()
}

fn parse_named(text: &str, path: &str) -> Result<Vec<CheckSpec>, HarnessError> {
    parse_manifest(text).map_err(|error| HarnessError::Manifest { path: path.to_string(), error })
}

/// Every suite name known for the given manifests, sorted.
pub fn available_suites(checks: &[CheckSpec]) -> Vec<String> {
    let mut names: BTreeSet<String> = builtin::BUILTIN_SUITES.iter().map(|s| s.to_string()).collect();
    names.extend(checks.iter().map(|c| c.suite().to_string()));
    names.into_iter().collect()
}

fn filtered(params: &Bindings, filter: &BTreeMap<String, i64>) -> bool {
    filter.iter().all(|(k, v)| params.get(k) == Some(v))
}

/// Runs a suite (or `all`) and aggregates the results deterministically.
pub fn run_suite(opts: &RunOptions) -> Result<SuiteReport, HarnessError> {
    let start = Instant::now();
    let checks = load_manifests(&opts.manifests, opts.skip_shipped)?;
    let available = available_suites(&checks);
    let all = opts.suite == "all";
    if !all && !available.contains(&opts.suite) {
        return Err(HarnessError::UnknownSuite { name: opts.suite.clone(), available });
    }
    let order = opts.order.unwrap_or(DEFAULT_ORDER);

    let mut work = Vec::new();
    for name in builtin::BUILTIN_SUITES {
        if all || opts.suite == name {
            work.extend(builtin::suite(name, order).expect("listed suite"));
        }
    }
    work.retain(|w| filtered(&w.params, &opts.filter));
    if let Some(w) = work.iter().find(|w| w.needs > order) {
        return Err(RunError::OrderTooSmall { check: w.name.clone(), needed: w.needs, order }.into());
    }

    let selected: Vec<&CheckSpec> = checks.iter().filter(|c| all || c.suite() == opts.suite).collect();
    let prepared: Vec<PreparedCheck> = selected.par_iter().map(|c| PreparedCheck::new(c, opts.order)).collect();
    let mut points = Vec::new();
    for (i, p) in prepared.iter().enumerate() {
        for b in p.points(&opts.filter)? {
            points.push((i, b));
        }
    }

    let mut results: Vec<CheckResult> = work.par_iter().flat_map_iter(|w| w.run()).collect();
    results.par_extend(points.par_iter().map(|(i, b)| prepared[*i].run(b)));
    Ok(SuiteReport::new(&opts.suite, results, order, start.elapsed()))
}
