use std::collections::BTreeMap;

use lehn_core::dsl::{parse_manifest, print_manifest, run_check, Status};

include!("common/invalid_corpus.rs");

#[test]
fn base_manifest_is_valid_and_passes() {
    let checks = parse_manifest(BASE).unwrap();
    let results = run_check(&checks[0], None, &BTreeMap::new()).unwrap();
    assert!(!results.is_empty());
    assert!(results.iter().all(|r| r.status == Status::Pass));
}

#[test]
fn every_seeded_mutation_is_rejected_with_a_position() {
    let corpus = invalid_corpus();
    assert!(corpus.len() >= 20);
    for (src, line, fragment) in corpus {
        let err = parse_manifest(&src).expect_err(&src);
        assert_eq!(err.line, line, "{err} for:\n{src}");
        assert!(err.col >= 1);
        assert!(err.message.contains(fragment), "'{}' lacks '{fragment}'", err.message);
        assert!(err.to_string().starts_with(&format!("{}:{}:", err.line, err.col)));
    }
}

#[test]
fn evaluation_errors_are_not_parse_errors() {
    let src = BASE.replace("series = (1-w)^(k+2)", "series = 1/(w) * (1-w)^(k+2)");
    let checks = parse_manifest(&src).unwrap();
    let results = run_check(&checks[0], None, &BTreeMap::new()).unwrap();
    assert!(results.iter().all(|r| r.status == Status::Error));
}

#[test]
fn print_then_parse_is_the_identity() {
    let checks = parse_manifest(BASE).unwrap();
    let printed = print_manifest(&checks);
    assert_eq!(parse_manifest(&printed).unwrap(), checks);
    assert_eq!(print_manifest(&parse_manifest(&printed).unwrap()), printed);
}

#[test]
fn grid_respects_ranges_and_constraints() {
    let checks = parse_manifest(BASE).unwrap();
    let grid = checks[0].grid();
    // k in 0..=3n for n in 1..=4
    assert_eq!(grid.len(), 4 + 7 + 10 + 13);
    assert!(grid.iter().all(|b| b["k"] <= 3 * b["n"]));
    let mut sorted = grid.clone();
    sorted.sort_by_key(|b| (b["n"], b["k"]));
    assert_eq!(grid, sorted);
}
