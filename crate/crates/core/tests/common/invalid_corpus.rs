// Shared between the parser tests and the acceptance target via `include!`.

const BASE: &str = r#"check "base" {
  params n in 1..4, k in 0..12
  require k <= 3n
  series = (1-w)^(k+2) * (1-2w)^(-k+6n-1) / (1-6w+6w^2)^(3n-1);
  subst = w(1-w)(1-2w)^4/(1-6w+6w^2)^3;
  coeff = n;
  expect = binom(k-n+1, n);
}
"#;

/// Replaces one line (1-based) of the base manifest.
fn mutate(line: usize, replacement: &str) -> String {
    BASE.lines()
        .enumerate()
        .map(|(i, l)| if i + 1 == line { replacement } else { l })
        .collect::<Vec<_>>()
        .join("\n")
}

/// (manifest, line of the reported error, message fragment)
fn invalid_corpus() -> Vec<(String, usize, &'static str)> {
    vec![
        (mutate(4, "  series (1-w)^(k+2);"), 4, "expected '='"),
        (mutate(4, "  series = (1-w)^(m+2);"), 4, "undeclared identifier 'm'"),
        (mutate(4, "  series = (1-w)^(n*k);"), 4, "non-affine"),
        (mutate(4, "  series = (1-w)^(w);"), 4, "non-affine"),
        (mutate(6, "  coeff = n"), 7, "expected ';'"),
        (mutate(5, "  subst = w(1-w(1-2w)^4;"), 5, "expected ')'"),
        (mutate(7, "  expect = 1.5;"), 7, "decimal"),
        (mutate(6, "  coeff = @n;"), 6, "unexpected character '@'"),
        (mutate(1, "check \"base {"), 1, "unterminated string"),
        (BASE.replace('}', ""), 9, "found end of input"),
        (mutate(7, "  coeff = n;"), 7, "duplicate 'coeff'"),
        (mutate(4, ""), 8, "missing a 'series'"),
        (mutate(2, "  params n in 4..1, k in 0..12"), 2, "empty range"),
        (mutate(2, "  params w in 1..4, k in 0..12"), 2, "series variable"),
        (mutate(2, "  params n in 1..4, n in 0..12"), 2, "declared twice"),
        (mutate(3, "  require n*k <= 3"), 3, "affine"),
        (mutate(5, "  subst = z(1-z);"), 5, "subst must express z"),
        (mutate(4, "  series = w + t;"), 4, "mixes series variables"),
        (String::new(), 1, "at least one 'check'"),
        (mutate(7, "  expect = binom(n*k, n);"), 7, "affine"),
        (BASE.repeat(2), 9, "duplicate check name"),
        (mutate(6, "  power = n;"), 6, "expected"),
    ]
}
