use std::collections::BTreeMap;
use std::io::{IsTerminal, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use lehn_verify::{render_report, run_suite, Format, RunOptions};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

/// Verify generating-series identities with exact rational arithmetic.
#[derive(Debug, Parser)]
#[command(name = "verify", version)]
struct Cli {
    /// Suite to run, or `all`.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Truncation order for every check (default 12).
    #[arg(long)]
    order: Option<usize>,
    /// Additional `.lehn` manifest; may be repeated.
    #[arg(long = "manifest", value_name = "PATH")]
    manifests: Vec<PathBuf>,
    /// Restrict parameter grids, e.g. `--param n=2`; may be repeated.
    #[arg(long = "param", value_name = "KEY=VALUE", value_parser = parse_param)]
    params: Vec<(String, i64)>,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    /// Write the report here instead of standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

fn parse_param(s: &str) -> Result<(String, i64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected KEY=VALUE, got '{s}'"))?;
    let v = v.trim().parse().map_err(|_| format!("'{v}' is not an integer"))?;
    Ok((k.trim().to_string(), v))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let filter: BTreeMap<String, i64> = cli.params.into_iter().collect();
    let opts = RunOptions {
        suite: cli.suite,
        order: cli.order,
        manifests: cli.manifests,
        filter,
        skip_shipped: false,
    };
    let report = match run_suite(&opts) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("verify: {e}");
            return ExitCode::from(2);
        }
    };
    let format = match cli.format {
        FormatArg::Text => Format::Text,
        FormatArg::Json => Format::Json,
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, render_report(&report, format, false)),
        None => {
            let color = std::env::var_os("NO_COLOR").is_none() && std::io::stdout().is_terminal();
            std::io::stdout().write_all(render_report(&report, format, color).as_bytes())
        }
    };
    if let Err(e) = written {
        eprintln!("verify: cannot write report: {e}");
        return ExitCode::from(2);
    }
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
