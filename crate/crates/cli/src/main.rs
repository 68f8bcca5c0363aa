//! `treehl`: batch runner for the tree maximal-function experiments.
//!
//! Exit codes: 0 ok, 1 assertion failure or runtime error, 2 config error.

mod config;
mod error;
mod experiments;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use treehl_lab::abstract_trees::FiniteTree;
use treehl_lab::verify::{criterion, diagnostics, CRITERIA};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "treehl", version, about = "Weighted maximal-function experiments on trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the experiment described by a TOML config.
    Run {
        config: PathBuf,
    },
    /// Run every acceptance criterion with pinned tolerances.
    VerifyAll {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated criterion numbers; all when omitted.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
        /// Skip the diagnostics that are not acceptance criteria.
        #[arg(long)]
        no_diagnostics: bool,
    },
    /// Write a finite tree as an edge list: "kary K DEPTH", "path N" or
    /// "random N SEED".
    GenTree {
        spec: String,
        /// Output file; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// `TREEHL_THREADS` wins over the config value; invalid values are config
/// errors. Returns the pool size in effect.
fn configure_threads(config_threads: Option<usize>) -> Result<usize, CliError> {
    let env = match std::env::var("TREEHL_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Some(n),
            _ => return Err(CliError::config("TREEHL_THREADS", format!("expected a positive integer, got {v:?}"))),
        },
        Err(_) => None,
    };
    if let Some(n) = env.or(config_threads) {
        // A second call in the same process fails harmlessly; the pool is
        // already configured.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(rayon::current_num_threads())
}

fn run(path: &Path) -> Result<bool, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::config("config", format!("{}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| CliError::config("config", "not valid UTF-8"))?;
    let base = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("experiment");
    let plan = config::parse_config(&text, base, stem)?;
    let threads = configure_threads(plan.threads)?;
    let outcome = experiments::run(&plan)?;
    let dir = output::write_outputs(&plan, path, &bytes, &outcome, threads)?;
    for v in &outcome.verdicts {
        println!("{}", v.line());
    }
    let signals = outcome.report.points.iter().filter(|p| p.signal.is_some()).count();
    println!("{} grid points ({signals} signals) written to {}", outcome.report.points.len(), dir.display());
    Ok(outcome.verdicts.iter().all(|v| v.passed))
}

fn verify_all(seed: u64, only: &[u8], with_diagnostics: bool) -> Result<bool, CliError> {
    configure_threads(None)?;
    let ids: Vec<u8> = if only.is_empty() { CRITERIA.collect() } else { only.to_vec() };
    let mut failed = Vec::new();
    let mut passed = 0;
    for &id in &ids {
        let res = criterion(id, seed).ok_or_else(|| CliError::config("--only", format!("no criterion {id} (expected 1..=10)")))?;
        println!("{}", res.line());
        if res.passed {
            passed += 1;
        } else {
            failed.push(res);
        }
    }
    if with_diagnostics && only.is_empty() {
        for d in diagnostics(seed) {
            println!("{}", d.line());
        }
    }
    println!("verify-all: {passed} passed, {} failed", failed.len());
    for f in &failed {
        println!("FAILED criterion {} ({}): {}", f.id, f.title, f.detail);
    }
    Ok(failed.is_empty())
}

fn gen_tree(spec: &str, output: Option<&Path>) -> Result<bool, CliError> {
    let tree = FiniteTree::from_spec(spec).map_err(|e| CliError::config("spec", e))?;
    let text = tree.to_edge_list();
    match output {
        Some(path) => std::fs::write(path, &text).map_err(|e| CliError::io(path, e))?,
        None => print!("{text}"),
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { config } => run(config),
        Command::VerifyAll { seed, only, no_diagnostics } => verify_all(*seed, only, !no_diagnostics),
        Command::GenTree { spec, output } => gen_tree(spec, output.as_deref()),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("treehl: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
