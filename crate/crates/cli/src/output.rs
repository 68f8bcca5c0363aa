//! Report files: `report.jsonl`, `summary.csv`, `verdicts.txt` and
//! `manifest.json`.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde_json::json;
use sha2::{Digest, Sha256};

use crate::config::Plan;
use crate::error::CliError;
use crate::experiments::Outcome;

pub const REPORT: &str = "report.jsonl";
pub const SUMMARY: &str = "summary.csv";
pub const VERDICTS: &str = "verdicts.txt";
pub const MANIFEST: &str = "manifest.json";

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

/// Writes the four files into `plan.output_dir`; the JSONL goes out one
/// record at a time through a single writer.
pub fn write_outputs(
    plan: &Plan,
    config_path: &Path,
    config_bytes: &[u8],
    outcome: &Outcome,
    threads: usize,
) -> Result<PathBuf, CliError> {
    let dir = &plan.output_dir;
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;

    let report_path = dir.join(REPORT);
    let file = File::create(&report_path).map_err(|e| CliError::io(&report_path, e))?;
    let mut w = BufWriter::new(file);
    for line in outcome.report.to_jsonl().lines() {
        writeln!(w, "{line}").map_err(|e| CliError::io(&report_path, e))?;
    }
    w.flush().map_err(|e| CliError::io(&report_path, e))?;

    let csv = outcome.report.to_csv().map_err(|e| CliError::Csv(e.to_string()))?;
    write_file(&dir.join(SUMMARY), &csv)?;

    let mut verdicts: String = outcome.verdicts.iter().map(|v| v.line() + "\n").collect();
    for flag in &outcome.report.flags {
        verdicts += &format!("# {flag}\n");
    }
    write_file(&dir.join(VERDICTS), &verdicts)?;

    let manifest = json!({
        "tool": "treehl",
        "version": env!("CARGO_PKG_VERSION"),
        "kind": plan.kind.to_string(),
        "config": config_path.display().to_string(),
        "config_sha256": sha256_hex(config_bytes),
        "seed": plan.seed,
        "backend": plan.backend.name(),
        "tree": plan.tree_label,
        "weight": plan.weight.label(),
        "threads": threads,
        "points": outcome.report.points.len(),
        "signals": outcome.report.points.iter().filter(|p| p.signal.is_some()).count(),
        "max": outcome.report.max(),
        "passed": outcome.verdicts.iter().all(|v| v.passed),
        "report_sha256": sha256_hex(outcome.report.to_jsonl().as_bytes()),
        "files": [REPORT, SUMMARY, VERDICTS],
    });
    let text = serde_json::to_string_pretty(&manifest).expect("json value serializes") + "\n";
    write_file(&dir.join(MANIFEST), &text)?;
    Ok(dir.clone())
}
