use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};

fn treehl(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_treehl"));
    cmd.args(args).env_remove("TREEHL_THREADS");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

fn run_config(dir: &Path, name: &str, body: &str) -> (Output, PathBuf) {
    let path = write_config(dir, name, body);
    let out = treehl(&["run", path.to_str().unwrap()], &[]);
    let stem = name.trim_end_matches(".toml");
    (out, dir.join(format!("{stem}.out")))
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn sandwich_passes_and_writes_all_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let body = "kind = \"sandwich\"\nseed = 7\n[params]\nsamples = 12\n";
    let (out, res) = run_config(dir.path(), "sandwich.toml", body);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("max observed M∘/M ratio <= 2: PASS"));
    for f in ["report.jsonl", "summary.csv", "verdicts.txt", "manifest.json"] {
        assert!(res.join(f).exists(), "{f} missing");
    }
    let manifest: Value = serde_json::from_str(&fs::read_to_string(res.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config_sha256"], hex::encode(Sha256::digest(body.as_bytes())));
    assert_eq!(manifest["points"], 12);
    assert!(manifest["max"].as_f64().unwrap() <= 2.0);
    let lines = fs::read_to_string(res.join("report.jsonl")).unwrap();
    assert_eq!(lines.lines().count(), 12);
    for line in lines.lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["engine"], "point-exact");
        assert!(v["exact"].is_string());
    }
}

#[test]
fn counterexample_csv_has_stable_columns_and_growing_tail() {
    let dir = tempfile::tempdir().unwrap();
    let (out, res) = run_config(dir.path(), "ce.toml", "kind = \"counterexample\"\n[grid]\nj = \"1..16\"\n");
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("ratio growth >= linear (k=2, n=1): PASS"));
    let csv = fs::read_to_string(res.join("summary.csv")).unwrap();
    let mut rows = csv.lines();
    let header: Vec<&str> = rows.next().unwrap().split(',').collect();
    let col = |name: &str| header.iter().position(|h| *h == name).unwrap_or_else(|| panic!("no column {name}"));
    let (j, measure, ratio) = (col("j"), col("measure"), col("ratio"));
    col("integral");
    let parsed: Vec<(usize, usize, f64)> = rows
        .map(|r| {
            let c: Vec<&str> = r.split(',').collect();
            (c[j].parse().unwrap(), c[measure].parse().unwrap(), c[ratio].parse().unwrap())
        })
        .collect();
    assert_eq!(parsed.len(), 16);
    for (jj, m, _) in &parsed {
        assert_eq!(*m, jj + 1);
    }
    assert!(parsed[8..].windows(2).all(|w| w[1].2 >= w[0].2));
}

#[test]
fn abstract_expansion_rows_carry_witness_sets() {
    let dir = tempfile::tempdir().unwrap();
    let body = "kind = \"abstract-expansion\"\n[tree]\nspec = \"kary 2 6\"\n[grid]\nr = \"0..4\"\n";
    let (out, res) = run_config(dir.path(), "ae.toml", body);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = fs::read_to_string(res.join("report.jsonl")).unwrap();
    let rows: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows.len(), 5);
    for (r, row) in rows.iter().enumerate() {
        assert_eq!(row["inputs"]["r"], r);
        assert!(!row["outputs"]["e"].as_array().unwrap().is_empty());
        assert!(!row["outputs"]["f"].as_array().unwrap().is_empty());
        assert_eq!(row["outputs"]["certification"], "Exact");
    }
}

#[test]
fn tree_file_is_read_relative_to_the_config() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("edges.txt");
    let out = treehl(&["gen-tree", "random 30 5", "-o", edges.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(0));
    let body = "kind = \"abstract-weak-type\"\n[tree]\nfile = \"edges.txt\"\n[params]\nsamples = 3\n";
    let (out, res) = run_config(dir.path(), "aw.toml", body);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(fs::read_to_string(res.join("report.jsonl")).unwrap().lines().count(), 3);
}

#[test]
fn config_errors_exit_2_with_field_paths() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("kind = \"weak-type\"\n[tree]\nk = 1\n", "tree.k: k ≥ 2 required"),
        ("kind = \"counterexample\"\n", "grid.j: required"),
        ("kind = \"counterexample\"\n[grid]\nj = []\n", "grid.j: empty grid"),
        ("kind = \"strong\"\n[grid]\np = [\"1/2\"]\n", "grid.p: values must be > 1"),
        ("kind = \"sandwich\"\n[params]\nsampels = 3\n", "sampels"),
        ("kind = \"sandwich\"\nthreads = 0\n", "threads: must be >= 1"),
        ("kind = [1]\n", "kind"),
        ("this is not toml", "config error"),
    ];
    for (i, (body, needle)) in cases.iter().enumerate() {
        let (out, res) = run_config(dir.path(), &format!("bad{i}.toml"), body);
        assert_eq!(out.status.code(), Some(2), "case {i}: {}", stderr(&out));
        assert!(stderr(&out).contains(needle), "case {i}: {}", stderr(&out));
        assert!(!res.exists());
    }
    let out = treehl(&["run", dir.path().join("missing.toml").to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failed_verdict_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let body = "kind = \"abstract-weak-type\"\n[tree]\nspec = \"kary 2 4\"\n[params]\nsamples = 4\n[verdict]\nmax_value = 1e-9\n";
    let (out, res) = run_config(dir.path(), "aw.toml", body);
    assert_eq!(out.status.code(), Some(1));
    let verdicts = fs::read_to_string(res.join("verdicts.txt")).unwrap();
    assert!(verdicts.contains("max ratio <= 0.000000001: FAIL"), "{verdicts}");
}

#[test]
fn output_is_byte_identical_across_runs_and_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let body = "kind = \"borders\"\nseed = 3\n[tree]\nk = [2, 3]\n[params]\nsamples = 40\n";
    let path = write_config(dir.path(), "b.toml", body);
    let report = dir.path().join("b.out/report.jsonl");
    let mut seen = Vec::new();
    for threads in ["1", "3", "1"] {
        let out = treehl(&["run", path.to_str().unwrap()], &[("TREEHL_THREADS", threads)]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
        seen.push(fs::read(&report).unwrap());
    }
    assert!(seen.windows(2).all(|w| w[0] == w[1]));
    let out = treehl(&["run", path.to_str().unwrap()], &[("TREEHL_THREADS", "zero")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("TREEHL_THREADS"));
}

#[test]
fn grid_point_failures_become_signals() {
    let dir = tempfile::tempdir().unwrap();
    let body = "kind = \"vector\"\n[grid]\np = [2]\nq = [\"3/2\", 3]\n[params]\nsamples = 2\ndomain = 6\n";
    let (out, res) = run_config(dir.path(), "v.toml", body);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let rows: Vec<Value> =
        fs::read_to_string(res.join("report.jsonl")).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0]["signal"].is_null());
    assert!(rows[1]["signal"].as_str().unwrap().contains("q <= p"));
}

#[test]
fn gen_tree_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("edges.txt");
    let out = treehl(&["gen-tree", "kary 2 3", "-o", file.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&file).unwrap();
    let edges: Vec<(usize, usize)> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let mut it = l.split_whitespace().map(|t| t.parse::<usize>().unwrap());
            (it.next().unwrap(), it.next().unwrap())
        })
        .collect();
    assert_eq!(edges.len(), 14);
    assert!(edges.iter().all(|&(p, c)| p == (c - 1) / 2));
    let out = treehl(&["gen-tree", "kary 2 3"], &[]);
    assert_eq!(stdout(&out), text);
    let out = treehl(&["gen-tree", "cube 3"], &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_all_subset() {
    let out = treehl(&["verify-all", "--only", "2,8", "--seed", "1"], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("criterion  2") && text.contains("criterion  8"));
    assert!(text.contains("verify-all: 2 passed, 0 failed"));
    let out = treehl(&["verify-all", "--only", "11"], &[]);
    assert_eq!(out.status.code(), Some(2));
}
