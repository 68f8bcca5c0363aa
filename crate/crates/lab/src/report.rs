//! Experiment records: one [`GridPoint`] per evaluated parameter tuple,
//! collected into a [`ConstantReport`] that serializes to JSON lines and CSV.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub inputs: BTreeMap<String, Value>,
    pub outputs: BTreeMap<String, Value>,
    /// The measured ratio, when defined.
    pub value: Option<f64>,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    /// Exact decimal or rational rendering of the value, when available.
    pub exact: Option<String>,
    pub engine: String,
    /// Divergence or undefined-ratio signal recorded instead of a value.
    pub signal: Option<String>,
}

impl GridPoint {
    pub fn new(engine: impl Into<String>) -> Self {
        Self { engine: engine.into(), ..Self::default() }
    }

    pub fn input(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.inputs.insert(key.to_string(), v.into());
        self
    }

    pub fn output(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.outputs.insert(key.to_string(), v.into());
        self
    }

    pub fn with_value(mut self, v: f64) -> Self {
        self.value = Some(v);
        self
    }

    pub fn with_bounds(mut self, lo: f64, hi: f64) -> Self {
        self.lower = Some(lo);
        self.upper = Some(hi);
        self
    }

    pub fn with_exact(mut self, s: impl Into<String>) -> Self {
        self.exact = Some(s.into());
        self
    }

    pub fn with_signal(mut self, s: impl Into<String>) -> Self {
        self.signal = Some(s.into());
        self
    }
}

/// Measured ratios over a parameter grid; the running max is the empirical
/// constant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantReport {
    pub experiment: String,
    pub value_name: String,
    pub points: Vec<GridPoint>,
    pub flags: Vec<String>,
}

impl ConstantReport {
    pub fn new(experiment: impl Into<String>, value_name: impl Into<String>) -> Self {
        Self { experiment: experiment.into(), value_name: value_name.into(), points: Vec::new(), flags: Vec::new() }
    }

    pub fn push(&mut self, p: GridPoint) {
        self.points.push(p);
    }

    pub fn flag(&mut self, f: impl Into<String>) {
        let f = f.into();
        if !self.flags.contains(&f) {
            self.flags.push(f);
        }
    }

    pub fn running_max(&self) -> Vec<Option<f64>> {
        let mut best: Option<f64> = None;
        self.points
            .iter()
            .map(|p| {
                if let Some(v) = p.value.filter(|v| !v.is_nan()) {
                    best = Some(best.map_or(v, |b| b.max(v)));
                }
                best
            })
            .collect()
    }

    pub fn max(&self) -> Option<f64> {
        self.running_max().last().copied().flatten()
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for (i, (p, rm)) in self.points.iter().zip(self.running_max()).enumerate() {
            let line = serde_json::json!({
                "experiment": self.experiment,
                "index": i,
                "inputs": p.inputs,
                "outputs": p.outputs,
                self.value_name.clone(): p.value,
                "lower": p.lower,
                "upper": p.upper,
                "exact": p.exact,
                "running_max": rm,
                "engine": p.engine,
                "signal": p.signal,
            });
            out.push_str(&line.to_string());
            out.push('\n');
        }
        out
    }

    /// CSV with columns `index, <inputs>, <outputs>, <value_name>, lower,
    /// upper, exact, running_max, engine, signal`.
    pub fn to_csv(&self) -> Result<String, csv::Error> {
        let inputs: BTreeSet<&String> = self.points.iter().flat_map(|p| p.inputs.keys()).collect();
        let outputs: BTreeSet<&String> = self.points.iter().flat_map(|p| p.outputs.keys()).collect();
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["index".to_string()];
        header.extend(inputs.iter().map(|s| s.to_string()));
        header.extend(outputs.iter().map(|s| s.to_string()));
        header.extend([&self.value_name, "lower", "upper", "exact", "running_max", "engine", "signal"].map(String::from));
        w.write_record(&header)?;
        for (i, (p, rm)) in self.points.iter().zip(self.running_max()).enumerate() {
            let mut row = vec![i.to_string()];
            row.extend(inputs.iter().map(|k| cell(p.inputs.get(*k))));
            row.extend(outputs.iter().map(|k| cell(p.outputs.get(*k))));
            row.push(opt(p.value));
            row.push(opt(p.lower));
            row.push(opt(p.upper));
            row.push(p.exact.clone().unwrap_or_default());
            row.push(opt(rm));
            row.push(p.engine.clone());
            row.push(p.signal.clone().unwrap_or_default());
            w.write_record(&row)?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

fn cell(v: Option<&Value>) -> String {
    match v {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(other) => other.to_string(),
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn running_max_is_monotone_and_skips_signals() {
        let mut r = ConstantReport::new("t", "ratio");
        r.push(GridPoint::new("exact").with_value(1.0));
        r.push(GridPoint::new("exact").with_signal("divergent"));
        r.push(GridPoint::new("exact").with_value(0.5));
        r.push(GridPoint::new("exact").with_value(2.0));
        assert_eq!(r.running_max(), vec![Some(1.0), Some(1.0), Some(1.0), Some(2.0)]);
        assert_eq!(r.max(), Some(2.0));
    }

    #[test]
    fn csv_and_jsonl_shapes() {
        let mut r = ConstantReport::new("counterexample", "ratio");
        r.push(GridPoint::new("radial").input("j", 3).output("measure", "4").with_value(4.0 / 3.0));
        let csv = r.to_csv().unwrap();
        let header = csv.lines().next().unwrap();
        assert_eq!(header, "index,j,measure,ratio,lower,upper,exact,running_max,engine,signal");
        let line: Value = serde_json::from_str(r.to_jsonl().lines().next().unwrap()).unwrap();
        assert_eq!(line["inputs"]["j"], 3);
        assert_eq!(line["experiment"], "counterexample");
    }
}
