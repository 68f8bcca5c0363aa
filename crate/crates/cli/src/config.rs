//! Experiment configuration: TOML parsing and per-kind validation.
//!
//! Every problem is reported against the dotted field path it concerns, and
//! all checks run before any computation starts.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;
use toml::Value;
use treehl_core::numerics::{exponent_to_f64, parse_exponent, parse_rational};
use treehl_core::{Exact, Exponent, MaximalKind, RadialProfile, Scalar, TreeParams, Weight};
use treehl_lab::abstract_trees::{FiniteTree, TreeMetric};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Sandwich,
    Borders,
    WeakType,
    Counterexample,
    RadialScan,
    GammaScan,
    Necessity,
    Strong,
    Vector,
    AbstractExpansion,
    AbstractWeakType,
}

pub const KINDS: [(&str, Kind); 11] = [
    ("sandwich", Kind::Sandwich),
    ("borders", Kind::Borders),
    ("weak-type", Kind::WeakType),
    ("counterexample", Kind::Counterexample),
    ("radial-scan", Kind::RadialScan),
    ("gamma-scan", Kind::GammaScan),
    ("necessity", Kind::Necessity),
    ("strong", Kind::Strong),
    ("vector", Kind::Vector),
    ("abstract-expansion", Kind::AbstractExpansion),
    ("abstract-weak-type", Kind::AbstractWeakType),
];

impl FromStr for Kind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        KINDS.iter().find(|(name, _)| *name == s).map(|(_, k)| *k).ok_or_else(|| {
            let names: Vec<&str> = KINDS.iter().map(|(n, _)| *n).collect();
            CliError::config("kind", format!("unknown kind {s:?}; expected one of {}", names.join(", ")))
        })
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = KINDS.iter().find(|(_, k)| k == self).map(|(n, _)| *n).unwrap_or("?");
        f.write_str(name)
    }
}

impl Kind {
    fn is_abstract(self) -> bool {
        matches!(self, Kind::AbstractExpansion | Kind::AbstractWeakType)
    }

    /// Backends the kind can run on; the first is the default.
    fn backends(self) -> &'static [Backend] {
        match self {
            Kind::Sandwich | Kind::Counterexample => &[Backend::Exact],
            Kind::RadialScan | Kind::GammaScan => &[Backend::Log],
            Kind::Necessity => &[Backend::Float, Backend::Exact],
            _ => &[Backend::Float],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Exact,
    Log,
    Float,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Exact => "exact",
            Backend::Log => "log",
            Backend::Float => "float",
        }
    }
}

// ---------------------------------------------------------------------------
// Raw TOML shape

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    kind: String,
    #[serde(default)]
    seed: u64,
    backend: Option<String>,
    threads: Option<usize>,
    #[serde(default)]
    tree: RawTree,
    weight: Option<RawWeight>,
    #[serde(default)]
    grid: RawGrid,
    #[serde(default)]
    params: RawParams,
    #[serde(default)]
    output: RawOutput,
    #[serde(default)]
    verdict: VerdictBounds,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTree {
    k: Option<Value>,
    spec: Option<String>,
    file: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWeight {
    #[serde(rename = "type")]
    kind: String,
    beta: Option<Value>,
    value: Option<Value>,
    seed: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    j: Option<Value>,
    r: Option<Value>,
    n: Option<Value>,
    s: Option<Value>,
    p: Option<Value>,
    q: Option<Value>,
    beta: Option<Value>,
    gamma: Option<Value>,
    alpha: Option<Value>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    depth: Option<usize>,
    r_max: Option<usize>,
    j_max: Option<usize>,
    j: Option<usize>,
    domain: Option<usize>,
    samples: Option<usize>,
    c_depth: Option<usize>,
    maximal: Option<String>,
    pool: Option<String>,
    weak_constant: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: Option<PathBuf>,
}

/// Optional user assertions on the maximum value of the run.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerdictBounds {
    pub max_value: Option<f64>,
    pub min_value: Option<f64>,
}

// ---------------------------------------------------------------------------
// Validated plan

#[derive(Clone, Debug, PartialEq)]
pub enum WeightSpec {
    Constant(Exact),
    Power(Exponent),
    Counterexample,
    /// Seeded positive weights on a finite tree.
    Random(u64),
    /// The built-in corpus `w_0, w_{-1/2}, w_{-1}`.
    Corpus,
}

impl WeightSpec {
    pub fn label(&self) -> String {
        match self {
            WeightSpec::Constant(c) => format!("constant {c}"),
            WeightSpec::Power(b) => format!("w_{b}"),
            WeightSpec::Counterexample => "k^-j".into(),
            WeightSpec::Random(s) => format!("random seed {s}"),
            WeightSpec::Corpus => "corpus".into(),
        }
    }
}

/// A radial weight on the k-ary tree in the backend `S`.
pub fn kary_weight<S: Scalar>(spec: &WeightSpec, k: u32) -> Result<Weight<S>, CliError> {
    let params = TreeParams::new(k).map_err(|e| CliError::config("tree.k", e))?;
    let profile = match spec {
        WeightSpec::Constant(c) => {
            let c = S::from_rational(c).map_err(|e| CliError::config("weight.value", e))?;
            RadialProfile::<S>::constant(c).map_err(|e| CliError::config("weight.value", e))?
        }
        WeightSpec::Power(beta) => RadialProfile::<S>::power_weight(*beta, &params)
            .map_err(|e| CliError::config("weight.beta", format!("{e} (backend {})", S::NAME)))?,
        WeightSpec::Counterexample => RadialProfile::<S>::counterexample(&params),
        WeightSpec::Random(_) | WeightSpec::Corpus => {
            return Err(CliError::config("weight.type", "not a radial weight on the k-ary tree"))
        }
    };
    Ok(profile.into())
}

#[derive(Clone, Debug, Default)]
pub struct Grids {
    pub j: Option<Vec<usize>>,
    pub r: Option<Vec<usize>>,
    pub n: Option<Vec<usize>>,
    pub s: Option<Vec<Exponent>>,
    pub p: Option<Vec<Exponent>>,
    pub q: Option<Vec<Exponent>>,
    pub beta: Option<Vec<Exponent>>,
    pub gamma: Option<Vec<Exponent>>,
    pub alpha: Option<Vec<f64>>,
}

#[derive(Clone, Debug)]
pub struct Params {
    pub depth: Option<usize>,
    pub r_max: Option<usize>,
    pub j_max: Option<usize>,
    pub j: Option<usize>,
    pub domain: Option<usize>,
    pub samples: Option<usize>,
    pub c_depth: Option<usize>,
    pub maximal: MaximalKind,
    pub pool: Pool,
    pub weak_constant: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pool {
    /// The root and up to nine vertices of `S(root, r)`.
    Star,
    /// Every vertex of the tree.
    All,
}

#[derive(Clone, Debug)]
pub struct Plan {
    pub kind: Kind,
    pub seed: u64,
    pub backend: Backend,
    pub threads: Option<usize>,
    pub ks: Vec<u32>,
    pub tree: Option<FiniteTree>,
    pub tree_label: String,
    pub weight: WeightSpec,
    pub grid: Grids,
    pub params: Params,
    pub output_dir: PathBuf,
    pub verdict: VerdictBounds,
}

/// Parses and validates `text`; relative paths resolve against `base`.
pub fn parse_config(text: &str, base: &Path, stem: &str) -> Result<Plan, CliError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string().trim_end().to_string()))?;
    let kind: Kind = raw.kind.parse()?;
    let backend = match raw.backend.as_deref() {
        None => kind.backends()[0],
        Some(b) => {
            let allowed = kind.backends();
            allowed.iter().copied().find(|a| a.name() == b).ok_or_else(|| {
                let names: Vec<&str> = allowed.iter().map(|a| a.name()).collect();
                CliError::config("backend", format!("kind={kind} supports {}, got {b:?}", names.join(" | ")))
            })?
        }
    };
    if raw.threads == Some(0) {
        return Err(CliError::config("threads", "must be >= 1"));
    }

    let grid = Grids {
        j: raw.grid.j.as_ref().map(|v| int_grid("grid.j", v)).transpose()?,
        r: raw.grid.r.as_ref().map(|v| int_grid("grid.r", v)).transpose()?,
        n: raw.grid.n.as_ref().map(|v| int_grid("grid.n", v)).transpose()?,
        s: raw.grid.s.as_ref().map(|v| exponent_grid("grid.s", v)).transpose()?,
        p: raw.grid.p.as_ref().map(|v| exponent_grid("grid.p", v)).transpose()?,
        q: raw.grid.q.as_ref().map(|v| exponent_grid("grid.q", v)).transpose()?,
        beta: raw.grid.beta.as_ref().map(|v| exponent_grid("grid.beta", v)).transpose()?,
        gamma: raw.grid.gamma.as_ref().map(|v| exponent_grid("grid.gamma", v)).transpose()?,
        alpha: raw.grid.alpha.as_ref().map(|v| float_grid("grid.alpha", v)).transpose()?,
    };
    let maximal = match raw.params.maximal.as_deref() {
        None | Some("sphere") => MaximalKind::Sphere,
        Some("ball") => MaximalKind::Ball,
        Some(other) => return Err(CliError::config("params.maximal", format!("expected sphere | ball, got {other:?}"))),
    };
    let pool = match raw.params.pool.as_deref() {
        None | Some("star") => Pool::Star,
        Some("all") => Pool::All,
        Some(other) => return Err(CliError::config("params.pool", format!("expected star | all, got {other:?}"))),
    };
    let params = Params {
        depth: raw.params.depth,
        r_max: raw.params.r_max,
        j_max: raw.params.j_max,
        j: raw.params.j,
        domain: raw.params.domain,
        samples: raw.params.samples,
        c_depth: raw.params.c_depth,
        maximal,
        pool,
        weak_constant: raw.params.weak_constant,
    };

    let (ks, tree, tree_label) = if kind.is_abstract() {
        if raw.tree.k.is_some() {
            return Err(CliError::config("tree.k", format!("kind={kind} runs on a finite tree; use tree.spec or tree.file")));
        }
        let (tree, label) = match (&raw.tree.spec, &raw.tree.file) {
            (Some(spec), None) => (FiniteTree::from_spec(spec).map_err(|e| CliError::config("tree.spec", e))?, spec.clone()),
            (None, Some(file)) => {
                let path = base.join(file);
                let text = std::fs::read_to_string(&path).map_err(|e| CliError::config("tree.file", format!("{}: {e}", path.display())))?;
                (FiniteTree::parse_edge_list(&text).map_err(|e| CliError::config("tree.file", e))?, file.display().to_string())
            }
            (Some(_), Some(_)) => return Err(CliError::config("tree", "give only one of spec and file")),
            (None, None) => return Err(CliError::config("tree", format!("kind={kind} requires tree.spec or tree.file"))),
        };
        TreeMetric::new(&tree).map_err(|e| CliError::config("tree", e))?;
        (Vec::new(), Some(tree), label)
    } else {
        if raw.tree.spec.is_some() || raw.tree.file.is_some() {
            return Err(CliError::config("tree", format!("kind={kind} runs on the k-ary tree; use tree.k")));
        }
        let ks = match &raw.tree.k {
            Some(v) => int_grid("tree.k", v)?,
            None => vec![2],
        };
        let min_k = if kind == Kind::Sandwich { 1 } else { 2 };
        let mut out = Vec::new();
        for k in ks {
            if k < min_k {
                return Err(CliError::config("tree.k", format!("k ≥ {min_k} required (got {k})")));
            }
            out.push(u32::try_from(k).map_err(|_| CliError::config("tree.k", "too large"))?);
        }
        let label = out.iter().map(|k| format!("{k}-ary")).collect::<Vec<_>>().join(",");
        (out, None, label)
    };

    let weight = match &raw.weight {
        None => default_weight(kind),
        Some(w) => weight_spec(w, kind)?,
    };
    if !matches!(weight, WeightSpec::Random(_) | WeightSpec::Corpus) {
        for &k in &ks {
            match backend {
                Backend::Exact => drop(kary_weight::<Exact>(&weight, k)?),
                _ => drop(kary_weight::<f64>(&weight, k)?),
            }
        }
    }

    let output_dir = match raw.output.dir {
        Some(d) => base.join(d),
        None => base.join(format!("{stem}.out")),
    };
    let plan = Plan {
        kind,
        seed: raw.seed,
        backend,
        threads: raw.threads,
        ks,
        tree,
        tree_label,
        weight,
        grid,
        params,
        output_dir,
        verdict: raw.verdict,
    };
    validate_kind(&plan)?;
    Ok(plan)
}

fn default_weight(kind: Kind) -> WeightSpec {
    match kind {
        Kind::Borders => WeightSpec::Corpus,
        Kind::Counterexample => WeightSpec::Counterexample,
        Kind::Necessity => WeightSpec::Power(Exponent::new(-1, 2)),
        Kind::AbstractExpansion => WeightSpec::Constant(Exact::from_u64(1)),
        Kind::AbstractWeakType => WeightSpec::Random(0),
        _ => WeightSpec::Constant(Exact::from_u64(1)),
    }
}

fn weight_spec(w: &RawWeight, kind: Kind) -> Result<WeightSpec, CliError> {
    let spec = match w.kind.as_str() {
        "constant" => {
            let v = w.value.as_ref().ok_or_else(|| CliError::config("weight.value", "required for type = \"constant\""))?;
            let c = rational_value("weight.value", v)?;
            if c <= Exact::from_u64(0) {
                return Err(CliError::config("weight.value", "must be positive"));
            }
            WeightSpec::Constant(c)
        }
        "power" => {
            let b = w.beta.as_ref().ok_or_else(|| CliError::config("weight.beta", "required for type = \"power\""))?;
            WeightSpec::Power(exponent_value("weight.beta", b)?)
        }
        "counterexample" => WeightSpec::Counterexample,
        "random" => WeightSpec::Random(w.seed.unwrap_or(0)),
        "corpus" => WeightSpec::Corpus,
        other => {
            return Err(CliError::config(
                "weight.type",
                format!("expected constant | power | counterexample | random | corpus, got {other:?}"),
            ))
        }
    };
    let ok = match kind {
        Kind::Counterexample => matches!(spec, WeightSpec::Counterexample),
        Kind::Borders => !matches!(spec, WeightSpec::Random(_)),
        Kind::AbstractExpansion | Kind::AbstractWeakType => matches!(spec, WeightSpec::Constant(_) | WeightSpec::Random(_)),
        Kind::RadialScan | Kind::GammaScan | Kind::Vector => false,
        _ => !matches!(spec, WeightSpec::Random(_) | WeightSpec::Corpus),
    };
    if !ok {
        return Err(CliError::config("weight.type", format!("{:?} is not supported by kind={kind}", w.kind)));
    }
    Ok(spec)
}

fn require<'a, T>(v: &'a Option<Vec<T>>, field: &str, kind: Kind) -> Result<&'a [T], CliError> {
    v.as_deref().ok_or_else(|| CliError::config(field, format!("required for kind={kind}")))
}

fn forbid<T>(v: &Option<T>, field: &str, kind: Kind) -> Result<(), CliError> {
    match v {
        Some(_) => Err(CliError::config(field, format!("not used by kind={kind}"))),
        None => Ok(()),
    }
}

fn above_one(values: &[Exponent], field: &str) -> Result<(), CliError> {
    match values.iter().find(|v| **v <= Exponent::from(1)) {
        Some(v) => Err(CliError::config(field, format!("values must be > 1 (got {v})"))),
        None => Ok(()),
    }
}

fn positive(values: &[Exponent], field: &str) -> Result<(), CliError> {
    match values.iter().find(|v| **v <= Exponent::from(0)) {
        Some(v) => Err(CliError::config(field, format!("values must be > 0 (got {v})"))),
        None => Ok(()),
    }
}

/// Required grids per kind; grids that a kind ignores are rejected so typos
/// do not pass silently.
fn validate_kind(plan: &Plan) -> Result<(), CliError> {
    let g = &plan.grid;
    let kind = plan.kind;
    let used: &[&str] = match kind {
        Kind::Sandwich => &[],
        Kind::Borders => &["s"],
        Kind::WeakType => &["s"],
        Kind::Counterexample => &["j", "n"],
        Kind::RadialScan => &["beta"],
        Kind::GammaScan => &["gamma"],
        Kind::Necessity => &["j", "r"],
        Kind::Strong => &["p", "s"],
        Kind::Vector => &["p", "q"],
        Kind::AbstractExpansion => &["r", "s", "alpha"],
        Kind::AbstractWeakType => &["s", "alpha"],
    };
    let present = [
        ("j", g.j.is_some()),
        ("r", g.r.is_some()),
        ("n", g.n.is_some()),
        ("s", g.s.is_some()),
        ("p", g.p.is_some()),
        ("q", g.q.is_some()),
        ("beta", g.beta.is_some()),
        ("gamma", g.gamma.is_some()),
        ("alpha", g.alpha.is_some()),
    ];
    for (name, is_set) in present {
        if is_set && !used.contains(&name) {
            return Err(CliError::config(&format!("grid.{name}"), format!("not used by kind={kind}")));
        }
    }
    if let Some(s) = &g.s {
        above_one(s, "grid.s")?;
    }
    if let Some(a) = &g.alpha {
        if let Some(v) = a.iter().find(|v| !(**v > 0.0 && **v < 1.0)) {
            return Err(CliError::config("grid.alpha", format!("values must lie in (0, 1) (got {v})")));
        }
    }
    let p = &plan.params;
    match kind {
        Kind::Counterexample => {
            require(&g.j, "grid.j", kind)?;
            if let Some(n) = &g.n {
                if n.contains(&0) {
                    return Err(CliError::config("grid.n", "iterates start at n = 1"));
                }
            }
        }
        Kind::RadialScan => {
            require(&g.beta, "grid.beta", kind)?;
            if p.r_max.is_some_and(|r| r < 2) || p.j_max.is_some_and(|j| j < 1) {
                return Err(CliError::config("params", "r_max >= 2 and j_max >= 1 required"));
            }
        }
        Kind::GammaScan => {
            above_one(require(&g.gamma, "grid.gamma", kind)?, "grid.gamma")?;
            if p.r_max.is_some_and(|r| r < 2) {
                return Err(CliError::config("params.r_max", "r_max >= 2 required"));
            }
        }
        Kind::Necessity => {
            require(&g.j, "grid.j", kind)?;
            require(&g.r, "grid.r", kind)?;
        }
        Kind::Strong => above_one(require(&g.p, "grid.p", kind)?, "grid.p")?,
        Kind::Vector => {
            above_one(require(&g.p, "grid.p", kind)?, "grid.p")?;
            positive(require(&g.q, "grid.q", kind)?, "grid.q")?;
        }
        Kind::AbstractExpansion => {
            require(&g.r, "grid.r", kind)?;
        }
        _ => {}
    }
    if !matches!(kind, Kind::Necessity) {
        forbid(&p.weak_constant, "params.weak_constant", kind)?;
    }
    if !matches!(kind, Kind::AbstractExpansion) && p.pool != Pool::Star {
        return Err(CliError::config("params.pool", format!("not used by kind={kind}")));
    }
    if matches!(kind, Kind::Sandwich | Kind::WeakType | Kind::Strong | Kind::Vector | Kind::Borders | Kind::AbstractWeakType)
        && p.samples == Some(0)
    {
        return Err(CliError::config("params.samples", "must be >= 1"));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Grid values

/// An integer, a list of integers, or an inclusive range `"a..b"`.
fn int_grid(field: &str, v: &Value) -> Result<Vec<usize>, CliError> {
    let one = |x: &Value| -> Result<usize, CliError> {
        match x {
            Value::Integer(i) if *i >= 0 => Ok(*i as usize),
            other => Err(CliError::config(field, format!("expected a nonnegative integer, got {other}"))),
        }
    };
    let out = match v {
        Value::Array(items) => items.iter().map(one).collect::<Result<Vec<_>, _>>()?,
        Value::String(s) => {
            let (a, b) = s
                .split_once("..")
                .ok_or_else(|| CliError::config(field, format!("expected \"a..b\", got {s:?}")))?;
            let b = b.strip_prefix('=').unwrap_or(b);
            let parse = |t: &str| {
                t.trim().parse::<usize>().map_err(|_| CliError::config(field, format!("bad range bound {t:?}")))
            };
            let (a, b) = (parse(a)?, parse(b)?);
            if a > b {
                return Err(CliError::config(field, format!("empty range {s:?}")));
            }
            (a..=b).collect()
        }
        other => vec![one(other)?],
    };
    if out.is_empty() {
        return Err(CliError::config(field, "empty grid"));
    }
    Ok(out)
}

fn exponent_value(field: &str, v: &Value) -> Result<Exponent, CliError> {
    let text = match v {
        Value::Integer(i) => i.to_string(),
        Value::Float(f) => f.to_string(),
        Value::String(s) => s.clone(),
        other => return Err(CliError::config(field, format!("expected a number or \"a/b\", got {other}"))),
    };
    parse_exponent(&text).map_err(|e| CliError::config(field, e))
}

fn rational_value(field: &str, v: &Value) -> Result<Exact, CliError> {
    let text = match v {
        Value::Integer(i) => i.to_string(),
        Value::Float(f) => f.to_string(),
        Value::String(s) => s.clone(),
        other => return Err(CliError::config(field, format!("expected a number or \"a/b\", got {other}"))),
    };
    parse_rational(&text).map_err(|e| CliError::config(field, e))
}

fn exponent_grid(field: &str, v: &Value) -> Result<Vec<Exponent>, CliError> {
    let out = match v {
        Value::Array(items) => items.iter().map(|x| exponent_value(field, x)).collect::<Result<Vec<_>, _>>()?,
        other => vec![exponent_value(field, other)?],
    };
    if out.is_empty() {
        return Err(CliError::config(field, "empty grid"));
    }
    Ok(out)
}

fn float_grid(field: &str, v: &Value) -> Result<Vec<f64>, CliError> {
    Ok(exponent_grid(field, v)?.into_iter().map(exponent_to_f64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Plan, CliError> {
        parse_config(text, Path::new("/tmp"), "t")
    }

    fn message(text: &str) -> String {
        match parse(text) {
            Err(CliError::Config(m)) => m,
            other => panic!("expected a config error, got {other:?}"),
        }
    }

    #[test]
    fn grids_accept_ranges_lists_and_scalars() {
        let v: Value = toml::from_str::<toml::Table>("a = \"1..4\"").unwrap()["a"].clone();
        assert_eq!(int_grid("g", &v).unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(int_grid("g", &Value::Integer(3)).unwrap(), vec![3]);
        let v = Value::Array(vec![Value::String("-1/2".into()), Value::Float(1.5), Value::Integer(2)]);
        assert_eq!(exponent_grid("g", &v).unwrap(), vec![Exponent::new(-1, 2), Exponent::new(3, 2), Exponent::from(2)]);
        assert!(exponent_grid("g", &Value::Array(vec![])).is_err());
    }

    #[test]
    fn field_level_diagnostics() {
        assert!(message("kind = \"weak-type\"\n[tree]\nk = 1").contains("tree.k: k ≥ 2 required"));
        assert!(message("kind = \"counterexample\"").starts_with("grid.j: required"));
        assert!(message("kind = \"nope\"").starts_with("kind: unknown kind"));
        assert!(message("kind = \"strong\"\n[grid]\np = [1]").starts_with("grid.p: values must be > 1"));
        assert!(message("kind = \"radial-scan\"\nbackend = \"exact\"\n[grid]\nbeta = [0]").starts_with("backend:"));
        assert!(message("kind = \"sandwich\"\n[grid]\nj = [1]").starts_with("grid.j: not used"));
        assert!(message("kind = \"gamma-scan\"\n[grid]\ngamma = [1]").starts_with("grid.gamma: values must be > 1"));
        assert!(message("kind = \"abstract-expansion\"\n[grid]\nr = [1]").starts_with("tree: kind=abstract-expansion requires"));
        assert!(message("kind = \"sandwich\"\nbogus = 1").contains("bogus"));
        assert!(message("kind = \"necessity\"\nbackend = \"exact\"\n[grid]\nj = [1]\nr = [1]")
            .starts_with("weight.beta"));
    }

    #[test]
    fn defaults() {
        let plan = parse("kind = \"counterexample\"\n[grid]\nj = \"1..3\"").unwrap();
        assert_eq!(plan.ks, vec![2]);
        assert_eq!(plan.backend, Backend::Exact);
        assert_eq!(plan.weight, WeightSpec::Counterexample);
        assert_eq!(plan.output_dir, Path::new("/tmp/t.out"));
        let plan = parse("kind = \"abstract-expansion\"\n[tree]\nspec = \"kary 2 3\"\n[grid]\nr = [0, 1]").unwrap();
        assert_eq!(plan.tree.unwrap().len(), 15);
    }

    #[test]
    fn shipped_configs_validate() {
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
        let mut seen = 0;
        for entry in std::fs::read_dir(&dir).unwrap() {
            let path = entry.unwrap().path();
            if path.extension().is_some_and(|e| e == "toml") {
                let text = std::fs::read_to_string(&path).unwrap();
                parse_config(&text, &dir, "x").unwrap_or_else(|e| panic!("{}: {e}", path.display()));
                seen += 1;
            }
        }
        assert_eq!(seen, KINDS.len());
    }
}
