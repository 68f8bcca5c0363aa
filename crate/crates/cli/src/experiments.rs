//! One runner per experiment kind. Each returns the grid points in canonical
//! order plus its verdict lines; failures at single grid points become
//! signals on those points.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;
use treehl_core::operators::{ball_maximal, spherical_maximal};
use treehl_core::tree::truncation;
use treehl_core::{Exact, Exponent, PointFunction, Scalar, TreeParams, Weight};
use treehl_lab::abstract_trees::{
    abstract_weak_type_report, expansion_constant, random_pair, ExpansionQuery, FiniteTree, GammaOptions, Strategy,
    TreeMetric,
};
use treehl_lab::inequality::{
    borders_scan, counterexample_scan, gamma_growth_scan, necessity_check, radial_weight_scan, spine, strong_ratio,
    vector_valued_ratio, BordersConfig, MaximalScan,
};
use treehl_lab::verify::{
    random_function, star_pool, weak_type_f_corpus, weight_corpus, ABSTRACT_PAIRS, ABSTRACT_RATIO_BOUND,
    EXPONENT_BAND, PLATEAU_TOLERANCE, RADIAL_R_MAX, SANDWICH_TRIALS, WEAK_CORPUS,
};
use treehl_lab::{ConstantReport, GridPoint, LabError};

use crate::config::{kary_weight, Backend, Kind, Plan, Pool, WeightSpec};
use crate::error::CliError;

/// Enumeration cap for balls and superlevel sets.
const CAP: usize = 1 << 22;

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub label: String,
    pub passed: bool,
    pub detail: String,
}

impl Verdict {
    fn new(label: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { label: label.into(), passed, detail: detail.into() }
    }

    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        if self.detail.is_empty() {
            format!("{}: {status}", self.label)
        } else {
            format!("{}: {status} ({})", self.label, self.detail)
        }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: ConstantReport,
    pub verdicts: Vec<Verdict>,
}

pub fn run(plan: &Plan) -> Result<Outcome, CliError> {
    let mut out = match plan.kind {
        Kind::Sandwich => sandwich(plan),
        Kind::Borders => borders(plan),
        Kind::WeakType => weak_type(plan),
        Kind::Counterexample => counterexample(plan),
        Kind::RadialScan => radial_scan(plan),
        Kind::GammaScan => gamma_scan(plan),
        Kind::Necessity => match plan.backend {
            Backend::Exact => necessity::<Exact>(plan),
            _ => necessity::<f64>(plan),
        },
        Kind::Strong => strong(plan),
        Kind::Vector => vector(plan),
        Kind::AbstractExpansion => abstract_expansion(plan),
        Kind::AbstractWeakType => abstract_weak_type(plan),
    }?;
    out.verdicts.extend(user_verdicts(plan, &out.report));
    Ok(out)
}

fn params(k: u32) -> TreeParams {
    TreeParams::new(k).expect("validated k")
}

fn signal(p: GridPoint, e: LabError) -> GridPoint {
    match e {
        LabError::UndefinedRatio(m) => p.with_signal(format!("undefined-ratio: {m}")),
        other => p.with_signal(format!("error: {other}")),
    }
}

fn finite_max(report: &ConstantReport) -> (bool, String) {
    let values: Vec<f64> = report.points.iter().filter_map(|p| p.value).collect();
    let ok = values.iter().all(|v| v.is_finite());
    let detail = match report.max() {
        Some(m) => format!("max {m:.6} over {} values", values.len()),
        None => "no values".into(),
    };
    (ok && !values.is_empty(), detail)
}

fn user_verdicts(plan: &Plan, report: &ConstantReport) -> Vec<Verdict> {
    let mut out = Vec::new();
    let max = report.max();
    let shown = max.map_or("none".to_string(), |m| format!("{m:.6}"));
    if let Some(bound) = plan.verdict.max_value {
        out.push(Verdict::new(format!("max {} <= {bound}", report.value_name), max.is_some_and(|m| m <= bound), shown.clone()));
    }
    if let Some(bound) = plan.verdict.min_value {
        out.push(Verdict::new(format!("max {} >= {bound}", report.value_name), max.is_some_and(|m| m >= bound), shown));
    }
    out
}

fn extend(into: &mut ConstantReport, from: ConstantReport) {
    into.points.extend(from.points);
    for f in from.flags {
        into.flag(f);
    }
}

fn seeded(seed: u64, a: u64, b: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ a.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ b.wrapping_mul(0xc2b2_ae3d_27d4_eb4f))
}

// ---------------------------------------------------------------------------

fn sandwich(plan: &Plan) -> Result<Outcome, CliError> {
    let trials = plan.params.samples.unwrap_or(SANDWICH_TRIALS);
    let mut report = ConstantReport::new(plan.kind.to_string(), "ratio");
    let two = Exact::from_u64(2);
    let mut lower_ok = true;
    let mut upper_ok = true;
    for &k in &plan.ks {
        let depth = plan.params.depth.unwrap_or(if k >= 5 { 4 } else { 5 });
        let window = truncation(depth, &params(k));
        let rows: Vec<(GridPoint, bool, bool)> = (0..trials)
            .into_par_iter()
            .map(|t| {
                let f = random_function(&mut seeded(plan.seed, k as u64, t as u64), k, depth + 2, k);
                let (mut lo, mut hi) = (0usize, 0usize);
                let mut worst: Option<Exact> = None;
                for x in &window {
                    let m = ball_maximal(&f, x);
                    let mc = spherical_maximal(&f, x);
                    lo += usize::from(m > mc);
                    hi += usize::from(mc > two.clone() * m.clone());
                    let ratio = mc / m;
                    if worst.as_ref().is_none_or(|w| ratio > *w) {
                        worst = Some(ratio);
                    }
                }
                let worst = worst.expect("nonempty window");
                let p = GridPoint::new("point-exact")
                    .input("k", k)
                    .input("trial", t)
                    .output("support", f.support_len())
                    .output("vertices", window.len())
                    .output("violations", lo + hi)
                    .with_value(worst.to_f64())
                    .with_exact(worst.to_string());
                (p, lo == 0, hi == 0)
            })
            .collect();
        for (p, lo, hi) in rows {
            lower_ok &= lo;
            upper_ok &= hi;
            report.push(p);
        }
    }
    let max = report.max().unwrap_or(f64::NAN);
    let verdicts = vec![
        Verdict::new("M <= M∘ at every vertex", lower_ok, ""),
        Verdict::new("max observed M∘/M ratio <= 2", upper_ok && max <= 2.0, format!("max {max:.6}")),
    ];
    Ok(Outcome { report, verdicts })
}

fn borders(plan: &Plan) -> Result<Outcome, CliError> {
    let mut report = ConstantReport::new(plan.kind.to_string(), "ratio");
    for &k in &plan.ks {
        let weights = match &plan.weight {
            WeightSpec::Corpus => weight_corpus(plan.seed, k).into_iter().take(3).collect(),
            spec => vec![(spec.label(), kary_weight::<f64>(spec, k)?)],
        };
        let cfg = BordersConfig {
            k,
            depth: plan.params.depth.unwrap_or(7),
            r_max: plan.params.r_max.unwrap_or(5),
            s_list: plan.grid.s.clone().unwrap_or_else(|| vec![Exponent::new(3, 2), Exponent::from(2), Exponent::from(3)]),
            samples: plan.params.samples.unwrap_or(1000),
            seed: plan.seed,
            weights,
        };
        match borders_scan(&cfg) {
            Ok(r) => extend(&mut report, r),
            Err(e) => report.push(signal(GridPoint::new("point-f64").input("k", k), e)),
        }
    }
    let (ok, detail) = finite_max(&report);
    Ok(Outcome { report, verdicts: vec![Verdict::new("pair-count ratio finite", ok, detail)] })
}

fn weak_domain(k: u32) -> usize {
    match k {
        2 => 11,
        3 => 7,
        _ => 5,
    }
}

fn weak_type(plan: &Plan) -> Result<Outcome, CliError> {
    let mut report = ConstantReport::new(plan.kind.to_string(), "ratio");
    let s_list = plan.grid.s.clone().unwrap_or_else(|| vec![Exponent::from(2)]);
    let kind = plan.params.maximal;
    for &k in &plan.ks {
        let w = kary_weight::<f64>(&plan.weight, k)?;
        let d = plan.params.domain.unwrap_or_else(|| weak_domain(k));
        let fs = weak_type_f_corpus(plan.seed, plan.params.samples.unwrap_or(WEAK_CORPUS), k);
        let scans: Vec<Result<MaximalScan, LabError>> = fs.par_iter().map(|f| MaximalScan::new(f, kind, d, CAP)).collect();
        for &s in &s_list {
            let rows: Vec<GridPoint> = scans
                .par_iter()
                .enumerate()
                .map(|(i, scan)| {
                    let p = GridPoint::new("point-exact")
                        .input("k", k)
                        .input("s", s.to_string())
                        .input("f", i)
                        .input("weight", plan.weight.label())
                        .input("maximal", kind.label())
                        .input("domain", d);
                    match scan.as_ref().map_err(Clone::clone).and_then(|sc| sc.curve(&w, s)) {
                        Ok(c) => {
                            let arg = c.argmax.map(|a| c.breakpoints[a].value.to_string());
                            p.output("breakpoints", c.breakpoints.len())
                                .output("lambda_floor", c.lambda_floor.to_string())
                                .output("argmax_lambda", arg)
                                .output("denominator", c.denominator)
                                .with_value(c.max)
                        }
                        Err(e) => signal(p, e),
                    }
                })
                .collect();
            report.points.extend(rows);
        }
    }
    report.flag("values are lower bounds of the supremum over lambda");
    let (ok, detail) = finite_max(&report);
    Ok(Outcome { report, verdicts: vec![Verdict::new("weak-type ratio finite", ok, detail)] })
}

fn counterexample(plan: &Plan) -> Result<Outcome, CliError> {
    let js = plan.grid.j.clone().expect("validated");
    let j_max = *js.iter().max().expect("nonempty");
    let c_depth = plan.params.c_depth.unwrap_or(j_max);
    let kind = plan.params.maximal;
    let mut report = ConstantReport::new(plan.kind.to_string(), "ratio");
    let mut verdicts = Vec::new();
    for &k in &plan.ks {
        for &n in plan.grid.n.as_deref().unwrap_or(&[1]) {
            let scan = match counterexample_scan(&js, n, k, kind, c_depth) {
                Ok(s) => s,
                Err(e) => {
                    report.push(signal(GridPoint::new("radial-exact").input("k", k).input("n", n), e));
                    verdicts.push(Verdict::new(format!("ratio growth >= linear (k={k}, n={n})"), false, "scan failed"));
                    continue;
                }
            };
            extend(&mut report, scan.report());
            // Every level up to j carries unit mass and sum f_j M^n w <= 3C.
            let c = scan.c_sup.to_f64();
            let linear = scan
                .rows
                .iter()
                .filter(|r| r.j <= c_depth)
                .all(|r| r.ratio_lower >= (r.j as f64 + 1.0) / (3.0 * c) * (1.0 - 1e-12));
            let growth = scan.rows.len() < 2 || scan.slope > 0.0;
            verdicts.push(Verdict::new(
                format!("ratio growth >= linear (k={k}, n={n})"),
                linear && growth,
                format!("ratio >= (j+1)/(3C) with C = {c:.6}, slope {:.6}", scan.slope),
            ));
            let mut rows: Vec<(usize, f64)> = scan.rows.iter().map(|r| (r.j, r.ratio_lower)).collect();
            rows.sort_by_key(|r| r.0);
            let tail = &rows[rows.len() / 2..];
            let monotone = tail.windows(2).all(|w| w[1].1 >= w[0].1 * (1.0 - 1e-12));
            verdicts.push(Verdict::new(
                format!("ratio nondecreasing over the upper half of j (k={k}, n={n})"),
                monotone,
                format!("{} rows from j = {}", tail.len(), tail[0].0),
            ));
        }
    }
    report.flag(format!("maximal={}", kind.label()));
    Ok(Outcome { report, verdicts })
}

fn radial_scan(plan: &Plan) -> Result<Outcome, CliError> {
    let r_max = plan.params.r_max.unwrap_or(RADIAL_R_MAX);
    let j_max = plan.params.j_max.unwrap_or(RADIAL_R_MAX);
    let mut report = ConstantReport::new(plan.kind.to_string(), "ratio");
    let mut verdicts = Vec::new();
    for &beta in plan.grid.beta.as_deref().expect("validated") {
        for &k in &plan.ks {
            match radial_weight_scan(beta, r_max, j_max, k) {
                Ok(scan) => {
                    verdicts.push(if scan.predicted_exponent == 0.0 {
                        Verdict::new(
                            format!("plateau (β={beta}, k={k})"),
                            scan.plateau <= PLATEAU_TOLERANCE,
                            format!("last/mid octave {:.4} <= {PLATEAU_TOLERANCE}", scan.plateau),
                        )
                    } else {
                        let rel = (scan.fitted_exponent - scan.predicted_exponent).abs() / scan.predicted_exponent;
                        Verdict::new(
                            format!("growth exponent (β={beta}, k={k})"),
                            rel <= EXPONENT_BAND,
                            format!("fitted {:.4} vs predicted {:.4}", scan.fitted_exponent, scan.predicted_exponent),
                        )
                    });
                    extend(&mut report, scan.report());
                }
                Err(e) => {
                    report.push(signal(GridPoint::new("radial-log").input("beta", beta.to_string()).input("k", k), e));
                    verdicts.push(Verdict::new(format!("radial scan (β={beta}, k={k})"), false, "scan failed"));
                }
            }
        }
    }
    Ok(Outcome { report, verdicts })
}

fn gamma_scan(plan: &Plan) -> Result<Outcome, CliError> {
    let r_max = plan.params.r_max.unwrap_or(RADIAL_R_MAX);
    let j = plan.params.j.unwrap_or(r_max);
    let mut report = ConstantReport::new(plan.kind.to_string(), "ratio");
    let mut verdicts = Vec::new();
    for &gamma in plan.grid.gamma.as_deref().expect("validated") {
        for &k in &plan.ks {
            let base = || GridPoint::new("radial-log").input("gamma", gamma.to_string()).input("k", k).input("j", j);
            match gamma_growth_scan(gamma, r_max, j, k) {
                Ok(scan) => {
                    for (r, v) in scan.ratios.iter().enumerate() {
                        report.push(base().input("r", r).with_value(*v));
                    }
                    let (fit, pred) = (scan.fitted_exponent, scan.predicted_exponent);
                    let ok = if pred.abs() > 1e-12 {
                        (fit - pred).abs() / pred.abs() <= EXPONENT_BAND
                    } else {
                        fit.abs() <= EXPONENT_BAND * (k as f64).ln()
                    };
                    verdicts.push(Verdict::new(
                        format!("growth exponent (γ={gamma}, k={k})"),
                        ok,
                        format!("fitted {fit:.4} vs predicted {pred:.4}"),
                    ));
                }
                Err(e) => {
                    report.push(signal(base(), e));
                    verdicts.push(Verdict::new(format!("growth exponent (γ={gamma}, k={k})"), false, "scan failed"));
                }
            }
        }
    }
    Ok(Outcome { report, verdicts })
}

fn necessity<S: Scalar>(plan: &Plan) -> Result<Outcome, CliError> {
    let mut report = ConstantReport::new(plan.kind.to_string(), "ratio");
    let (js, rs) = (plan.grid.j.as_deref().expect("validated"), plan.grid.r.as_deref().expect("validated"));
    let mut inclusion = true;
    let mut consistent = true;
    for &k in &plan.ks {
        let p = params(k);
        let w: Weight<S> = kary_weight(&plan.weight, k)?;
        let grid: Vec<(usize, usize)> = js.iter().flat_map(|&j| rs.iter().map(move |&r| (j, r))).collect();
        let rows: Vec<GridPoint> = grid
            .par_iter()
            .map(|&(j, r)| {
                let base = GridPoint::new(format!("necessity-{}", S::NAME)).input("k", k).input("j", j).input("r", r);
                match necessity_check(&w, &spine(j, 0, &p), r, &p, plan.params.weak_constant, CAP) {
                    Ok(res) => {
                        let mut pt = base
                            .output("inclusion", res.inclusion)
                            .output("inclusion_method", res.inclusion_method)
                            .output("consistent", res.consistent)
                            .with_value(res.ratio.to_f64());
                        if S::EXACT {
                            pt = pt.with_exact(res.ratio.to_decimal());
                        }
                        pt
                    }
                    Err(e) => signal(base, e),
                }
            })
            .collect();
        for pt in rows {
            inclusion &= pt.outputs.get("inclusion") == Some(&json!(true));
            consistent &= pt.outputs.get("consistent") != Some(&json!(false));
            report.push(pt);
        }
    }
    let mut verdicts = vec![Verdict::new("S(x0, r) inside {M∘δ > 1/(2k^r)}", inclusion, "")];
    if let Some(c) = plan.params.weak_constant {
        verdicts.push(Verdict::new(format!("ratio <= 2 * {c}"), consistent, ""));
    }
    Ok(Outcome { report, verdicts })
}

fn f64_corpus(plan: &Plan, k: u32, default: usize) -> Result<Vec<PointFunction<f64>>, CliError> {
    weak_type_f_corpus(plan.seed, plan.params.samples.unwrap_or(default), k)
        .iter()
        .map(|f| f.convert::<f64>().map_err(|e| CliError::Lab(e.into())))
        .collect()
}

fn strong(plan: &Plan) -> Result<Outcome, CliError> {
    let mut report = ConstantReport::new(plan.kind.to_string(), "ratio");
    let s_list = plan.grid.s.clone().unwrap_or_else(|| vec![Exponent::from(2)]);
    let d = plan.params.domain.unwrap_or(8);
    let kind = plan.params.maximal;
    for &k in &plan.ks {
        let w = kary_weight::<f64>(&plan.weight, k)?;
        let fs = f64_corpus(plan, k, WEAK_CORPUS)?;
        for &p in plan.grid.p.as_deref().expect("validated") {
            for &s in &s_list {
                let rows: Vec<GridPoint> = fs
                    .par_iter()
                    .enumerate()
                    .map(|(i, f)| {
                        let base = GridPoint::new("point-f64")
                            .input("k", k)
                            .input("p", p.to_string())
                            .input("s", s.to_string())
                            .input("f", i)
                            .input("weight", plan.weight.label());
                        match strong_ratio(f, &w, p, s, kind, d, CAP) {
                            Ok(r) => norm_point(base, &r),
                            Err(e) => signal(base, e),
                        }
                    })
                    .collect();
                report.points.extend(rows);
            }
        }
    }
    let (ok, detail) = finite_max(&report);
    Ok(Outcome { report, verdicts: vec![Verdict::new("strong-type ratio finite", ok, detail)] })
}

fn norm_point(p: GridPoint, r: &treehl_lab::inequality::NormRatio) -> GridPoint {
    p.output("lhs_lower", r.lhs_lower)
        .output("lhs_upper", r.lhs_upper)
        .output("rhs", r.rhs)
        .output("domain_size", r.domain_size)
        .with_value(r.ratio_lower)
        .with_bounds(r.ratio_lower, r.ratio_upper)
}

fn vector(plan: &Plan) -> Result<Outcome, CliError> {
    let mut report = ConstantReport::new(plan.kind.to_string(), "ratio");
    let d = plan.params.domain.unwrap_or(8);
    let kind = plan.params.maximal;
    for &k in &plan.ks {
        let fs = f64_corpus(plan, k, 4)?;
        let grid: Vec<(Exponent, Exponent)> = plan
            .grid
            .p
            .as_deref()
            .expect("validated")
            .iter()
            .flat_map(|&p| plan.grid.q.as_deref().expect("validated").iter().map(move |&q| (p, q)))
            .collect();
        let rows: Vec<GridPoint> = grid
            .par_iter()
            .map(|&(p, q)| {
                let base = GridPoint::new("point-f64")
                    .input("k", k)
                    .input("p", p.to_string())
                    .input("q", q.to_string())
                    .input("components", fs.len());
                match vector_valued_ratio(&fs, p, q, kind, d, CAP) {
                    Ok(r) => norm_point(base, &r),
                    Err(e) => signal(base, e),
                }
            })
            .collect();
        report.points.extend(rows);
    }
    let (ok, detail) = finite_max(&report);
    Ok(Outcome { report, verdicts: vec![Verdict::new("vector-valued ratio finite", ok, detail)] })
}

fn finite_weight(plan: &Plan, tree: &FiniteTree) -> Vec<f64> {
    match &plan.weight {
        WeightSpec::Constant(c) => vec![c.to_f64(); tree.len()],
        WeightSpec::Random(seed) => random_pair(tree.len(), *seed).1,
        _ => unreachable!("validated weight"),
    }
}

fn abstract_expansion(plan: &Plan) -> Result<Outcome, CliError> {
    let tree = plan.tree.as_ref().expect("validated");
    let metric = TreeMetric::new(tree)?;
    let w = finite_weight(plan, tree);
    let s_list = plan.grid.s.clone().unwrap_or_else(|| vec![Exponent::from(2)]);
    let alphas = plan.grid.alpha.clone().unwrap_or_else(|| vec![1.0 / 3.0]);
    let mut grid = Vec::new();
    for &s in &s_list {
        for &alpha in &alphas {
            for &r in plan.grid.r.as_deref().expect("validated") {
                grid.push((s, alpha, r));
            }
        }
    }
    let rows: Vec<GridPoint> = grid
        .iter()
        .map(|&(s, alpha, r)| {
            let pool = match plan.params.pool {
                Pool::Star => star_pool(&metric, r),
                Pool::All => (0..metric.len()).collect(),
            };
            let base = GridPoint::new("finite-tree")
                .input("tree", plan.tree_label.clone())
                .input("s", s.to_string())
                .input("alpha", alpha)
                .input("r", r)
                .input("pool_size", pool.len());
            let q = ExpansionQuery { metric: &metric, w: &w, s, r, alpha, strategy: Strategy::auto(pool.len(), plan.seed), pool };
            match expansion_constant(&q) {
                Ok(res) => base
                    .output("e", res.e.clone())
                    .output("f", res.f.clone())
                    .output("certification", format!("{:?}", res.certification))
                    .with_value(res.value),
                Err(e) => signal(base, e),
            }
        })
        .collect();
    let mut report = ConstantReport::new(plan.kind.to_string(), "expansion");
    report.points = rows;
    let ok = report.points.iter().filter_map(|p| p.value).all(f64::is_finite);
    let detail = format!("max {}", report.max().map_or("none".into(), |m| format!("{m:.6}")));
    Ok(Outcome { report, verdicts: vec![Verdict::new("expansion constant finite", ok, detail)] })
}

fn abstract_weak_type(plan: &Plan) -> Result<Outcome, CliError> {
    let tree = plan.tree.as_ref().expect("validated");
    let n = tree.len();
    let samples = plan.params.samples.unwrap_or(ABSTRACT_PAIRS);
    let pairs: Vec<(Vec<f64>, Vec<f64>)> = (0..samples)
        .map(|i| {
            let (f, w) = random_pair(n, plan.seed.wrapping_add(i as u64));
            match &plan.weight {
                WeightSpec::Constant(c) => (f, vec![c.to_f64(); n]),
                _ => (f, w),
            }
        })
        .collect();
    let opts = GammaOptions { seed: plan.seed, ..GammaOptions::default() };
    let mut report = ConstantReport::new(plan.kind.to_string(), "ratio");
    for &s in plan.grid.s.as_deref().unwrap_or(&[Exponent::from(2)]) {
        for &alpha in plan.grid.alpha.as_deref().unwrap_or(&[1.0 / 3.0]) {
            match abstract_weak_type_report(tree, &pairs, s, alpha, &opts) {
                Ok(mut r) => {
                    for p in &mut r.points {
                        p.inputs.insert("tree".into(), json!(plan.tree_label));
                    }
                    extend(&mut report, r);
                }
                Err(e) => report.push(signal(
                    GridPoint::new("finite-tree").input("s", s.to_string()).input("alpha", alpha),
                    e,
                )),
            }
        }
    }
    let max = report.max();
    let ok = max.is_some_and(|m| m <= ABSTRACT_RATIO_BOUND);
    let detail = max.map_or("no values".into(), |m| format!("max {m:.6}"));
    Ok(Outcome { report, verdicts: vec![Verdict::new(format!("abstract weak-type ratio <= {ABSTRACT_RATIO_BOUND}"), ok, detail)] })
}
