//! The acceptance suite: ten criteria with pinned seeds and tolerances.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use treehl_core::operators::{ball_maximal, spherical_maximal, MaximalKind};
use treehl_core::tree::{ball_size, enumerate_sphere, sphere_level_counts, sphere_size, truncation};
use treehl_core::{Exact, Exponent, PointFunction, RadialProfile, Scalar, TreeParams, VertexId, Weight};

use crate::abstract_trees::{
    abstract_weak_type_ratio, canonicalize, expansion_constant, gamma_constant, random_pair, ExpansionQuery,
    FiniteTree, GammaOptions, Strategy, TreeMetric,
};
use crate::error::LabError;
use crate::inequality::{
    borders_instances, borders_scan, counterexample_scan, gamma_growth_scan, radial_weight_scan, spine,
    weak_type_constant, weighted_pair_count, MaximalScan, BordersConfig, PairCountQuery,
};
use crate::report::ConstantReport;

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        let label = if self.id == 0 { "diagnostic  ".to_string() } else { format!("criterion {:>2}", self.id) };
        format!(
            "{label} {:<34} {} ({:.1}s) {}",
            self.title,
            if self.passed { "PASS" } else { "FAIL" },
            self.seconds,
            self.detail
        )
    }
}

// Pinned tolerances and budgets.
pub const SANDWICH_TRIALS: usize = 200;
pub const COUNTEREXAMPLE_J_MAX: usize = 48;
pub const COUNTEREXAMPLE_GROWTH: f64 = 3.5;
pub const LINEAR_BAND: f64 = 0.15;
pub const PLATEAU_TOLERANCE: f64 = 1.05;
pub const RADIAL_R_MAX: usize = 48;
pub const EXPONENT_BAND: f64 = 0.15;
pub const K_AGREEMENT: f64 = 0.10;
pub const DOUBLING_DRIFT: f64 = 0.05;
pub const EXPANSION_SPREAD: f64 = 2.0;
/// Recorded bound for the abstract weak-type ratio on the seeded corpus.
pub const ABSTRACT_RATIO_BOUND: f64 = 1.0;

fn run(id: u8, title: &'static str, budget: f64, f: impl FnOnce() -> Result<(bool, String), LabError>) -> CriterionResult {
    let start = Instant::now();
    let outcome = f();
    let seconds = start.elapsed().as_secs_f64();
    let (passed, detail) = match outcome {
        Ok((ok, d)) if seconds <= budget => (ok, d),
        Ok((_, d)) => (false, format!("{d}; runtime {seconds:.1}s over the {budget}s budget")),
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionResult { id, title, passed, detail, seconds }
}

pub const CRITERIA: std::ops::RangeInclusive<u8> = 1..=10;

/// Runs one numbered criterion; `None` outside `1..=10`.
pub fn criterion(id: u8, seed: u64) -> Option<CriterionResult> {
    Some(match id {
        1 => sandwich(seed),
        2 => sphere_combinatorics(),
        3 => counterexample(),
        4 => radial_classification(),
        5 => gamma_growth(),
        6 => weak_type(seed),
        7 => borders(seed),
        8 => kary_specialization(),
        9 => abstract_consistency(seed),
        10 => determinism(seed),
        _ => return None,
    })
}

pub fn verify_all(seed: u64) -> Vec<CriterionResult> {
    CRITERIA.filter_map(|id| criterion(id, seed)).collect()
}

fn params(k: u32) -> TreeParams {
    TreeParams::new(k).expect("k >= 1")
}

/// One to six rational masses at random vertices of depth `<= max_depth`,
/// using child digits below `digits`.
pub fn random_function(rng: &mut ChaCha8Rng, k: u32, max_depth: usize, digits: u32) -> PointFunction<Exact> {
    let n = rng.gen_range(1..=6);
    let mut f = PointFunction::new(params(k));
    for _ in 0..n {
        let d = rng.gen_range(0..=max_depth);
        let v = VertexId::new((0..d).map(|_| rng.gen_range(0..digits)).collect(), &params(k)).expect("digit < k");
        let value = Exact::new(rng.gen_range(1..=20u32).into(), rng.gen_range(1..=7u32).into());
        let cur = f.evaluate(&v);
        f.insert(v, cur + value).expect("positive");
    }
    f
}

// 1 -------------------------------------------------------------------------

pub fn sandwich(seed: u64) -> CriterionResult {
    run(1, "sandwich M <= M∘ <= 2M", 60.0, || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x51);
        let ks = [2u32, 3, 5];
        let windows: Vec<Vec<VertexId>> = ks.iter().map(|&k| truncation(if k == 5 { 4 } else { 5 }, &params(k))).collect();
        let two = Exact::from_u64(2);
        let mut checked = 0usize;
        let mut worst = 0.0f64;
        for trial in 0..SANDWICH_TRIALS {
            let i = trial % 3;
            let f = random_function(&mut rng, ks[i], 7, ks[i]);
            for x in &windows[i] {
                let m = ball_maximal(&f, x);
                let mc = spherical_maximal(&f, x);
                if !(m <= mc && mc <= two.clone() * m.clone()) {
                    return Ok((false, format!("violated at k={} x={x}", ks[i])));
                }
                worst = worst.max((mc / m).to_f64());
                checked += 1;
            }
        }
        Ok((true, format!("{checked} vertex checks, max M∘/M = {worst:.4}")))
    })
}

// 2 -------------------------------------------------------------------------

fn bfs_index(v: &VertexId, k: usize) -> usize {
    let offset: usize = (0..v.depth()).map(|i| k.pow(i as u32)).sum();
    offset + v.path().iter().fold(0usize, |a, &d| a * k + d as usize)
}

/// Per-level histograms of `S(x, r)` for every `r`, by breadth-first search
/// on a finite truncation.
fn bfs_histograms(tree: &FiniteTree, depth: &[usize], x: usize) -> Vec<BTreeMap<usize, usize>> {
    let n = tree.len();
    let mut dist = vec![usize::MAX; n];
    dist[x] = 0;
    let mut queue = std::collections::VecDeque::from([x]);
    let mut out: Vec<BTreeMap<usize, usize>> = Vec::new();
    while let Some(v) = queue.pop_front() {
        let d = dist[v];
        if out.len() <= d {
            out.resize(d + 1, BTreeMap::new());
        }
        *out[d].entry(depth[v]).or_default() += 1;
        for u in tree.parent(v).into_iter().chain(tree.children(v).iter().copied()) {
            if dist[u] == usize::MAX {
                dist[u] = d + 1;
                queue.push_back(u);
            }
        }
    }
    out
}

pub fn sphere_combinatorics() -> CriterionResult {
    run(2, "sphere combinatorics", 30.0, || {
        let mut checks = 0usize;
        for k in [1u32, 2, 3, 5] {
            let p = params(k);
            for j in 0..=8usize {
                let x = spine(j, k - 1, &p);
                for r in 0..=8usize {
                    let dec = sphere_level_counts(j, r, &p);
                    let got = enumerate_sphere(&x, r, &p, 1 << 22)?;
                    let mut hist: BTreeMap<usize, BigUint> = BTreeMap::new();
                    for y in &got {
                        *hist.entry(y.depth()).or_default() += 1u32;
                    }
                    let want: BTreeMap<usize, BigUint> = dec.entries.iter().map(|c| (c.level, c.count.clone())).collect();
                    if hist != want || BigUint::from(got.len()) != sphere_size(j, r, &p) {
                        return Ok((false, format!("enumeration mismatch at k={k} j={j} r={r}")));
                    }
                    checks += 1;
                }
            }
        }
        // Breadth-first search on finite truncations deep enough for j + r.
        for (k, depth) in [(1usize, 16usize), (2, 16), (3, 11)] {
            let tree = FiniteTree::kary(k, depth)?;
            let depths = tree.depths();
            let p = params(k as u32);
            for j in 0..=8usize {
                let x = spine(j, k as u32 - 1, &p);
                let hists = bfs_histograms(&tree, &depths, bfs_index(&x, k));
                for r in (0..=8usize).filter(|r| j + r <= depth) {
                    let want: BTreeMap<usize, usize> = sphere_level_counts(j, r, &p)
                        .entries
                        .iter()
                        .map(|c| (c.level, c.count.to_string().parse().expect("small")))
                        .collect();
                    if hists.get(r).cloned().unwrap_or_default() != want {
                        return Ok((false, format!("BFS mismatch at k={k} j={j} r={r}")));
                    }
                    checks += 1;
                }
            }
        }
        for k in [2u32, 3, 5] {
            let p = params(k);
            let kb = |e: usize| BigUint::from(k).pow(e as u32);
            for j in 0..=32usize {
                for r in 0..=32usize {
                    let s = sphere_size(j, r, &p);
                    if r >= 1 && r <= j && s != kb(r) + kb(r - 1) {
                        return Ok((false, format!("closed form fails at k={k} j={j} r={r}")));
                    }
                    if ball_size(j, r, &p) > s * 2u32 {
                        return Ok((false, format!("ball/sphere > 2 at k={k} j={j} r={r}")));
                    }
                    checks += 1;
                }
            }
        }
        Ok((true, format!("{checks} exact checks")))
    })
}

// 3 -------------------------------------------------------------------------

pub fn counterexample() -> CriterionResult {
    run(3, "counterexample divergence", 120.0, || {
        let js: Vec<usize> = (1..=COUNTEREXAMPLE_J_MAX).collect();
        let scan = counterexample_scan(&js, 1, 2, MaximalKind::Sphere, COUNTEREXAMPLE_J_MAX)?;
        let three = Exact::from_u64(3);
        let mut mw_max = Exact::from_u64(0);
        for row in &scan.rows {
            if row.measure < Exact::from_u64(row.j as u64 + 1) {
                return Ok((false, format!("measure {} < j+1 at j={}", row.measure, row.j)));
            }
            if row.integral_w != three {
                return Ok((false, format!("integral {} != 3 at j={}", row.integral_w, row.j)));
            }
            mw_max = Exact::max_of(mw_max, row.integral_mw.upper().clone());
        }
        // j-independent: sup M∘w / w over the scanned depths times the mass 3.
        let bound = three * scan.c_sup.clone();
        let at = |j: usize| scan.rows[j - 1].ratio_lower;
        let growth = at(48) / at(12);
        let slope_ok = (scan.slope - 1.0 / 3.0).abs() <= LINEAR_BAND / 3.0;
        let ok = mw_max <= bound && growth >= COUNTEREXAMPLE_GROWTH && slope_ok;
        Ok((
            ok,
            format!(
                "int f_j M∘w <= {} (bound {}), ratio(48)/ratio(12) = {growth:.4}, slope {:.5} vs 1/3",
                mw_max.to_f64(),
                bound.to_f64(),
                scan.slope
            ),
        ))
    })
}

// 4 -------------------------------------------------------------------------

pub fn radial_classification() -> CriterionResult {
    run(4, "radial weight classification", 120.0, || {
        let mut ok = true;
        let mut parts = Vec::new();
        for k in [2u32, 3] {
            for beta in [(-1, 1), (-3, 4), (-1, 2), (-1, 4), (0, 1)] {
                let b = Exponent::new(beta.0, beta.1);
                let scan = radial_weight_scan(b, RADIAL_R_MAX, RADIAL_R_MAX, k)?;
                ok &= scan.plateau <= PLATEAU_TOLERANCE;
                parts.push(format!("k={k} β={b} plateau {:.4}", scan.plateau));
            }
            for beta in [(-3, 2), (-5, 4), (1, 4), (1, 2)] {
                let b = Exponent::new(beta.0, beta.1);
                let scan = radial_weight_scan(b, RADIAL_R_MAX, RADIAL_R_MAX, k)?;
                let rel = (scan.fitted_exponent - scan.predicted_exponent).abs() / scan.predicted_exponent;
                ok &= rel <= EXPONENT_BAND;
                parts.push(format!("k={k} β={b} exponent {:.4}/{:.4}", scan.fitted_exponent, scan.predicted_exponent));
            }
        }
        Ok((ok, parts.join("; ")))
    })
}

// 5 -------------------------------------------------------------------------

pub fn gamma_growth() -> CriterionResult {
    run(5, "γ growth", 60.0, || {
        let mut ok = true;
        let mut parts = Vec::new();
        for k in [2u32, 3] {
            for g in [(3, 2), (2, 1), (3, 1)] {
                let gamma = Exponent::new(g.0, g.1);
                let scan = gamma_growth_scan(gamma, RADIAL_R_MAX, RADIAL_R_MAX, k)?;
                let rel = (scan.fitted_exponent - scan.predicted_exponent).abs() / scan.predicted_exponent;
                ok &= rel <= EXPONENT_BAND;
                parts.push(format!("k={k} γ={gamma} {:.4}/{:.4}", scan.fitted_exponent, scan.predicted_exponent));
            }
        }
        Ok((ok, parts.join("; ")))
    })
}

// 6 -------------------------------------------------------------------------

pub const WEAK_CORPUS: usize = 16;
pub const WEIGHTED_CORPUS: usize = 64;

/// Seeded random functions with binary root paths, so one corpus is valid
/// for every `k`.
pub fn weak_type_f_corpus(seed: u64, n: usize, k: u32) -> Vec<PointFunction<Exact>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6a);
    (0..n).map(|_| random_function(&mut rng, k, 3, 2)).collect()
}

/// Unit masses at every vertex of the depth-`depth` truncation.
pub fn delta_corpus(k: u32, depth: usize) -> Vec<PointFunction<Exact>> {
    truncation(depth, &params(k)).into_iter().map(|v| PointFunction::delta(params(k), v)).collect()
}

fn weak_domain(k: u32) -> usize {
    match k {
        2 => 11,
        3 => 7,
        _ => 5,
    }
}

pub fn weight_corpus(seed: u64, k: u32) -> Vec<(String, Weight<f64>)> {
    let p = params(k);
    let mut out: Vec<(String, Weight<f64>)> = [(0, 1), (-1, 2), (-1, 1)]
        .into_iter()
        .map(|(a, b)| {
            let beta = Exponent::new(a, b);
            let w: RadialProfile<f64> = RadialProfile::power_weight(beta, &p).expect("valid power weight");
            (format!("w_{beta}"), w.into())
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x77);
    for i in 0..3 {
        let f = random_function(&mut rng, k, 3, k);
        out.push((format!("point_{i}"), f.convert::<f64>().expect("finite").into()));
    }
    out
}

fn scans(fs: &[PointFunction<Exact>], kind: MaximalKind, d: usize) -> Result<Vec<MaximalScan>, LabError> {
    fs.iter().map(|f| MaximalScan::new(f, kind, d, 1 << 22)).collect()
}

fn max_curve(scans: &[MaximalScan], w: &Weight<f64>, s: Exponent) -> Result<f64, LabError> {
    let mut best = 0.0f64;
    for sc in scans {
        best = best.max(sc.curve(w, s)?.max);
    }
    Ok(best)
}

pub fn weak_type(seed: u64) -> CriterionResult {
    run(6, "weak-type finiteness", 300.0, || {
        let s = Exponent::from(2);
        let one: Weight<f64> = RadialProfile::constant(1.0)?.into();
        let mut ball = Vec::new();
        let mut sphere = Vec::new();
        for k in [2u32, 3, 5] {
            let fs = weak_type_f_corpus(seed, WEAK_CORPUS, k);
            ball.push(max_curve(&scans(&fs, MaximalKind::Ball, weak_domain(k))?, &one, s)?);
            sphere.push(max_curve(&scans(&fs, MaximalKind::Sphere, weak_domain(k))?, &one, s)?);
        }
        let (lo, hi) = ball.iter().fold((f64::MAX, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
        let mut ok = hi.is_finite() && hi <= lo * (1.0 + K_AGREEMENT);
        let mut parts = vec![format!(
            "ball M, w=1: k=2,3,5 -> {:.4}, {:.4}, {:.4} (M∘: {:.4}, {:.4}, {:.4})",
            ball[0], ball[1], ball[2], sphere[0], sphere[1], sphere[2]
        )];
        // Structured deltas, then the random corpus and its doubling.
        let mut fs = delta_corpus(2, 4);
        let structured = fs.len();
        fs.extend(weak_type_f_corpus(seed, 2 * WEIGHTED_CORPUS, 2));
        let all = scans(&fs, MaximalKind::Sphere, weak_domain(2))?;
        for (name, w) in weight_corpus(seed, 2) {
            let half = max_curve(&all[..structured + WEIGHTED_CORPUS], &w, s)?;
            let full = max_curve(&all, &w, s)?;
            ok &= full.is_finite() && (full - half) / half < DOUBLING_DRIFT;
            parts.push(format!("{name}: {half:.4}->{full:.4}"));
        }
        Ok((ok, parts.join("; ")))
    })
}

// 7 -------------------------------------------------------------------------

pub fn borders_config(k: u32, samples: usize, seed: u64) -> BordersConfig {
    BordersConfig {
        k,
        depth: 7,
        r_max: 5,
        s_list: vec![Exponent::new(3, 2), Exponent::from(2), Exponent::from(3)],
        samples,
        seed,
        weights: weight_corpus(seed, k).into_iter().take(3).collect(),
    }
}

pub fn borders(seed: u64) -> CriterionResult {
    run(7, "pair-count bound", 600.0, || {
        let mut ok = true;
        let mut parts = Vec::new();
        for k in [2u32, 3] {
            let n = borders_scan(&borders_config(k, 1000, seed ^ 0xb0))?.max().unwrap_or(f64::INFINITY);
            let n2 = borders_scan(&borders_config(k, 2000, seed ^ 0xb0))?.max().unwrap_or(f64::INFINITY);
            let drift = (n2 - n) / n;
            ok &= n2.is_finite() && drift < DOUBLING_DRIFT;
            parts.push(format!("k={k}: max {n:.4} -> {n2:.4}"));
            // Exact pair counts against the plain double loop.
            let p = params(k);
            let w: Weight<Exact> = RadialProfile::<Exact>::counterexample(&p).into();
            for inst in borders_instances(&borders_config(k, 200, seed ^ 0xb0)).iter().step_by(3) {
                let q = PairCountQuery { e: inst.e.clone(), f: inst.f.clone(), r: inst.r, w: w.clone() };
                let fast = weighted_pair_count(&q, &p, 1 << 26)?;
                let mut slow = Exact::from_u64(0);
                for x in &inst.e {
                    for y in &inst.f {
                        if treehl_core::tree::distance(x, y) == inst.r {
                            slow += w.evaluate(y);
                        }
                    }
                }
                if fast != slow {
                    return Ok((false, format!("pair count mismatch on a {} instance", inst.family)));
                }
            }
        }
        Ok((ok, parts.join("; ")))
    })
}

// 8 -------------------------------------------------------------------------

/// The root plus up to nine vertices of `S(root, r)` on a truncation.
pub fn star_pool(metric: &TreeMetric, r: usize) -> Vec<usize> {
    let mut pool = vec![0];
    pool.extend(metric.sphere(0, r).iter().map(|&v| v as usize).filter(|&v| v != 0).take(9));
    pool
}

pub fn kary_specialization() -> CriterionResult {
    run(8, "finite-tree k-ary specialization", 300.0, || {
        let k = 2usize;
        let tree = FiniteTree::kary(k, 6)?;
        let metric = TreeMetric::new(&tree)?;
        let w = vec![1.0; metric.len()];
        let s = Exponent::from(2);
        let sp = 2.0;
        let alpha = 1.0 / (sp + 1.0);
        let mut scaled = Vec::new();
        for r in 0..=4usize {
            let q = ExpansionQuery { metric: &metric, w: &w, s, r, alpha, pool: star_pool(&metric, r), strategy: Strategy::Exhaustive };
            let res = expansion_constant(&q)?;
            scaled.push(res.value * (k as f64).powf(r as f64 / (sp + 1.0)));
        }
        let (lo, hi) = scaled.iter().fold((f64::MAX, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
        let values: Vec<String> = scaled.iter().map(|v| format!("{v:.4}")).collect();
        Ok((hi / lo < EXPANSION_SPREAD, format!("E·k^(r/3) over r=0..4: [{}], spread {:.4}", values.join(", "), hi / lo)))
    })
}

// 9 -------------------------------------------------------------------------

pub const ABSTRACT_PAIRS: usize = 100;

pub fn abstract_gamma_options(seed: u64) -> GammaOptions {
    GammaOptions { r_max: None, n_max: None, seed }
}

pub fn abstract_consistency(seed: u64) -> CriterionResult {
    run(9, "abstract weak-type consistency", 300.0, || {
        let tree = FiniteTree::kary(2, 7)?;
        let n = tree.len();
        let s = Exponent::from(2);
        let alpha = 1.0 / 3.0;
        let opts = abstract_gamma_options(seed);
        let mut worst = 0.0f64;
        let mut relabel_ok = true;
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x99);
        for i in 0..ABSTRACT_PAIRS {
            let (f, w) = random_pair(n, seed.wrapping_add(i as u64));
            let gamma = gamma_constant(&tree, &w, s, alpha, &opts)?;
            let res = abstract_weak_type_ratio(&tree, &w, &f, s, gamma.value)?;
            worst = worst.max(res.ratio);
            if i % 10 == 0 {
                let mut perm: Vec<usize> = (0..n).collect();
                rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut rng);
                let t2 = tree.relabel(&perm)?;
                let (mut f2, mut w2) = (vec![0.0; n], vec![0.0; n]);
                for v in 0..n {
                    f2[perm[v]] = f[v];
                    w2[perm[v]] = w[v];
                }
                let g2 = gamma_constant(&t2, &w2, s, alpha, &opts)?;
                let r2 = abstract_weak_type_ratio(&t2, &w2, &f2, s, g2.value)?;
                relabel_ok &= g2.value.to_bits() == gamma.value.to_bits() && r2.ratio.to_bits() == res.ratio.to_bits();
            }
        }
        Ok((
            worst <= ABSTRACT_RATIO_BOUND && relabel_ok,
            format!("max ratio {worst:.6} (recorded bound {ABSTRACT_RATIO_BOUND}), relabeling exact: {relabel_ok}"),
        ))
    })
}

// 10 ------------------------------------------------------------------------

/// JSON lines of a fixed bundle of reports; equal digests mean equal values.
pub fn determinism_bundle(seed: u64) -> Result<String, LabError> {
    let mut out = String::new();
    out += &borders_scan(&borders_config(2, 60, seed))?.to_jsonl();
    out += &counterexample_scan(&[1, 5, 20], 2, 2, MaximalKind::Sphere, 20)?.report().to_jsonl();
    out += &radial_weight_scan(Exponent::new(-1, 2), 12, 12, 3)?.report().to_jsonl();
    let tree = FiniteTree::random(60, seed)?;
    let pairs: Vec<(Vec<f64>, Vec<f64>)> = (0..3).map(|i| random_pair(60, seed + i)).collect();
    out += &crate::abstract_trees::abstract_weak_type_report(&tree, &pairs, Exponent::from(2), 0.3, &abstract_gamma_options(seed))?
        .to_jsonl();
    let (canon, _) = canonicalize(&tree, &vec![vec![]; tree.len()]);
    out += &canon.to_edge_list();
    let fs = weak_type_f_corpus(seed, 4, 3);
    let mut rep = ConstantReport::new("weak-type", "ratio");
    for f in &fs {
        let one: Weight<f64> = RadialProfile::constant(1.0)?.into();
        let c = weak_type_constant(f, &one, Exponent::from(2), MaximalKind::Sphere, 5, 1 << 20)?;
        rep.push(crate::report::GridPoint::new("point-exact").with_value(c.max));
    }
    out += &rep.to_jsonl();
    Ok(out)
}

pub fn determinism(seed: u64) -> CriterionResult {
    run(10, "determinism", 300.0, || {
        let pool = |t: usize| rayon::ThreadPoolBuilder::new().num_threads(t).build().map_err(|e| LabError::BadParameter(e.to_string()));
        let a = determinism_bundle(seed)?;
        let b = determinism_bundle(seed)?;
        let one = pool(1)?.install(|| determinism_bundle(seed))?;
        let eight = pool(8)?.install(|| determinism_bundle(seed))?;
        let ok = a == b && a == one && a == eight;
        Ok((ok, format!("{} bytes, repeat equal: {}, 1 vs 8 threads equal: {}", a.len(), a == b, one == eight)))
    })
}

// Diagnostics ---------------------------------------------------------------

pub const GAMMA_STABILITY: f64 = 0.25;

/// `Γ / c_α` on the binary truncations of depth 8 and 10 (`w = 1`, `s = 2`,
/// `α = 1/3`); the relative change is compared against 25%.
pub fn gamma_stability(seed: u64) -> CriterionResult {
    run(0, "Γ/c_α depth doubling 8 -> 10", 300.0, || {
        let mut values = Vec::new();
        for depth in [8usize, 10] {
            let tree = FiniteTree::kary(2, depth)?;
            let w = vec![1.0; tree.len()];
            values.push(gamma_constant(&tree, &w, Exponent::from(2), 1.0 / 3.0, &abstract_gamma_options(seed))?.value);
        }
        let change = (values[1] - values[0]).abs() / values[0];
        Ok((change < GAMMA_STABILITY, format!("{:.3} -> {:.3}, relative change {:.3}", values[0], values[1], change)))
    })
}

/// Checks reported alongside the criteria but not counted by them.
pub fn diagnostics(seed: u64) -> Vec<CriterionResult> {
    vec![gamma_stability(seed)]
}
