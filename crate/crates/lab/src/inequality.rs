//! Experiments on the main inequalities: the weighted pair count, the
//! weak-type and strong-type estimates with the `M_s` majorant, the
//! counterexample weight, radial weight classification, necessity of
//! `Mw <= C w`, and the vector-valued extension.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use treehl_core::numerics::{conjugate, exponent_to_f64};
use treehl_core::operators::{
    m_s, maximal, radial_maximal, radial_sphere_averages, spherical_maximal, superlevel_radial, weighted_measure,
    Exactness, MaximalKind,
};
use treehl_core::tree::{enumerate_ball, enumerate_sphere, sphere_level_counts, sphere_size, truncation, distance};
use treehl_core::{
    Enclosure, Exact, Exponent, LogScalar, OperatorConfig, PointFunction, RadialProfile, Scalar, TreeParams, VertexId,
    Weight,
};

use crate::error::LabError;
use crate::report::{ConstantReport, GridPoint};

pub const DEFAULT_PAIR_CAP: usize = 1 << 26;

/// Least-squares line `y = slope * x + intercept`.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = if sxx == 0.0 { 0.0 } else { sxy / sxx };
    (slope, my - slope * mx)
}

fn check_branching(params: &TreeParams) -> Result<(), LabError> {
    if params.k() < 2 {
        return Err(LabError::UnsupportedBranching);
    }
    Ok(())
}

fn check_exponent(name: &str, s: Exponent) -> Result<(), LabError> {
    if s <= Exponent::from(1) {
        return Err(LabError::BadParameter(format!("{name} must exceed 1, got {s}")));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Pair counts

#[derive(Clone, Debug, PartialEq)]
pub struct PairCountQuery<S> {
    pub e: BTreeSet<VertexId>,
    pub f: BTreeSet<VertexId>,
    pub r: usize,
    pub w: Weight<S>,
}

/// `sum over (x, y) in E x F with d(x, y) = r of w(y)`.
///
/// Each `x` either walks its sphere (when smaller than `F`) or scans `F`.
pub fn weighted_pair_count<S: Scalar>(
    q: &PairCountQuery<S>,
    params: &TreeParams,
    cap: usize,
) -> Result<S, LabError> {
    let pairs = q.e.len().saturating_mul(q.f.len());
    if pairs > cap {
        return Err(LabError::PairCap { pairs, cap });
    }
    let mut total = S::zero();
    for x in &q.e {
        let size = sphere_size(x.depth(), q.r, params);
        if size <= BigUint::from(q.f.len()) {
            for y in enumerate_sphere(x, q.r, params, q.f.len())? {
                if q.f.contains(&y) {
                    total = total + q.w.evaluate(&y);
                }
            }
        } else {
            for y in q.f.iter().filter(|y| distance(x, y) == q.r) {
                total = total + q.w.evaluate(y);
            }
        }
    }
    Ok(total)
}

/// Memoized `M_s∘ w` (upper enclosure bound) keyed by depth for radial
/// weights and by vertex otherwise.
pub struct MsCache<'a> {
    w: &'a Weight<f64>,
    s: Exponent,
    kind: MaximalKind,
    params: TreeParams,
    by_depth: HashMap<usize, f64>,
    by_vertex: HashMap<VertexId, f64>,
}

impl<'a> MsCache<'a> {
    pub fn new(w: &'a Weight<f64>, s: Exponent, kind: MaximalKind, params: TreeParams) -> Self {
        Self { w, s, kind, params, by_depth: HashMap::new(), by_vertex: HashMap::new() }
    }

    pub fn get(&mut self, x: &VertexId) -> Result<f64, LabError> {
        match self.w {
            Weight::Radial(_) => {
                if let Some(v) = self.by_depth.get(&x.depth()) {
                    return Ok(*v);
                }
                let v = *m_s(self.w, x, self.s, self.kind, &self.params)?.upper();
                self.by_depth.insert(x.depth(), v);
                Ok(v)
            }
            Weight::Point(_) => {
                if let Some(v) = self.by_vertex.get(x) {
                    return Ok(*v);
                }
                let v = *m_s(self.w, x, self.s, self.kind, &self.params)?.upper();
                self.by_vertex.insert(x.clone(), v);
                Ok(v)
            }
        }
    }
}

/// Empirical constant of the pair-count bound for one instance:
/// `pairs / (k^(r s'/(s'+1)) w(F)^(1/(s'+1)) (sum_E M_s∘w)^(s'/(s'+1)))`.
pub fn borders_ratio(q: &PairCountQuery<f64>, s: Exponent, params: &TreeParams) -> Result<f64, LabError> {
    let mut cache = MsCache::new(&q.w, s, MaximalKind::Sphere, *params);
    borders_ratio_cached(q, s, params, &mut cache)
}

pub fn borders_ratio_cached(
    q: &PairCountQuery<f64>,
    s: Exponent,
    params: &TreeParams,
    cache: &mut MsCache<'_>,
) -> Result<f64, LabError> {
    check_exponent("s", s)?;
    let sp = exponent_to_f64(conjugate(s));
    let a = sp / (sp + 1.0);
    let pairs = weighted_pair_count(q, params, DEFAULT_PAIR_CAP)?;
    let wf: f64 = q.f.iter().map(|y| q.w.evaluate(y)).sum();
    let mut ms = 0.0;
    for x in &q.e {
        ms += cache.get(x)?;
    }
    let denom = (params.k() as f64).powf(q.r as f64 * a) * wf.powf(1.0 / (sp + 1.0)) * ms.powf(a);
    if !(denom > 0.0) {
        return Err(LabError::UndefinedRatio("w(F) or M_s∘w(E) vanishes".into()));
    }
    Ok(pairs / denom)
}

#[derive(Clone, Debug)]
pub struct BordersConfig {
    pub k: u32,
    pub depth: usize,
    pub r_max: usize,
    pub s_list: Vec<Exponent>,
    pub samples: usize,
    pub seed: u64,
    pub weights: Vec<(String, Weight<f64>)>,
}

#[derive(Clone, Debug)]
pub struct BordersInstance {
    pub family: &'static str,
    pub e: BTreeSet<VertexId>,
    pub f: BTreeSet<VertexId>,
    pub r: usize,
    pub s: Exponent,
    pub weight: usize,
}

/// The vertex reached from the root by repeating child `digit`.
pub fn spine(depth: usize, digit: u32, params: &TreeParams) -> VertexId {
    VertexId::new(vec![digit; depth], params).expect("digit < k")
}

/// Deterministic adversarial families followed by `samples` seeded random
/// instances. The random stream for `2N` samples extends the one for `N`.
pub fn borders_instances(cfg: &BordersConfig) -> Vec<BordersInstance> {
    let params = TreeParams::new(cfg.k).expect("k >= 1");
    let all = truncation(cfg.depth, &params);
    let inside = |v: &VertexId| v.depth() <= cfg.depth;
    let mut out = Vec::new();
    let nw = cfg.weights.len();
    let mut slot = 0usize;
    let mut push = |family, e: BTreeSet<VertexId>, f: BTreeSet<VertexId>, r, out: &mut Vec<BordersInstance>| {
        if e.is_empty() || f.is_empty() {
            return;
        }
        for weight in 0..nw {
            let s = cfg.s_list[slot % cfg.s_list.len()];
            slot += 1;
            out.push(BordersInstance { family, e: e.clone(), f: f.clone(), r, s, weight });
        }
    };
    let sphere_in = |x: &VertexId, r: usize| -> BTreeSet<VertexId> {
        enumerate_sphere(x, r, &params, 1 << 20).expect("small sphere").into_iter().filter(|v| inside(v)).collect()
    };
    for r in 0..=cfg.r_max {
        for c in [0, cfg.depth / 2, cfg.depth.saturating_sub(r)] {
            let x = spine(c, cfg.k - 1, &params);
            push("star", [x.clone()].into(), sphere_in(&x, r), r, &mut out);
            push("reverse-star", sphere_in(&x, r), [x].into(), r, &mut out);
        }
        for i in 0..=cfg.depth {
            for j in i.saturating_sub(r)..=(i + r).min(cfg.depth) {
                if (i + j + r) % 2 == 0 && i + j >= r {
                    let e = all.iter().filter(|v| v.depth() == i).cloned().collect();
                    let f = all.iter().filter(|v| v.depth() == j).cloned().collect();
                    push("levels", e, f, r, &mut out);
                }
            }
        }
        let anchor = spine(cfg.depth.saturating_sub(2).max(1).min(cfg.depth), 0, &params);
        let block: BTreeSet<VertexId> = (0..cfg.k).map(|c| anchor.child(c)).filter(|v| inside(v)).collect();
        let far: BTreeSet<VertexId> = block.iter().flat_map(|v| sphere_in(v, r)).collect();
        push("siblings", block.clone(), far, r, &mut out);
        let path: BTreeSet<VertexId> = (0..=cfg.depth).map(|d| spine(d, 0, &params)).collect();
        let around: BTreeSet<VertexId> = path.iter().flat_map(|v| sphere_in(v, r)).collect();
        push("root-path", path.clone(), around, r, &mut out);
        push("root-path-self", path.clone(), path, r, &mut out);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.samples {
        let r = rng.gen_range(0..=cfg.r_max);
        let s = cfg.s_list[rng.gen_range(0..cfg.s_list.len())];
        let weight = rng.gen_range(0..nw);
        let local = rng.gen_bool(0.7);
        let pool: Vec<VertexId> = if local {
            let c = all[rng.gen_range(0..all.len())].clone();
            enumerate_ball(&c, 3, &params, 1 << 20).expect("small ball").into_iter().filter(|v| inside(v)).collect()
        } else {
            all.clone()
        };
        let ne = rng.gen_range(1..=pool.len().min(48));
        let nf = rng.gen_range(1..=pool.len().min(48));
        let e = pool.choose_multiple(&mut rng, ne).cloned().collect();
        let f = pool.choose_multiple(&mut rng, nf).cloned().collect();
        out.push(BordersInstance { family: "random", e, f, r, s, weight });
    }
    out
}

/// Evaluates every instance; undefined ratios are recorded as signals.
pub fn borders_scan(cfg: &BordersConfig) -> Result<ConstantReport, LabError> {
    let params = TreeParams::new(cfg.k)?;
    let instances = borders_instances(cfg);
    let values: Vec<Result<f64, LabError>> = instances
        .par_iter()
        .map(|inst| {
            let w = &cfg.weights[inst.weight].1;
            let q = PairCountQuery { e: inst.e.clone(), f: inst.f.clone(), r: inst.r, w: w.clone() };
            borders_ratio(&q, inst.s, &params)
        })
        .collect();
    let mut report = ConstantReport::new("borders", "ratio");
    for (inst, v) in instances.iter().zip(values) {
        let p = GridPoint::new("point-f64")
            .input("k", cfg.k)
            .input("family", inst.family)
            .input("r", inst.r)
            .input("s", inst.s.to_string())
            .input("weight", cfg.weights[inst.weight].0.clone())
            .input("e_size", inst.e.len())
            .input("f_size", inst.f.len());
        report.push(match v {
            Ok(x) => p.with_value(x),
            Err(LabError::UndefinedRatio(m)) => p.with_signal(format!("undefined-ratio: {m}")),
            Err(e) => return Err(e),
        });
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Weak type

#[derive(Clone, Debug, PartialEq)]
pub struct Breakpoint {
    pub value: Exact,
    /// `w({Mf >= value})`.
    pub measure: f64,
    pub ratio: f64,
}

/// `lambda w({Mf > lambda}) / sum f M_s w` sampled at the exact values of
/// `Mf`, which is where its supremum over `lambda` is approached.
#[derive(Clone, Debug, PartialEq)]
pub struct WeakTypeCurve {
    /// Descending in value.
    pub breakpoints: Vec<Breakpoint>,
    pub denominator: f64,
    /// Breakpoints below this value were not resolved; the reported max is
    /// a lower bound of the supremum over all `lambda > 0` when values of
    /// `Mf` accumulate below it.
    pub lambda_floor: Exact,
    pub max: f64,
    pub argmax: Option<usize>,
}

impl WeakTypeCurve {
    fn build(mut values: Vec<(Exact, f64)>, denominator: f64, lambda_floor: Exact) -> Result<Self, LabError> {
        if !(denominator > 0.0) {
            return Err(LabError::UndefinedRatio("sum f M_s w vanishes".into()));
        }
        values.sort_by(|a, b| b.0.cmp(&a.0));
        let mut breakpoints: Vec<Breakpoint> = Vec::new();
        let mut acc = 0.0;
        let mut i = 0;
        while i < values.len() {
            let v = values[i].0.clone();
            while i < values.len() && values[i].0 == v {
                acc += values[i].1;
                i += 1;
            }
            if v.is_zero() || v < lambda_floor {
                break;
            }
            let ratio = v.to_f64() * acc / denominator;
            breakpoints.push(Breakpoint { value: v, measure: acc, ratio });
        }
        let (argmax, max) = breakpoints
            .iter()
            .enumerate()
            .fold((None, 0.0), |(ai, m), (i, b)| if b.ratio > m { (Some(i), b.ratio) } else { (ai, m) });
        Ok(Self { breakpoints, denominator, lambda_floor, max, argmax })
    }

    /// `lambda w({Mf > lambda}) / denominator`, for `lambda >= lambda_floor`.
    pub fn ratio_at(&self, lambda: &Exact) -> f64 {
        let measure = self.breakpoints.iter().take_while(|b| b.value > *lambda).last().map_or(0.0, |b| b.measure);
        lambda.to_f64() * measure / self.denominator
    }
}

/// Exact values of `Mf` on `B(supp f, D)`, reusable across weights.
///
/// Every value of `Mf` at or above `|f|_1 / k^D` is attained inside the
/// scanned neighbourhood.
#[derive(Clone, Debug)]
pub struct MaximalScan {
    pub f: PointFunction<Exact>,
    pub kind: MaximalKind,
    pub domain: Vec<VertexId>,
    pub values: Vec<Exact>,
    pub floor: Exact,
}

impl MaximalScan {
    pub fn new(f: &PointFunction<Exact>, kind: MaximalKind, domain_radius: usize, cap: usize) -> Result<Self, LabError> {
        let params = *f.params();
        check_branching(&params)?;
        if f.is_zero() {
            return Err(LabError::UndefinedRatio("f vanishes".into()));
        }
        let mut domain = BTreeSet::new();
        for (y, _) in f.support() {
            domain.extend(enumerate_ball(y, domain_radius, &params, cap)?);
        }
        let domain: Vec<VertexId> = domain.into_iter().collect();
        let values = domain.par_iter().map(|x| maximal(f, x, kind)).collect();
        let floor = f.l1_norm() / Exact::from_biguint(&num_traits::pow(BigUint::from(params.k()), domain_radius));
        Ok(Self { f: f.clone(), kind, domain, values, floor })
    }

    /// Weak-type ratio curve against `M_s w`.
    pub fn curve(&self, w: &Weight<f64>, s: Exponent) -> Result<WeakTypeCurve, LabError> {
        check_exponent("s", s)?;
        let pairs = self.domain.iter().zip(&self.values).map(|(x, v)| (v.clone(), w.evaluate(x))).collect();
        let mut cache = MsCache::new(w, s, self.kind, *self.f.params());
        let mut denominator = 0.0;
        for (x, v) in self.f.support() {
            denominator += v.to_f64() * cache.get(x)?;
        }
        WeakTypeCurve::build(pairs, denominator, self.floor.clone())
    }
}

/// Weak-type ratio curve of a finitely supported `f` against `M_s w`.
pub fn weak_type_constant(
    f: &PointFunction<Exact>,
    w: &Weight<f64>,
    s: Exponent,
    kind: MaximalKind,
    domain_radius: usize,
    cap: usize,
) -> Result<WeakTypeCurve, LabError> {
    MaximalScan::new(f, kind, domain_radius, cap)?.curve(w, s)
}

/// Weak-type curve for a finitely supported radial `f` (zero tail) against a
/// radial weight, with superlevel sets kept as level sets.
pub fn weak_type_constant_radial(
    f: &RadialProfile<Exact>,
    w: &RadialProfile<f64>,
    s: Exponent,
    kind: MaximalKind,
    domain_radius: usize,
    params: &TreeParams,
) -> Result<WeakTypeCurve, LabError> {
    check_branching(params)?;
    check_exponent("s", s)?;
    if !f.has_zero_tail() {
        return Err(LabError::BadParameter("radial f must have a zero tail".into()));
    }
    let last = f.head_len().saturating_sub(1) + domain_radius;
    let values = radial_maximal(f, last, 1, kind, &OperatorConfig::default(), params)?;
    let weight: Weight<f64> = w.clone().into();
    let level_mass = |i: usize| w.value(i) * f64::from_biguint(&params.level_size(i));
    let pairs: Vec<(Exact, f64)> = values.iter().enumerate().map(|(i, e)| (e.lower().clone(), level_mass(i))).collect();
    let mut denominator = 0.0;
    for (i, c) in f.head().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let x = spine(i, 0, params);
        let ms = *m_s(&weight, &x, s, kind, params)?.upper();
        denominator += c.to_f64() * f64::from_biguint(&params.level_size(i)) * ms;
    }
    let floor = f.l1_norm(params)? / Exact::from_biguint(&num_traits::pow(BigUint::from(params.k()), domain_radius));
    WeakTypeCurve::build(pairs, denominator, floor)
}

// ---------------------------------------------------------------------------
// Counterexample

#[derive(Clone, Debug, PartialEq)]
pub struct CounterexampleRow {
    pub j: usize,
    /// `w({M f_j > 1})`.
    pub measure: Exact,
    /// `sum f_j w`.
    pub integral_w: Exact,
    /// Enclosure of `sum f_j M^n w`.
    pub integral_mw: Enclosure<Exact>,
    pub ratio_lower: f64,
    pub ratio_upper: f64,
    pub exactness: Exactness,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CounterexampleScan {
    pub k: u32,
    pub n: usize,
    pub kind: MaximalKind,
    pub rows: Vec<CounterexampleRow>,
    /// Upper bound on `sup M^n w / w` over depths `0..=c_depth`.
    pub c_sup: Exact,
    pub c_depth: usize,
    pub slope: f64,
    pub intercept: f64,
}

/// `w = k^(-j)` against `f_j = 3 chi_{T^j}`.
pub fn counterexample_scan(
    j_list: &[usize],
    n: usize,
    k: u32,
    kind: MaximalKind,
    c_depth: usize,
) -> Result<CounterexampleScan, LabError> {
    let params = TreeParams::new(k)?;
    check_branching(&params)?;
    let w = RadialProfile::<Exact>::counterexample(&params);
    let weight: Weight<Exact> = w.clone().into();
    let j_max = j_list.iter().copied().max().unwrap_or(0);
    let depth = j_max.max(c_depth);
    let iterated = radial_maximal(&w, depth, n, kind, &OperatorConfig::default(), &params)?;
    let c_sup = (0..=c_depth).map(|j| iterated[j].upper().clone() / w.value(j)).fold(Exact::zero(), Exact::max_of);
    let three = Exact::from_u64(3);
    let rows: Vec<CounterexampleRow> = j_list
        .par_iter()
        .map(|&j| {
            let fj = RadialProfile::level_indicator(j, three.clone())?;
            let set = superlevel_radial(&fj, &Exact::one(), kind, None, &params)?;
            let measure = weighted_measure(&weight, &set, &params);
            let mass = three.clone() * Exact::from_biguint(&params.level_size(j));
            let integral_w = mass.clone() * w.value(j);
            let integral_mw = iterated[j].scale(&mass);
            let ratio_lower = (measure.clone() / integral_mw.upper().clone()).to_f64();
            let ratio_upper = (measure.clone() / integral_mw.lower().clone()).to_f64();
            Ok(CounterexampleRow { j, measure, integral_w, integral_mw, ratio_lower, ratio_upper, exactness: set.exactness })
        })
        .collect::<Result<_, LabError>>()?;
    let xs: Vec<f64> = rows.iter().map(|r| r.j as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.ratio_lower).collect();
    let (slope, intercept) = if rows.len() >= 2 { fit_line(&xs, &ys) } else { (0.0, 0.0) };
    Ok(CounterexampleScan { k, n, kind, rows, c_sup, c_depth, slope, intercept })
}

impl CounterexampleScan {
    pub fn report(&self) -> ConstantReport {
        let mut rep = ConstantReport::new("counterexample", "ratio");
        for row in &self.rows {
            rep.push(
                GridPoint::new("radial-exact")
                    .input("k", self.k)
                    .input("n", self.n)
                    .input("j", row.j)
                    .output("measure", row.measure.to_decimal())
                    .output("integral", row.integral_w.to_decimal())
                    .output("integral_mw_upper", row.integral_mw.upper().to_decimal())
                    .with_value(row.ratio_lower)
                    .with_bounds(row.ratio_lower, row.ratio_upper),
            );
        }
        rep.flag(format!("c_sup={} over depths 0..={}", self.c_sup.to_f64(), self.c_depth));
        rep
    }
}

// ---------------------------------------------------------------------------
// Radial weights

#[derive(Clone, Debug, PartialEq)]
pub struct RadialScan {
    pub beta: Exponent,
    pub k: u32,
    pub r_max: usize,
    pub j_max: usize,
    /// `ratios[j][r] = A_r∘ w_beta(depth j) / w_beta(depth j)`.
    pub ratios: Vec<Vec<f64>>,
    /// Max over `j` for each `r`.
    pub row_max: Vec<f64>,
    pub sup: f64,
    /// Last-octave max over mid-octave max of `row_max`.
    pub plateau: f64,
    /// Least-squares slope of `ln ratio(j_max, r)` over the top half of `r`.
    pub fitted_exponent: f64,
    pub predicted_exponent: f64,
}

pub fn predicted_radial_exponent(beta: f64, k: u32) -> f64 {
    let lk = (k as f64).ln();
    if beta < -1.0 {
        (-beta - 1.0) * lk
    } else if beta > 0.0 {
        beta * lk
    } else {
        0.0
    }
}

fn top_half_slope(values: &[f64], r_max: usize) -> f64 {
    let lo = r_max / 2;
    let xs: Vec<f64> = (lo..=r_max).map(|r| r as f64).collect();
    let ys: Vec<f64> = (lo..=r_max).map(|r| values[r].ln()).collect();
    fit_line(&xs, &ys).0
}

fn octave_ratio(row_max: &[f64], r_max: usize) -> f64 {
    let last = ((r_max / 2 + 1)..=r_max).map(|r| row_max[r]).fold(0.0, f64::max);
    let mid = ((r_max / 4 + 1)..=(r_max / 2)).map(|r| row_max[r]).fold(0.0, f64::max);
    last / mid
}

/// Sphere averages of `w_beta` relative to `w_beta` on a `(j, r)` grid, in the
/// log backend.
pub fn radial_weight_scan(beta: Exponent, r_max: usize, j_max: usize, k: u32) -> Result<RadialScan, LabError> {
    let params = TreeParams::new(k)?;
    if r_max < 2 || j_max < 1 {
        return Err(LabError::BadParameter("r_max >= 2 and j_max >= 1 required".into()));
    }
    let w = RadialProfile::<LogScalar>::power_weight(beta, &params)?;
    let ratios: Vec<Vec<f64>> = (0..=j_max)
        .into_par_iter()
        .map(|j| {
            let cj = w.value(j);
            radial_sphere_averages(&w, j, r_max, &params).into_iter().map(|a| (a / cj).value()).collect()
        })
        .collect();
    let row_max: Vec<f64> = (0..=r_max).map(|r| ratios.iter().map(|row| row[r]).fold(0.0, f64::max)).collect();
    let sup = row_max.iter().copied().fold(0.0, f64::max);
    let beta_f = exponent_to_f64(beta);
    Ok(RadialScan {
        beta,
        k,
        r_max,
        j_max,
        plateau: octave_ratio(&row_max, r_max),
        fitted_exponent: top_half_slope(&ratios[j_max], r_max),
        predicted_exponent: predicted_radial_exponent(beta_f, k),
        ratios,
        row_max,
        sup,
    })
}

impl RadialScan {
    pub fn report(&self) -> ConstantReport {
        let mut rep = ConstantReport::new("radial-scan", "ratio");
        for (j, row) in self.ratios.iter().enumerate() {
            for (r, v) in row.iter().enumerate() {
                rep.push(
                    GridPoint::new("radial-log")
                        .input("beta", self.beta.to_string())
                        .input("k", self.k)
                        .input("j", j)
                        .input("r", r)
                        .with_value(*v),
                );
            }
        }
        rep.flag(format!("fitted_exponent={} predicted={}", self.fitted_exponent, self.predicted_exponent));
        rep.flag(format!("plateau={}", self.plateau));
        rep
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GammaScan {
    pub gamma: Exponent,
    pub k: u32,
    pub j: usize,
    /// `(A_r∘ (w_{-1}^gamma))^(1/gamma) / w_{-1}` at depth `j`, for `r = 0..=r_max`.
    pub ratios: Vec<f64>,
    pub fitted_exponent: f64,
    pub predicted_exponent: f64,
}

/// Growth in `r` of the single-radius `M_gamma∘ w_{-1} / w_{-1}` at depth `j`.
pub fn gamma_growth_scan(gamma: Exponent, r_max: usize, j: usize, k: u32) -> Result<GammaScan, LabError> {
    check_exponent("gamma", gamma)?;
    let params = TreeParams::new(k)?;
    if r_max < 2 {
        return Err(LabError::BadParameter("r_max >= 2 required".into()));
    }
    let w = RadialProfile::<LogScalar>::power_weight(Exponent::from(-1), &params)?;
    let wg = w.power(gamma)?;
    let inv = Exponent::from(1) / gamma;
    let cj = w.value(j);
    let ratios = radial_sphere_averages(&wg, j, r_max, &params)
        .into_iter()
        .map(|a| Ok((a.pow_ratio(inv)? / cj).value()))
        .collect::<Result<Vec<f64>, LabError>>()?;
    let g = exponent_to_f64(gamma);
    Ok(GammaScan {
        gamma,
        k,
        j,
        fitted_exponent: top_half_slope(&ratios, r_max),
        predicted_exponent: (g - 1.0) / g * (k as f64).ln(),
        ratios,
    })
}

// ---------------------------------------------------------------------------
// Necessity

#[derive(Clone, Debug, PartialEq)]
pub struct NecessityResult<S> {
    /// `w(S(x0, r)) / (k^r w(x0))`.
    pub ratio: S,
    /// `S(x0, r)` lies in `{M∘ delta_x0 > 1/(2 k^r)}`.
    pub inclusion: bool,
    pub inclusion_method: &'static str,
    /// `ratio <= 2 c_w` for the supplied weak-type constant.
    pub consistent: Option<bool>,
}

pub fn necessity_check<S: Scalar>(
    w: &Weight<S>,
    x0: &VertexId,
    r: usize,
    params: &TreeParams,
    measured_weak_constant: Option<f64>,
    cap: usize,
) -> Result<NecessityResult<S>, LabError> {
    let wx0 = w.evaluate(x0);
    if wx0.is_zero() {
        return Err(LabError::UndefinedRatio("w(x0) = 0".into()));
    }
    let j = x0.depth();
    let sphere_mass = match w {
        Weight::Radial(p) => sphere_level_counts(j, r, params)
            .entries
            .iter()
            .fold(S::zero(), |a, c| a + S::from_biguint(&c.count) * p.value(c.level)),
        Weight::Point(f) => f.support().filter(|(y, _)| distance(x0, y) == r).fold(S::zero(), |a, (_, v)| a + v.clone()),
    };
    let kr = S::from_biguint(&num_traits::pow(BigUint::from(params.k()), r));
    let ratio = sphere_mass / (kr * wx0);
    let threshold = Exact::one()
        / (Exact::from_u64(2) * Exact::from_biguint(&num_traits::pow(BigUint::from(params.k()), r)));
    let size = sphere_size(j, r, params);
    let (inclusion, inclusion_method) = if size <= BigUint::from(cap) {
        let delta = PointFunction::<Exact>::delta(*params, x0.clone());
        let sphere: Vec<VertexId> = enumerate_sphere(x0, r, params, cap)?.into_iter().collect();
        (sphere.par_iter().all(|y| spherical_maximal(&delta, y) > threshold), "enumeration")
    } else {
        // From y the only sphere meeting x0 has radius r, so M∘δ(y) = 1/|S(depth y, r)|.
        let ok = sphere_level_counts(j, r, params)
            .entries
            .iter()
            .all(|c| Exact::one() / Exact::from_biguint(&sphere_size(c.level, r, params)) > threshold);
        (ok, "level-cells")
    };
    let consistent = measured_weak_constant.map(|c| ratio.to_f64() <= 2.0 * c);
    Ok(NecessityResult { ratio, inclusion, inclusion_method, consistent })
}

// ---------------------------------------------------------------------------
// Strong type and vector-valued

#[derive(Clone, Debug, PartialEq)]
pub struct NormRatio {
    pub lhs_lower: f64,
    pub lhs_upper: f64,
    pub rhs: f64,
    pub ratio_lower: f64,
    pub ratio_upper: f64,
    pub domain_radius: usize,
    pub domain_size: usize,
}

fn neighbourhood<'a>(
    supports: impl Iterator<Item = &'a VertexId>,
    d: usize,
    params: &TreeParams,
    cap: usize,
) -> Result<Vec<VertexId>, LabError> {
    let mut set = BTreeSet::new();
    for y in supports {
        set.extend(enumerate_ball(y, d, params, cap)?);
    }
    Ok(set.into_iter().collect())
}

/// `sum_{d > D} (1 + 1/k) k^d k^(-d p)`: vertices at distance `d` from one
/// support point, weighted by the decay bound of `Mf`.
fn tail_factor(k: f64, p: f64, d: usize) -> f64 {
    (1.0 + 1.0 / k) * k.powf((1.0 - p) * (d as f64 + 1.0)) / (1.0 - k.powf(1.0 - p))
}

/// `(sum (Mf)^p w)^(1/p) / (sum f^p M_s w)^(1/p)`, the left side enclosed by
/// exact evaluation on `B(supp f, D)` plus a closed-form tail.
pub fn strong_ratio(
    f: &PointFunction<f64>,
    w: &Weight<f64>,
    p: Exponent,
    s: Exponent,
    kind: MaximalKind,
    domain_radius: usize,
    cap: usize,
) -> Result<NormRatio, LabError> {
    let params = *f.params();
    check_branching(&params)?;
    check_exponent("p", p)?;
    check_exponent("s", s)?;
    let pf = exponent_to_f64(p);
    let sup_w = w.sup().ok_or_else(|| LabError::BadParameter("weight must be bounded".into()))?;
    let domain = neighbourhood(f.support().map(|(v, _)| v), domain_radius, &params, cap)?;
    let lhs: f64 = domain.par_iter().map(|x| maximal(f, x, kind).powf(pf) * w.evaluate(x)).collect::<Vec<_>>().iter().sum();
    let tail = sup_w * f.support_len() as f64 * f.l1_norm().powf(pf) * tail_factor(params.k() as f64, pf, domain_radius);
    let mut cache = MsCache::new(w, s, kind, params);
    let mut rhs = 0.0;
    for (x, v) in f.support() {
        rhs += v.powf(pf) * cache.get(x)?;
    }
    if !(rhs > 0.0) {
        return Err(LabError::UndefinedRatio("right side vanishes".into()));
    }
    finish_norm_ratio(lhs, tail, rhs, pf, domain_radius, domain.len())
}

fn finish_norm_ratio(lhs: f64, tail: f64, rhs: f64, p: f64, d: usize, n: usize) -> Result<NormRatio, LabError> {
    let lhs_lower = lhs.powf(1.0 / p);
    let lhs_upper = (lhs + tail).powf(1.0 / p);
    let rhs = rhs.powf(1.0 / p);
    Ok(NormRatio {
        lhs_lower,
        lhs_upper,
        rhs,
        ratio_lower: lhs_lower / rhs,
        ratio_upper: lhs_upper / rhs,
        domain_radius: d,
        domain_size: n,
    })
}

/// `|| (sum_i (M f_i)^q)^(1/q) ||_p / || (sum_i |f_i|^q)^(1/q) ||_p`.
pub fn vector_valued_ratio(
    fs: &[PointFunction<f64>],
    p: Exponent,
    q: Exponent,
    kind: MaximalKind,
    domain_radius: usize,
    cap: usize,
) -> Result<NormRatio, LabError> {
    let params = *fs.first().ok_or_else(|| LabError::BadParameter("empty family".into()))?.params();
    check_branching(&params)?;
    check_exponent("q", q)?;
    if q > p {
        return Err(LabError::BadParameter(format!("need q <= p, got q = {q}, p = {p}")));
    }
    let (pf, qf) = (exponent_to_f64(p), exponent_to_f64(q));
    let union: BTreeSet<VertexId> = fs.iter().flat_map(|f| f.support().map(|(v, _)| v.clone())).collect();
    let domain = neighbourhood(union.iter(), domain_radius, &params, cap)?;
    let lhs: f64 = domain
        .par_iter()
        .map(|x| fs.iter().map(|f| maximal(f, x, kind).powf(qf)).sum::<f64>().powf(pf / qf))
        .collect::<Vec<_>>()
        .iter()
        .sum();
    let norms = fs.iter().map(|f| f.l1_norm().powf(qf)).sum::<f64>().powf(pf / qf);
    let tail = union.len() as f64 * norms * tail_factor(params.k() as f64, pf, domain_radius);
    let rhs: f64 = union.iter().map(|x| fs.iter().map(|f| f.evaluate(x).powf(qf)).sum::<f64>().powf(pf / qf)).sum();
    if !(rhs > 0.0) {
        return Err(LabError::UndefinedRatio("right side vanishes".into()));
    }
    finish_norm_ratio(lhs, tail, rhs, pf, domain_radius, domain.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use treehl_core::numerics::parse_rational;

    fn q(s: &str) -> Exact {
        parse_rational(s).unwrap()
    }

    fn k2() -> TreeParams {
        TreeParams::new(2).unwrap()
    }

    #[test]
    fn pair_count_examples() {
        let one: Weight<Exact> = RadialProfile::constant(q("1")).unwrap().into();
        let root: BTreeSet<VertexId> = [VertexId::root()].into();
        let qr = PairCountQuery { e: root.clone(), f: root.clone(), r: 0, w: one.clone() };
        assert_eq!(weighted_pair_count(&qr, &k2(), 100).unwrap(), q("1"));
        let level2: BTreeSet<VertexId> = truncation(2, &k2()).into_iter().collect();
        let qr = PairCountQuery { e: root, f: level2, r: 2, w: one };
        assert_eq!(weighted_pair_count(&qr, &k2(), 100).unwrap(), q("4"));
    }

    #[test]
    fn borders_trivial_cases() {
        let delta: Weight<f64> = PointFunction::delta(k2(), VertexId::root()).into();
        let root: BTreeSet<VertexId> = [VertexId::root()].into();
        let qr = PairCountQuery { e: root.clone(), f: root.clone(), r: 0, w: delta };
        for s in [Exponent::new(3, 2), Exponent::from(2), Exponent::from(3)] {
            assert!((borders_ratio(&qr, s, &k2()).unwrap() - 1.0).abs() < 1e-12);
        }
        let zero: Weight<f64> = RadialProfile::zero().into();
        let qr = PairCountQuery { e: root.clone(), f: root, r: 0, w: zero };
        assert!(matches!(borders_ratio(&qr, Exponent::from(2), &k2()), Err(LabError::UndefinedRatio(_))));
    }

    #[test]
    fn weak_type_delta_root_sphere_limit() {
        let f = PointFunction::delta(k2(), VertexId::root());
        let one: Weight<f64> = RadialProfile::constant(1.0).unwrap().into();
        let curve = weak_type_constant(&f, &one, Exponent::from(2), MaximalKind::Sphere, 12, 1 << 20).unwrap();
        // Breakpoint d: value 1/(2^d + 2^(d-1)), measure 2^(d+1) - 1.
        assert_eq!(curve.breakpoints.len(), 12);
        for (d, b) in curve.breakpoints.iter().enumerate().skip(1) {
            assert_eq!(b.value, Exact::one() / Exact::from_u64(3u64 << (d - 1)));
            assert_eq!(b.measure, ((1u64 << (d + 1)) - 1) as f64);
        }
        assert!(curve.max < 4.0 / 3.0 && curve.max > 4.0 / 3.0 - 1e-3);
        let delta_w: Weight<f64> = PointFunction::delta(k2(), VertexId::root()).into();
        let curve = weak_type_constant(&f, &delta_w, Exponent::from(2), MaximalKind::Sphere, 8, 1 << 20).unwrap();
        assert!((curve.max - 1.0).abs() < 1e-12);
    }

    #[test]
    fn counterexample_small() {
        let scan = counterexample_scan(&[1, 2, 3, 8], 1, 2, MaximalKind::Sphere, 16).unwrap();
        for row in &scan.rows {
            assert_eq!(row.measure, Exact::from_u64(row.j as u64 + 1));
            assert_eq!(row.integral_w, Exact::from_u64(3));
            assert!((row.ratio_lower - (row.j as f64 + 1.0) / 3.0).abs() < 1e-12);
        }
        assert_eq!(scan.c_sup, Exact::one());
    }

    #[test]
    fn radial_beta_minus_one_is_flat() {
        let scan = radial_weight_scan(Exponent::from(-1), 12, 12, 2).unwrap();
        for j in 0..=12 {
            for r in 0..=j {
                assert!((scan.ratios[j][r] - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn necessity_examples() {
        let one: Weight<Exact> = RadialProfile::constant(q("1")).unwrap().into();
        let x0 = VertexId::new(vec![0, 1], &k2()).unwrap();
        let res = necessity_check(&one, &x0, 3, &k2(), None, 1 << 16).unwrap();
        assert_eq!(res.ratio, q("11/8"));
        assert!(res.inclusion);
        let cex: Weight<Exact> = RadialProfile::counterexample(&k2()).into();
        for r in 0..6 {
            let res = necessity_check(&cex, &VertexId::root(), r, &k2(), Some(1.0), 1 << 16).unwrap();
            assert_eq!(res.ratio, Exact::one() / Exact::from_u64(1 << r));
            assert_eq!(res.consistent, Some(true));
        }
    }

    #[test]
    fn strong_delta_root() {
        let f = PointFunction::delta(k2(), VertexId::root());
        let one: Weight<f64> = RadialProfile::constant(1.0).unwrap().into();
        let res = strong_ratio(&f, &one, Exponent::from(2), Exponent::from(2), MaximalKind::Sphere, 12, 1 << 20).unwrap();
        let exact = (13.0f64 / 9.0).sqrt();
        assert!(res.ratio_lower <= exact && exact <= res.ratio_upper);
        assert!(res.ratio_upper < 2.0);
    }

    #[test]
    fn fit_line_recovers() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys = [1.0, 3.0, 5.0, 7.0];
        assert_eq!(fit_line(&xs, &ys), (2.0, 1.0));
    }
}
