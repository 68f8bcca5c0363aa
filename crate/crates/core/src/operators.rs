//! Sphere and ball averages, the maximal operators built from them, and the
//! superlevel sets those operators define.
//!
//! Two engines evaluate the same quantities:
//!
//! * point functions are handled by bucketing the support by distance from
//!   the centre (`enumerated` variants materialize the spheres instead, and
//!   serve as a brute-force reference);
//! * radial profiles are handled level-by-level through
//!   [`sphere_level_counts`](crate::tree::sphere_level_counts), which keeps
//!   the cost independent of the astronomically large level sizes.
//!
//! Suprema over infinitely many radii are resolved by a certificate: once
//! every cell of `S(x, r)` lies in the geometric tail of a profile with ratio
//! `q`, the sphere average is `C q^r`, so for `q <= 1` the supremum is a
//! finite maximum and for `q > 1` it is infinite.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::OperatorError;
use crate::functions::{PointFunction, RadialProfile, Tail, Weight};
use crate::numerics::{conjugate, Enclosure, Exponent, Scalar};
use crate::tree::{ball_size, distance, enumerate_ball, enumerate_sphere, sphere_size, TreeParams, VertexId};

/// Largest vertex set the enumeration engine will materialize by default.
pub const DEFAULT_ENUMERATION_CAP: usize = 1 << 22;

/// Sphere averages (`M∘`) or ball averages (`M`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MaximalKind {
    Sphere,
    Ball,
}

impl MaximalKind {
    pub fn label(self) -> &'static str {
        match self {
            MaximalKind::Sphere => "sphere",
            MaximalKind::Ball => "ball",
        }
    }
}

impl std::str::FromStr for MaximalKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sphere" => Ok(MaximalKind::Sphere),
            "ball" => Ok(MaximalKind::Ball),
            other => Err(format!("unknown maximal kind {other:?}; expected sphere or ball")),
        }
    }
}

/// Operator parameters shared by the scans.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorConfig {
    /// Hoelder exponent, `s > 1`.
    pub s: Exponent,
    pub maximal_kind: MaximalKind,
    /// Doublings of the ball-average cutoff radius when the tail bound does
    /// not close the enclosure.
    pub refine_doublings: u32,
    /// Radius up to which the tail constant of the iterated operator is
    /// computed exactly before switching to the closed-form bound.
    pub bound_radius: usize,
}

impl OperatorConfig {
    pub fn new(s: Exponent, maximal_kind: MaximalKind) -> Result<Self, OperatorError> {
        if s <= Exponent::from(1) {
            return Err(OperatorError::BadExponent(s.to_string()));
        }
        Ok(Self { s, maximal_kind, refine_doublings: 2, bound_radius: 32 })
    }

    pub fn s_conjugate(&self) -> Exponent {
        conjugate(self.s)
    }
}

impl Default for OperatorConfig {
    fn default() -> Self {
        Self { s: Exponent::from(2), maximal_kind: MaximalKind::Sphere, refine_doublings: 2, bound_radius: 32 }
    }
}

// ---------------------------------------------------------------------------
// Point engine

/// `sums[r] = sum of f over S(x, r)` for every radius that can meet the support.
fn distance_sums<S: Scalar>(f: &PointFunction<S>, x: &VertexId) -> Vec<S> {
    let r_max = x.depth() + f.max_support_depth();
    let mut sums = vec![S::zero(); r_max + 1];
    for (y, v) in f.support() {
        let d = distance(x, y);
        sums[d] = sums[d].clone() + v.clone();
    }
    sums
}

fn sphere_size_s<S: Scalar>(j: usize, r: usize, params: &TreeParams) -> S {
    S::from_biguint(&sphere_size(j, r, params))
}

/// `A_r∘ f(x)`.
pub fn sphere_average<S: Scalar>(f: &Weight<S>, x: &VertexId, r: usize, params: &TreeParams) -> S {
    match f {
        Weight::Point(f) => {
            let total = f.support().filter(|(y, _)| distance(x, y) == r).fold(S::zero(), |a, (_, v)| a + v.clone());
            total / sphere_size_s(x.depth(), r, params)
        }
        Weight::Radial(p) => radial_sphere_average(p, x.depth(), r, params),
    }
}

/// Average over `B(x, r)`.
pub fn ball_average<S: Scalar>(f: &Weight<S>, x: &VertexId, r: usize, params: &TreeParams) -> S {
    let total = (0..=r).fold(S::zero(), |acc, rho| {
        acc + sphere_average(f, x, rho, params) * sphere_size_s(x.depth(), rho, params)
    });
    total / S::from_biguint(&ball_size(x.depth(), r, params))
}

/// Brute-force sphere average over the materialized sphere.
pub fn sphere_average_enumerated<S: Scalar>(
    f: &Weight<S>,
    x: &VertexId,
    r: usize,
    params: &TreeParams,
    cap: usize,
) -> Result<S, OperatorError> {
    let sphere = enumerate_sphere(x, r, params, cap)?;
    let n = sphere.len() as u64;
    let total = sphere.iter().fold(S::zero(), |a, y| a + f.evaluate(y));
    Ok(total / S::from_u64(n))
}

/// Maximal value together with the smallest radius attaining it.
pub fn maximal_with_radius<S: Scalar>(f: &PointFunction<S>, x: &VertexId, kind: MaximalKind) -> (S, usize) {
    let params = *f.params();
    let sums = distance_sums(f, x);
    let j = x.depth();
    let mut best = (S::zero(), 0usize);
    let mut acc_sum = S::zero();
    let mut acc_size = S::zero();
    for (r, sum) in sums.into_iter().enumerate() {
        let size: S = sphere_size_s(j, r, &params);
        let avg = match kind {
            MaximalKind::Sphere => sum / size,
            MaximalKind::Ball => {
                acc_sum = acc_sum + sum;
                acc_size = acc_size + size;
                acc_sum.clone() / acc_size.clone()
            }
        };
        if avg > best.0 {
            best = (avg, r);
        }
    }
    best
}

/// `M∘ f(x)`: exact, since no sphere beyond `depth(x) + depth(supp f)` meets the support.
pub fn spherical_maximal<S: Scalar>(f: &PointFunction<S>, x: &VertexId) -> S {
    maximal_with_radius(f, x, MaximalKind::Sphere).0
}

/// `M f(x)` over balls with `r >= 0`.
pub fn ball_maximal<S: Scalar>(f: &PointFunction<S>, x: &VertexId) -> S {
    maximal_with_radius(f, x, MaximalKind::Ball).0
}

pub fn maximal<S: Scalar>(f: &PointFunction<S>, x: &VertexId, kind: MaximalKind) -> S {
    maximal_with_radius(f, x, kind).0
}

/// Reference implementation that materializes every sphere or ball.
pub fn maximal_enumerated<S: Scalar>(
    f: &PointFunction<S>,
    x: &VertexId,
    kind: MaximalKind,
    cap: usize,
) -> Result<S, OperatorError> {
    let params = *f.params();
    let r_max = x.depth() + f.max_support_depth();
    let mut best = S::zero();
    for r in 0..=r_max {
        let set = match kind {
            MaximalKind::Sphere => enumerate_sphere(x, r, &params, cap)?,
            MaximalKind::Ball => enumerate_ball(x, r, &params, cap)?,
        };
        let n = set.len() as u64;
        let total = set.iter().fold(S::zero(), |a, y| a + f.evaluate(y));
        best = S::max_of(best, total / S::from_u64(n));
    }
    Ok(best)
}

// ---------------------------------------------------------------------------
// Radial engine

struct Powers<S> {
    kp: Vec<S>,
    km1: S,
}

impl<S: Scalar> Powers<S> {
    fn new(params: &TreeParams, n: usize) -> Self {
        let k = S::from_u64(params.k() as u64);
        let mut kp = Vec::with_capacity(n + 1);
        let mut acc = S::one();
        for _ in 0..=n {
            kp.push(acc.clone());
            acc = acc * k.clone();
        }
        Self { kp, km1: S::from_u64(params.k() as u64 - 1) }
    }

    /// `(sum over S(x, r) of c, |S(x, r)|)` for `x` at depth `j`; `c` must
    /// cover levels up to `j + r`.
    fn sphere_terms(&self, c: &[S], j: usize, r: usize) -> (S, S) {
        if r == 0 {
            return (c[j].clone(), S::one());
        }
        let mut num = self.kp[r].clone() * c[j + r].clone();
        let mut size = self.kp[r].clone();
        for m in 1..=(r - 1).min(j) {
            let cnt = self.km1.clone() * self.kp[r - m - 1].clone();
            num = num + cnt.clone() * c[j + r - 2 * m].clone();
            size = size + cnt;
        }
        if r <= j {
            num = num + c[j - r].clone();
            size = size + S::one();
        }
        (num, size)
    }
}

/// `A_r∘` of a radial profile at depth `j`.
pub fn radial_sphere_average<S: Scalar>(profile: &RadialProfile<S>, j: usize, r: usize, params: &TreeParams) -> S {
    let c = profile.values_up_to(j + r);
    let (num, size) = Powers::new(params, r).sphere_terms(&c, j, r);
    num / size
}

/// Sphere averages `A(j, 0..=r_max)` of a radial profile.
pub fn radial_sphere_averages<S: Scalar>(
    profile: &RadialProfile<S>,
    j: usize,
    r_max: usize,
    params: &TreeParams,
) -> Vec<S> {
    let c = profile.values_up_to(j + r_max);
    let pw = Powers::new(params, r_max);
    (0..=r_max)
        .map(|r| {
            let (num, size) = pw.sphere_terms(&c, j, r);
            num / size
        })
        .collect()
}

/// Geometric ratio governing the far radii; `None` when the tail vanishes.
fn effective_ratio<S: Scalar>(profile: &RadialProfile<S>) -> Option<&S> {
    if profile.has_zero_tail() {
        None
    } else {
        profile.tail_ratio()
    }
}

fn check_convergent<S: Scalar>(profile: &RadialProfile<S>) -> Result<(), OperatorError> {
    match effective_ratio(profile) {
        Some(q) if *q > S::one() => Err(OperatorError::Divergent { growth: q.to_decimal() }),
        _ => Ok(()),
    }
}

/// Radius from which every cell of a depth-`j` sphere lies in the tail.
fn tail_radius<S: Scalar>(profile: &RadialProfile<S>, j: usize) -> usize {
    j + profile.head_len().max(1)
}

fn rounding_ops(terms: usize) -> u32 {
    u32::try_from(4 * terms + 8).unwrap_or(u32::MAX)
}

/// One application of `M∘` or `M` to a radial profile, evaluated at depth `j`.
///
/// Sphere kind: exact (degenerate up to float rounding). Ball kind: an
/// enclosure from the cutoff argument, tightened by up to `refine_doublings`
/// doublings of the cutoff.
pub fn radial_maximal_at<S: Scalar>(
    profile: &RadialProfile<S>,
    j: usize,
    kind: MaximalKind,
    refine_doublings: u32,
    params: &TreeParams,
) -> Result<Enclosure<S>, OperatorError> {
    check_convergent(profile)?;
    let r_star = tail_radius(profile, j);
    match kind {
        MaximalKind::Sphere => {
            let best = radial_sphere_averages(profile, j, r_star, params).into_iter().fold(S::zero(), S::max_of);
            Ok(Enclosure::rounded(best, rounding_ops(r_star * (j + 2))))
        }
        MaximalKind::Ball => {
            let mut cutoff = r_star;
            let mut doublings = 0;
            loop {
                let c = profile.values_up_to(j + cutoff + 1);
                let pw = Powers::new(params, cutoff + 1);
                let mut acc_num = S::zero();
                let mut acc_size = S::zero();
                let mut lo = S::zero();
                for r in 0..=cutoff {
                    let (num, size) = pw.sphere_terms(&c, j, r);
                    acc_num = acc_num + num;
                    acc_size = acc_size + size;
                    lo = S::max_of(lo, acc_num.clone() / acc_size.clone());
                }
                let (num, size) = pw.sphere_terms(&c, j, cutoff + 1);
                let next = num / size;
                let ops = rounding_ops(cutoff * (j + 2));
                if next <= lo || doublings >= refine_doublings {
                    let hi = S::max_of(lo.clone(), next);
                    return Ok(Enclosure::new(lo.round_down(ops), hi.round_up(ops))?);
                }
                cutoff *= 2;
                doublings += 1;
            }
        }
    }
}

/// Upper bound `K` on `sup_{j, r} A(j, r) / q^j` for the profile `c_i = q^i`,
/// valid for `1/k <= q <= 1` (and `q = 1` when `k = 1`).
pub fn geometric_gain_bound<S: Scalar>(q: &S, bound_radius: usize, params: &TreeParams) -> Result<S, OperatorError> {
    let k = params.k() as u64;
    let ks = S::from_u64(k);
    let one = S::one();
    if *q > one || (k >= 2 && q.clone() * ks.clone() < one) {
        return Err(OperatorError::Divergent { growth: q.to_decimal() });
    }
    let u = one.clone() / (ks.clone() * q.clone() * q.clone());
    let mut big_r = bound_radius.max(1);
    if k >= 2 && u == one {
        // (r - 1) q^r decreases once r >= 1 / (1 - q).
        let gap = one.checked_sub(q).expect("q < 1 when u = 1");
        let need = (one.clone() / gap).to_f64().ceil() as usize + 1;
        big_r = big_r.max(need);
    }
    let geo = RadialProfile::new(Vec::new(), Tail::Geometric { first: one.clone(), ratio: q.clone() })?;
    let exact = (0..=big_r)
        .into_par_iter()
        .map(|j| {
            let row = radial_sphere_averages(&geo, j, big_r, params);
            let scale = q.pow_u(j as u64);
            row.into_iter().fold(S::zero(), |a, v| S::max_of(a, v / scale.clone()))
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(S::zero(), S::max_of);

    let n = (big_r + 1) as u64;
    let q_n = q.pow_u(n);
    let (a, b) = if k >= 2 {
        let t2 = if u < one {
            q_n.clone() * u.clone() / one.checked_sub(&u).expect("u < 1")
        } else if u > one {
            (q.clone() * u.clone()).pow_u(n) / u.checked_sub(&one).expect("u > 1")
        } else {
            S::from_u64(big_r as u64) * q_n.clone()
        };
        let kq_inv_n = one.clone() / (ks.clone() * q.clone()).pow_u(n);
        let kp1 = S::from_u64(k + 1);
        let km1 = S::from_u64(k - 1);
        let a = ks.clone() / kp1.clone() * (q_n.clone() + kq_inv_n) + km1.clone() / kp1 * t2.clone();
        let b = q_n.clone() + km1 / ks * t2;
        (a, b)
    } else {
        // Path graph: the two-vertex spheres average the two endpoints.
        let a = (q_n.clone() + one.clone() / q_n.clone()) / S::from_u64(2);
        (a, q_n)
    };
    let k_bound = S::max_of(exact, S::max_of(a, b));
    Ok(k_bound.round_up(rounding_ops(big_r * big_r)))
}

/// Upper profile bounding `M∘ w` on depths `> head_end` by `C K q~^j`.
fn upper_tail<S: Scalar>(
    profile: &RadialProfile<S>,
    head_end: usize,
    bound_radius: usize,
    params: &TreeParams,
) -> Result<Tail<S>, OperatorError> {
    let inv_k = S::one() / S::from_u64(params.k() as u64);
    let q = effective_ratio(profile).cloned().unwrap_or_else(S::zero);
    let qt = if params.k() == 1 { S::one() } else { S::max_of(q, inv_k) };
    let mut c = S::zero();
    for (i, v) in profile.values_up_to(profile.head_len()).into_iter().enumerate() {
        c = S::max_of(c, v / qt.pow_u(i as u64));
    }
    if c.is_zero() {
        return Ok(Tail::Zero);
    }
    let kb = geometric_gain_bound(&qt, bound_radius, params)?;
    let first = (c * kb * qt.pow_u(head_end as u64 + 1)).round_up(rounding_ops(head_end + 8));
    Ok(Tail::Geometric { first, ratio: qt })
}

/// `(M∘)^n` or `M^n` of a radial profile on depths `0..=max_depth`.
///
/// For `n = 1` this is [`radial_maximal_at`] per depth. For `n >= 2` a lower
/// and an upper profile are carried forward: heads exact on a working window,
/// the lower tail inherited from the input (`M w >= w`), the upper tail from
/// the closed-form gain bound. Monotonicity of the operator makes each
/// iterate enclose the true one.
pub fn radial_maximal<S: Scalar>(
    profile: &RadialProfile<S>,
    max_depth: usize,
    n_iter: usize,
    kind: MaximalKind,
    config: &OperatorConfig,
    params: &TreeParams,
) -> Result<Vec<Enclosure<S>>, OperatorError> {
    if n_iter == 0 {
        return Err(OperatorError::NoIterations);
    }
    check_convergent(profile)?;
    if n_iter == 1 {
        return (0..=max_depth)
            .into_par_iter()
            .map(|j| radial_maximal_at(profile, j, kind, config.refine_doublings, params))
            .collect();
    }
    let window = max_depth.max(profile.head_len()) + 1;
    let mut lo = profile.clone();
    let mut hi = profile.clone();
    let mut out = Vec::new();
    for step in 0..n_iter {
        let heads: Vec<(S, S)> = (0..=window)
            .into_par_iter()
            .map(|j| {
                let a = radial_maximal_at(&lo, j, kind, config.refine_doublings, params)?;
                let b = radial_maximal_at(&hi, j, kind, config.refine_doublings, params)?;
                Ok((a.lower().clone(), b.upper().clone()))
            })
            .collect::<Result<_, OperatorError>>()?;
        if step + 1 == n_iter {
            out = heads
                .into_iter()
                .take(max_depth + 1)
                .map(|(a, b)| Enclosure::new(a.clone(), S::max_of(a, b)))
                .collect::<Result<_, _>>()?;
            break;
        }
        let lo_tail = match effective_ratio(&lo) {
            None => Tail::Zero,
            Some(q) => Tail::Geometric { first: lo.value(window + 1), ratio: q.clone() },
        };
        let hi_tail = upper_tail(&hi, window, config.bound_radius, params)?;
        let (lo_head, hi_head): (Vec<S>, Vec<S>) = heads.into_iter().unzip();
        lo = RadialProfile::new(lo_head, lo_tail)?;
        hi = RadialProfile::new(hi_head, hi_tail)?;
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// M_s

/// `M_s w(x) = (M (w^s))(x)^(1/s)` in the requested kind.
pub fn m_s<S: Scalar>(
    w: &Weight<S>,
    x: &VertexId,
    s: Exponent,
    kind: MaximalKind,
    params: &TreeParams,
) -> Result<Enclosure<S>, OperatorError> {
    if s <= Exponent::from(1) {
        return Err(OperatorError::BadExponent(s.to_string()));
    }
    let ws = w.power(s)?;
    let inv = Exponent::from(1) / s;
    let inner = match &ws {
        Weight::Point(f) => Enclosure::rounded(maximal(f, x, kind), rounding_ops(x.depth() + f.max_support_depth())),
        Weight::Radial(p) => radial_maximal_at(p, x.depth(), kind, OperatorConfig::default().refine_doublings, params)?,
    };
    Ok(inner.pow_ratio(inv)?)
}

// ---------------------------------------------------------------------------
// Superlevel sets and weighted measure

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Exactness {
    Exact,
    Enclosure,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", content = "members", rename_all = "lowercase")]
pub enum Members {
    Vertices(BTreeSet<VertexId>),
    Levels(BTreeSet<usize>),
}

/// `{x : maximal(f)(x) > lambda}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperlevelSet<S> {
    pub lambda: S,
    pub kind: MaximalKind,
    pub members: Members,
    pub exactness: Exactness,
    /// Levels whose enclosure could not decide membership (excluded from
    /// `members`).
    pub straddling: Vec<usize>,
}

impl<S: Scalar> SuperlevelSet<S> {
    pub fn len(&self) -> usize {
        match &self.members {
            Members::Vertices(v) => v.len(),
            Members::Levels(l) => l.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "lambda": self.lambda.to_decimal(),
            "kind": self.kind,
            "members": self.members,
            "exactness": self.exactness,
            "straddling": self.straddling,
        })
    }
}

/// Smallest `d` with `k^d * lambda >= total`.
fn localization_radius<S: Scalar>(total: &S, lambda: &S, params: &TreeParams) -> usize {
    let k = S::from_u64(params.k() as u64);
    let mut d = 0;
    let mut reach = lambda.clone();
    while reach < *total {
        reach = reach * k.clone();
        d += 1;
    }
    d
}

/// Exact superlevel set of a finitely supported function. Every vertex
/// farther than `log_k(|f|_1 / lambda)` from the support has all averages at
/// most `lambda`, so only that neighbourhood is scanned.
pub fn superlevel_point<S: Scalar>(
    f: &PointFunction<S>,
    lambda: &S,
    kind: MaximalKind,
    cap: usize,
) -> Result<SuperlevelSet<S>, OperatorError> {
    let params = *f.params();
    if params.k() < 2 {
        return Err(OperatorError::UnsupportedBranching);
    }
    if !(lambda > &S::zero()) {
        return Err(OperatorError::Numerics(crate::error::NumericsError::Negative(lambda.to_decimal())));
    }
    let d = localization_radius(&f.l1_norm(), lambda, &params);
    let mut candidates = BTreeSet::new();
    for (y, _) in f.support() {
        candidates.extend(enumerate_ball(y, d, &params, cap)?);
        if candidates.len() > cap {
            return Err(crate::error::TreeError::EnumerationCap { size: candidates.len().to_string(), cap }.into());
        }
    }
    let candidates: Vec<VertexId> = candidates.into_iter().collect();
    let members: BTreeSet<VertexId> = candidates
        .par_iter()
        .filter(|x| maximal(f, x, kind) > *lambda)
        .cloned()
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    Ok(SuperlevelSet {
        lambda: lambda.clone(),
        kind,
        members: Members::Vertices(members),
        exactness: Exactness::Exact,
        straddling: Vec::new(),
    })
}

/// Superlevel set of a radial profile as a set of levels.
///
/// With a zero tail the scan covers every level that can exceed `lambda`;
/// otherwise `window` (the last level to examine) is required.
pub fn superlevel_radial<S: Scalar>(
    profile: &RadialProfile<S>,
    lambda: &S,
    kind: MaximalKind,
    window: Option<usize>,
    params: &TreeParams,
) -> Result<SuperlevelSet<S>, OperatorError> {
    if params.k() < 2 {
        return Err(OperatorError::UnsupportedBranching);
    }
    if !(lambda > &S::zero()) {
        return Err(OperatorError::Numerics(crate::error::NumericsError::Negative(lambda.to_decimal())));
    }
    let last = match window {
        Some(w) => w,
        None if profile.has_zero_tail() => {
            let total = profile.l1_norm(params)?;
            profile.head_len().saturating_sub(1) + localization_radius(&total, lambda, params)
        }
        None => return Err(OperatorError::UnboundedSupport),
    };
    let encl = radial_maximal(profile, last, 1, kind, &OperatorConfig::default(), params)?;
    let mut levels = BTreeSet::new();
    let mut straddling = Vec::new();
    for (j, e) in encl.iter().enumerate() {
        if e.exceeds(lambda) {
            levels.insert(j);
        } else if e.straddles(lambda) {
            straddling.push(j);
        }
    }
    Ok(SuperlevelSet {
        lambda: lambda.clone(),
        kind,
        members: Members::Levels(levels),
        exactness: if straddling.is_empty() { Exactness::Exact } else { Exactness::Enclosure },
        straddling,
    })
}

/// `w(E)` for a superlevel set `E`.
pub fn weighted_measure<S: Scalar>(w: &Weight<S>, set: &SuperlevelSet<S>, params: &TreeParams) -> S {
    match &set.members {
        Members::Vertices(vs) => vs.iter().fold(S::zero(), |a, v| a + w.evaluate(v)),
        Members::Levels(levels) => match w {
            Weight::Radial(p) => levels
                .iter()
                .fold(S::zero(), |a, &i| a + p.value(i) * S::from_biguint(&params.level_size(i))),
            Weight::Point(f) => f
                .support()
                .filter(|(v, _)| levels.contains(&v.depth()))
                .fold(S::zero(), |a, (_, x)| a + x.clone()),
        },
    }
}

/// Exact ball/sphere size ratio, the structural quantity behind the factor 2
/// comparing the two operators.
pub fn ball_sphere_ratio(j: usize, r: usize, params: &TreeParams) -> (BigUint, BigUint) {
    (ball_size(j, r, params), sphere_size(j, r, params))
}
