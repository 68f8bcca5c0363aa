//! Finite trees: sphere statistics, the expansion constant `E_T^w(s, r, α)`,
//! the constant `Γ` (modulo `c_α`), the abstract weak-type check, and
//! pluggable majorants.
//!
//! All float sums run in vertex-index order. Functions that must be
//! invariant under relabeling first move their input to a canonical
//! labeling, so isomorphic inputs give bit-identical outputs.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;
use std::sync::atomic::{AtomicU64, Ordering};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use treehl_core::numerics::exponent_to_f64;
use treehl_core::Exponent;

use crate::error::LabError;
use crate::report::{ConstantReport, GridPoint};

pub const EXHAUSTIVE_POOL_LIMIT: usize = 12;

// ---------------------------------------------------------------------------
// Trees

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteTree {
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    root: usize,
}

impl FiniteTree {
    /// Validates a parent array: exactly one root, every vertex reaches it.
    pub fn from_parents(parent: Vec<Option<usize>>) -> Result<Self, LabError> {
        let n = parent.len();
        if n == 0 {
            return Err(LabError::TreeFormat("empty tree".into()));
        }
        let roots: Vec<usize> = (0..n).filter(|&v| parent[v].is_none()).collect();
        if roots.len() != 1 {
            return Err(LabError::TreeFormat(format!("expected one root, found {}", roots.len())));
        }
        let mut children = vec![Vec::new(); n];
        for (v, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                if p >= n {
                    return Err(LabError::TreeFormat(format!("parent {p} of {v} out of range")));
                }
                children[p].push(v);
            }
        }
        let tree = Self { parent, children, root: roots[0] };
        let seen = tree.bfs_order().len();
        if seen != n {
            return Err(LabError::TreeFormat(format!("{} vertices unreachable from the root (cycle)", n - seen)));
        }
        Ok(tree)
    }

    /// Edge list of `parent child` lines; vertex 0 is the root and blank
    /// lines or `#` comments are skipped.
    pub fn parse_edge_list(text: &str) -> Result<Self, LabError> {
        let mut edges = Vec::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let nums: Vec<&str> = line.split_whitespace().collect();
            let parse = |s: &str| {
                s.parse::<usize>().map_err(|_| LabError::TreeFormat(format!("line {}: bad vertex {s:?}", no + 1)))
            };
            if nums.len() != 2 {
                return Err(LabError::TreeFormat(format!("line {}: expected `parent child`", no + 1)));
            }
            edges.push((parse(nums[0])?, parse(nums[1])?));
        }
        let n = edges.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(1);
        let mut parent = vec![None; n];
        for (p, c) in edges {
            if c == 0 {
                return Err(LabError::TreeFormat("vertex 0 is the root and cannot be a child".into()));
            }
            if parent[c].replace(p).is_some() {
                return Err(LabError::TreeFormat(format!("vertex {c} has two parents")));
            }
        }
        Self::from_parents(parent)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (v, p) in self.parent.iter().enumerate() {
            if let Some(p) = p {
                let _ = writeln!(out, "{p} {v}");
            }
        }
        out
    }

    /// Complete `k`-ary truncation in breadth-first order: the children of
    /// `i` are `k i + 1 ..= k i + k`.
    pub fn kary(k: usize, depth: usize) -> Result<Self, LabError> {
        if k == 0 {
            return Err(LabError::BadParameter("k >= 1 required".into()));
        }
        let mut n = 1usize;
        let mut level = 1usize;
        for _ in 0..depth {
            level = level.checked_mul(k).ok_or_else(|| LabError::BadParameter("tree too large".into()))?;
            n = n.checked_add(level).ok_or_else(|| LabError::BadParameter("tree too large".into()))?;
        }
        if n > 1 << 22 {
            return Err(LabError::BadParameter(format!("{n} vertices exceed the 2^22 limit")));
        }
        Self::from_parents((0..n).map(|i| if i == 0 { None } else { Some((i - 1) / k) }).collect())
    }

    pub fn path(n: usize) -> Result<Self, LabError> {
        Self::from_parents((0..n).map(|i| i.checked_sub(1)).collect())
    }

    /// Random recursive tree: the parent of `i` is uniform in `0..i`.
    pub fn random(n: usize, seed: u64) -> Result<Self, LabError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::from_parents((0..n).map(|i| if i == 0 { None } else { Some(rng.gen_range(0..i)) }).collect())
    }

    /// `kary k depth`, `path n` or `random n seed`.
    pub fn from_spec(spec: &str) -> Result<Self, LabError> {
        let parts: Vec<&str> = spec.split_whitespace().collect();
        let num = |i: usize| -> Result<u64, LabError> {
            parts
                .get(i)
                .ok_or_else(|| LabError::TreeFormat(format!("{spec:?}: missing argument {i}")))?
                .parse()
                .map_err(|_| LabError::TreeFormat(format!("{spec:?}: argument {i} is not an integer")))
        };
        match (parts.first().copied(), parts.len()) {
            (Some("kary"), 3) => Self::kary(num(1)? as usize, num(2)? as usize),
            (Some("path"), 2) => Self::path(num(1)? as usize),
            (Some("random"), 3) => Self::random(num(1)? as usize, num(2)?),
            _ => Err(LabError::TreeFormat(format!("unknown tree spec {spec:?}; use `kary k depth`, `path n` or `random n seed`"))),
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn bfs_order(&self) -> Vec<usize> {
        let mut order = vec![self.root];
        let mut i = 0;
        while i < order.len() && order.len() <= self.len() {
            order.extend_from_slice(&self.children[order[i]]);
            i += 1;
        }
        order
    }

    pub fn depths(&self) -> Vec<usize> {
        let mut depth = vec![0; self.len()];
        for v in self.bfs_order() {
            for &c in &self.children[v] {
                depth[c] = depth[v] + 1;
            }
        }
        depth
    }

    /// The same tree with vertex `v` renamed `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self, LabError> {
        let n = self.len();
        let mut parent = vec![None; n];
        for v in 0..n {
            parent[perm[v]] = self.parent[v].map(|p| perm[p]);
        }
        let mut tree = Self::from_parents(parent)?;
        for c in &mut tree.children {
            c.sort_unstable();
        }
        Ok(tree)
    }
}

/// Returns `order` with `order[new] = old`: a labeling that depends only on
/// the isomorphism class of the tree decorated with `data`. Subtrees are
/// ranked level by level from the bottom (by vertex data, then the sorted
/// ranks of their children), and vertices are numbered breadth first with
/// children in rank order.
pub fn canonical_order(tree: &FiniteTree, data: &[Vec<u64>]) -> Vec<usize> {
    let depth = tree.depths();
    let max_depth = depth.iter().copied().max().unwrap_or(0);
    let mut by_level = vec![Vec::new(); max_depth + 1];
    for v in 0..tree.len() {
        by_level[depth[v]].push(v);
    }
    let mut rank = vec![0u32; tree.len()];
    for level in by_level.iter().rev() {
        let keys: Vec<(Vec<u64>, Vec<u32>)> = level
            .iter()
            .map(|&v| {
                let mut ch: Vec<u32> = tree.children(v).iter().map(|&c| rank[c]).collect();
                ch.sort_unstable();
                (data[v].clone(), ch)
            })
            .collect();
        let mut distinct: Vec<&(Vec<u64>, Vec<u32>)> = keys.iter().collect();
        distinct.sort();
        distinct.dedup();
        let ids: BTreeMap<&(Vec<u64>, Vec<u32>), u32> = distinct.into_iter().zip(0..).collect();
        for (&v, key) in level.iter().zip(&keys) {
            rank[v] = ids[key];
        }
    }
    let mut order = vec![tree.root()];
    let mut i = 0;
    while i < order.len() {
        let mut ch = tree.children(order[i]).to_vec();
        ch.sort_by_key(|&c| rank[c]);
        order.extend(ch);
        i += 1;
    }
    order
}

/// Canonical tree plus `order` (`order[new] = old`).
pub fn canonicalize(tree: &FiniteTree, data: &[Vec<u64>]) -> (FiniteTree, Vec<usize>) {
    let order = canonical_order(tree, data);
    let mut perm = vec![0; tree.len()];
    for (new, &old) in order.iter().enumerate() {
        perm[old] = new;
    }
    (tree.relabel(&perm).expect("permutation of a valid tree"), order)
}

fn permute(values: &[f64], order: &[usize]) -> Vec<f64> {
    order.iter().map(|&old| values[old]).collect()
}

// ---------------------------------------------------------------------------
// Metric

/// All pairwise distances plus, for each vertex, its other vertices grouped
/// by distance (each group in increasing index order).
#[derive(Clone, Debug)]
pub struct TreeMetric {
    tree: FiniteTree,
    n: usize,
    dist: Vec<u16>,
    by_dist: Vec<u32>,
    /// `offsets[x][r]..offsets[x][r + 1]` indexes `S(x, r)` in row `x` of `by_dist`.
    offsets: Vec<Vec<u32>>,
}

/// Largest tree accepted by [`TreeMetric::new`]; the tables take `6 n^2` bytes.
pub const METRIC_LIMIT: usize = 8192;

impl TreeMetric {
    pub fn new(tree: &FiniteTree) -> Result<Self, LabError> {
        let n = tree.len();
        if n > METRIC_LIMIT {
            return Err(LabError::BadParameter(format!("{n} vertices exceed the metric limit {METRIC_LIMIT}")));
        }
        let rows: Vec<(Vec<u16>, Vec<u32>, Vec<u32>)> = (0..n)
            .into_par_iter()
            .map(|x| {
                let mut d = vec![u16::MAX; n];
                d[x] = 0;
                let mut queue = VecDeque::from([x]);
                while let Some(v) = queue.pop_front() {
                    let next = tree.parent(v).into_iter().chain(tree.children(v).iter().copied());
                    for u in next {
                        if d[u] == u16::MAX {
                            d[u] = d[v] + 1;
                            queue.push_back(u);
                        }
                    }
                }
                let ecc = *d.iter().max().expect("n >= 1") as usize;
                let mut counts = vec![0u32; ecc + 2];
                for &dv in &d {
                    counts[dv as usize + 1] += 1;
                }
                for r in 1..counts.len() {
                    counts[r] += counts[r - 1];
                }
                let mut fill = counts.clone();
                let mut row = vec![0u32; n];
                for (v, &dv) in d.iter().enumerate() {
                    row[fill[dv as usize] as usize] = v as u32;
                    fill[dv as usize] += 1;
                }
                (d, row, counts)
            })
            .collect();
        let mut dist = Vec::with_capacity(n * n);
        let mut by_dist = Vec::with_capacity(n * n);
        let mut offsets = Vec::with_capacity(n);
        for (d, row, off) in rows {
            dist.extend(d);
            by_dist.extend(row);
            offsets.push(off);
        }
        Ok(Self { tree: tree.clone(), n, dist, by_dist, offsets })
    }

    pub fn tree(&self) -> &FiniteTree {
        &self.tree
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn distance(&self, x: usize, y: usize) -> usize {
        self.dist[x * self.n + y] as usize
    }

    pub fn eccentricity(&self, x: usize) -> usize {
        self.offsets[x].len() - 2
    }

    pub fn diameter(&self) -> usize {
        (0..self.n).map(|x| self.eccentricity(x)).max().unwrap_or(0)
    }

    pub fn sphere(&self, x: usize, r: usize) -> &[u32] {
        let off = &self.offsets[x];
        if r + 1 >= off.len() {
            return &[];
        }
        &self.by_dist[x * self.n + off[r] as usize..x * self.n + off[r + 1] as usize]
    }
}

/// `S_T(r) = max_x |S(x, r)|`.
pub fn sphere_size_sup(metric: &TreeMetric, r: usize) -> usize {
    (0..metric.len()).map(|x| metric.sphere(x, r).len()).max().unwrap_or(0)
}

/// `M∘ f` at every vertex.
pub fn spherical_maximal_all(metric: &TreeMetric, f: &[f64]) -> Vec<f64> {
    (0..metric.len())
        .into_par_iter()
        .map(|x| {
            (0..=metric.eccentricity(x))
                .map(|r| {
                    let s = metric.sphere(x, r);
                    s.iter().map(|&y| f[y as usize]).sum::<f64>() / s.len() as f64
                })
                .fold(0.0, f64::max)
        })
        .collect()
}

/// `M_s∘ w = (M∘ (w^s))^(1/s)` at every vertex.
pub fn m_s_all(metric: &TreeMetric, w: &[f64], s: Exponent) -> Vec<f64> {
    let sf = exponent_to_f64(s);
    let ws: Vec<f64> = w.iter().map(|v| v.powf(sf)).collect();
    spherical_maximal_all(metric, &ws).into_iter().map(|v| v.powf(1.0 / sf)).collect()
}

// ---------------------------------------------------------------------------
// Majorants

/// A pointwise evaluator `x -> M̃w(x)` used in place of `M_s∘ w`.
pub trait Majorant: Sync {
    fn name(&self) -> String;
    fn evaluate(&self, metric: &TreeMetric, w: &[f64]) -> Vec<f64>;
}

#[derive(Clone, Copy, Debug)]
pub struct SphericalMs {
    pub s: Exponent,
}

impl Majorant for SphericalMs {
    fn name(&self) -> String {
        format!("M_{}", self.s)
    }

    fn evaluate(&self, metric: &TreeMetric, w: &[f64]) -> Vec<f64> {
        m_s_all(metric, w, self.s)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Scaled<M> {
    pub factor: f64,
    pub inner: M,
}

impl<M: Majorant> Majorant for Scaled<M> {
    fn name(&self) -> String {
        format!("{}*{}", self.factor, self.inner.name())
    }

    fn evaluate(&self, metric: &TreeMetric, w: &[f64]) -> Vec<f64> {
        self.inner.evaluate(metric, w).into_iter().map(|v| v * self.factor).collect()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Identity;

impl Majorant for Identity {
    fn name(&self) -> String {
        "identity".into()
    }

    fn evaluate(&self, _metric: &TreeMetric, w: &[f64]) -> Vec<f64> {
        w.to_vec()
    }
}

/// Checks `M∘ w <= dominates * M̃w` at every pool vertex and returns `M̃w`.
pub fn check_majorant(
    metric: &TreeMetric,
    w: &[f64],
    majorant: &dyn Majorant,
    dominates: f64,
    pool: &[usize],
) -> Result<Vec<f64>, LabError> {
    let maximal = spherical_maximal_all(metric, w);
    let values = majorant.evaluate(metric, w);
    for &x in pool {
        if maximal[x] > dominates * values[x] * (1.0 + 1e-12) {
            return Err(LabError::ContractViolation { vertex: x, maximal: maximal[x], majorant: values[x], dominates });
        }
    }
    Ok(values)
}

// ---------------------------------------------------------------------------
// Expansion constant

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certification {
    Exact,
    LowerBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Every pair of nonempty `E, F` in the pool (at most 12 vertices).
    Exhaustive,
    /// Structured and seeded random starts refined by single-vertex toggles.
    Sampled { restarts: usize, seed: u64, max_steps: usize },
}

impl Strategy {
    pub fn sampled(seed: u64) -> Self {
        Strategy::Sampled { restarts: 8, seed, max_steps: 0 }
    }

    /// Exhaustive on pools of at most 12 vertices, sampled otherwise.
    pub fn auto(pool_len: usize, seed: u64) -> Self {
        if pool_len <= EXHAUSTIVE_POOL_LIMIT {
            Strategy::Exhaustive
        } else {
            Self::sampled(seed)
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExpansionQuery<'a> {
    pub metric: &'a TreeMetric,
    pub w: &'a [f64],
    pub s: Exponent,
    pub r: usize,
    pub alpha: f64,
    pub pool: Vec<usize>,
    pub strategy: Strategy,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionResult {
    pub value: f64,
    pub e: Vec<usize>,
    pub f: Vec<usize>,
    pub certification: Certification,
}

/// `sum_{x in E} w(F ∩ S(x, r)) / |S(x, r)|  /  (w(F)^α  M(E)^(1-α))` with
/// `M(E) = sum_{x in E} majorant(x)`. Zero when `w(F)` or `M(E)` vanishes.
pub fn expansion_objective(
    metric: &TreeMetric,
    w: &[f64],
    majorant: &[f64],
    r: usize,
    alpha: f64,
    e: &[usize],
    f: &[usize],
) -> f64 {
    let mut in_f = vec![false; metric.len()];
    for &y in f {
        in_f[y] = true;
    }
    let mut num = 0.0;
    for &x in e {
        let s = metric.sphere(x, r);
        if !s.is_empty() {
            num += s.iter().filter(|&&y| in_f[y as usize]).map(|&y| w[y as usize]).sum::<f64>() / s.len() as f64;
        }
    }
    let wf: f64 = f.iter().map(|&y| w[y]).sum();
    let me: f64 = e.iter().map(|&x| majorant[x]).sum();
    if wf > 0.0 && me > 0.0 {
        num / (wf.powf(alpha) * me.powf(1.0 - alpha))
    } else {
        0.0
    }
}

fn validate(q: &ExpansionQuery<'_>) -> Result<(), LabError> {
    if !(q.alpha > 0.0 && q.alpha < 1.0) {
        return Err(LabError::BadParameter(format!("alpha must lie in (0, 1), got {}", q.alpha)));
    }
    if q.s <= Exponent::from(1) {
        return Err(LabError::BadParameter(format!("s must exceed 1, got {}", q.s)));
    }
    if q.w.len() != q.metric.len() {
        return Err(LabError::BadParameter("weight length differs from the tree size".into()));
    }
    if q.pool.is_empty() || q.pool.iter().any(|&v| v >= q.metric.len()) {
        return Err(LabError::BadParameter("pool must be a nonempty set of vertices".into()));
    }
    if q.w.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
        return Err(LabError::BadParameter("weights must be finite and nonnegative".into()));
    }
    if q.pool.iter().all(|&v| q.w[v] == 0.0) {
        return Err(LabError::UndefinedRatio("weight vanishes on the pool".into()));
    }
    Ok(())
}

/// `E_T^w(s, r, α)` restricted to `E, F ⊆ pool`.
pub fn expansion_constant(q: &ExpansionQuery<'_>) -> Result<ExpansionResult, LabError> {
    validate(q)?;
    let m = m_s_all(q.metric, q.w, q.s);
    expansion_with(q, &m)
}

/// The same supremum with `M̃w` in the denominator, after checking
/// `M∘ w <= dominates * M̃w` on the pool.
pub fn expansion_constant_majorant(
    q: &ExpansionQuery<'_>,
    majorant: &dyn Majorant,
    dominates: f64,
) -> Result<ExpansionResult, LabError> {
    validate(q)?;
    let m = check_majorant(q.metric, q.w, majorant, dominates, &q.pool)?;
    expansion_with(q, &m)
}

fn expansion_with(q: &ExpansionQuery<'_>, m: &[f64]) -> Result<ExpansionResult, LabError> {
    let mut pool = q.pool.clone();
    pool.sort_unstable();
    pool.dedup();
    let (e, f, certification) = match q.strategy {
        Strategy::Exhaustive => {
            let (e, f) = exhaustive(q, m, &pool)?;
            (e, f, Certification::Exact)
        }
        Strategy::Sampled { restarts, seed, max_steps } => {
            let (e, f) = sampled(q, m, &pool, restarts, seed, max_steps);
            (e, f, Certification::LowerBound)
        }
    };
    let value = expansion_objective(q.metric, q.w, m, q.r, q.alpha, &e, &f);
    Ok(ExpansionResult { value, e, f, certification })
}

fn sphere_inverse(q: &ExpansionQuery<'_>, pool: &[usize]) -> Vec<f64> {
    pool.iter()
        .map(|&x| {
            let n = q.metric.sphere(x, q.r).len();
            if n == 0 {
                0.0
            } else {
                1.0 / n as f64
            }
        })
        .collect()
}

/// Pool positions `j` with `d(pool[i], pool[j]) = r`.
fn pool_neighbours(q: &ExpansionQuery<'_>, pool: &[usize]) -> Vec<Vec<u32>> {
    if pool.len() == q.metric.len() {
        return (0..pool.len()).map(|x| q.metric.sphere(x, q.r).to_vec()).collect();
    }
    pool.iter()
        .map(|&x| (0..pool.len() as u32).filter(|&j| q.metric.distance(x, pool[j as usize]) == q.r).collect())
        .collect()
}

/// Branch and bound over `F`, Gray-code enumeration of `E` within the
/// vertices with positive gain. Ties go to the smallest `(F, E)` masks.
fn exhaustive(q: &ExpansionQuery<'_>, m: &[f64], pool: &[usize]) -> Result<(Vec<usize>, Vec<usize>), LabError> {
    let p = pool.len();
    if p > EXHAUSTIVE_POOL_LIMIT {
        return Err(LabError::BadParameter(format!(
            "exhaustive search needs a pool of at most {EXHAUSTIVE_POOL_LIMIT} vertices, got {p}"
        )));
    }
    let inv = sphere_inverse(q, pool);
    let nb = pool_neighbours(q, pool);
    let wp: Vec<f64> = pool.iter().map(|&v| q.w[v]).collect();
    let mp: Vec<f64> = pool.iter().map(|&v| m[v]).collect();
    let alpha = q.alpha;
    let best = AtomicU64::new(0f64.to_bits());
    let found = (1u32..1 << p)
        .into_par_iter()
        .filter_map(|fmask| {
            let wf: f64 = (0..p).filter(|i| fmask >> i & 1 == 1).map(|i| wp[i]).sum();
            if wf <= 0.0 {
                return None;
            }
            let gains: Vec<(usize, f64)> = (0..p)
                .map(|i| (i, nb[i].iter().filter(|&&j| fmask >> j & 1 == 1).map(|&j| wp[j as usize]).sum::<f64>() * inv[i]))
                .filter(|&(i, g)| g > 0.0 && mp[i] > 0.0)
                .collect();
            if gains.is_empty() {
                return None;
            }
            let mass: f64 = gains.iter().map(|&(i, _)| mp[i]).sum();
            let top = gains.iter().map(|&(i, g)| g / mp[i]).fold(0.0, f64::max);
            let bound = top * mass.powf(alpha) / wf.powf(alpha);
            if bound * (1.0 + 1e-9) < f64::from_bits(best.load(Ordering::Relaxed)) {
                return None;
            }
            let scale = wf.powf(alpha);
            let (mut num, mut den) = (0.0, 0.0);
            let mut emask = 0u32;
            let mut local: Option<(f64, u32)> = None;
            for step in 1u32..1 << gains.len() {
                let bit = step.trailing_zeros() as usize;
                let (i, g) = gains[bit];
                if emask >> i & 1 == 1 {
                    emask &= !(1 << i);
                    num -= g;
                    den -= mp[i];
                } else {
                    emask |= 1 << i;
                    num += g;
                    den += mp[i];
                }
                if emask == 0 || den <= 0.0 {
                    continue;
                }
                let ratio = num / (scale * den.powf(1.0 - alpha));
                local = match local {
                    Some((v, e)) if v > ratio || (v == ratio && e < emask) => Some((v, e)),
                    _ => Some((ratio, emask)),
                };
            }
            let (v, e) = local?;
            best.fetch_max(v.to_bits(), Ordering::Relaxed);
            Some((v, fmask, e))
        })
        .reduce_with(|a, b| if a.0 > b.0 || (a.0 == b.0 && (a.1, a.2) < (b.1, b.2)) { a } else { b });
    let (_, fmask, emask) = found.ok_or_else(|| LabError::UndefinedRatio("no pair with positive gain".into()))?;
    let pick = |mask: u32| (0..p).filter(|i| mask >> i & 1 == 1).map(|i| pool[i]).collect();
    Ok((pick(emask), pick(fmask)))
}

struct Search<'q> {
    nb: &'q [Vec<u32>],
    inv: &'q [f64],
    wp: &'q [f64],
    mp: &'q [f64],
    alpha: f64,
    in_e: Vec<bool>,
    in_f: Vec<bool>,
    /// `g[i] = w(F ∩ S(i, r)) / |S(i, r)|`.
    g: Vec<f64>,
    /// `a[j] = sum over i in E ∩ S(j, r) of 1 / |S(i, r)|`.
    a: Vec<f64>,
    num: f64,
    wf: f64,
    me: f64,
}

impl<'q> Search<'q> {
    fn objective(&self, num: f64, wf: f64, me: f64) -> f64 {
        if wf > 0.0 && me > 0.0 {
            num / (wf.powf(self.alpha) * me.powf(1.0 - self.alpha))
        } else {
            0.0
        }
    }

    fn current(&self) -> f64 {
        self.objective(self.num, self.wf, self.me)
    }

    fn toggle_e(&mut self, i: usize) {
        let sign = if self.in_e[i] { -1.0 } else { 1.0 };
        self.in_e[i] = !self.in_e[i];
        self.num += sign * self.g[i];
        self.me += sign * self.mp[i];
        for &j in &self.nb[i] {
            self.a[j as usize] += sign * self.inv[i];
        }
    }

    fn toggle_f(&mut self, j: usize) {
        let sign = if self.in_f[j] { -1.0 } else { 1.0 };
        self.in_f[j] = !self.in_f[j];
        self.num += sign * self.wp[j] * self.a[j];
        self.wf += sign * self.wp[j];
        for &i in &self.nb[j] {
            self.g[i as usize] += sign * self.wp[j] * self.inv[i as usize];
        }
    }

    /// Best-improvement toggles until no single toggle helps.
    fn climb(&mut self, max_steps: usize) {
        let p = self.in_e.len();
        for _ in 0..max_steps {
            let cur = self.current();
            let mut best: Option<(f64, usize)> = None;
            for c in 0..2 * p {
                let v = if c < p {
                    let sign = if self.in_e[c] { -1.0 } else { 1.0 };
                    self.objective(self.num + sign * self.g[c], self.wf, self.me + sign * self.mp[c])
                } else {
                    let j = c - p;
                    let sign = if self.in_f[j] { -1.0 } else { 1.0 };
                    self.objective(self.num + sign * self.wp[j] * self.a[j], self.wf + sign * self.wp[j], self.me)
                };
                if v > cur * (1.0 + 1e-12) && best.is_none_or(|(b, _)| v > b) {
                    best = Some((v, c));
                }
            }
            match best {
                Some((_, c)) if c < p => self.toggle_e(c),
                Some((_, c)) => self.toggle_f(c - p),
                None => break,
            }
        }
    }
}

fn sampled(
    q: &ExpansionQuery<'_>,
    m: &[f64],
    pool: &[usize],
    restarts: usize,
    seed: u64,
    max_steps: usize,
) -> (Vec<usize>, Vec<usize>) {
    let p = pool.len();
    let inv = sphere_inverse(q, pool);
    let nb = pool_neighbours(q, pool);
    let wp: Vec<f64> = pool.iter().map(|&v| q.w[v]).collect();
    let mp: Vec<f64> = pool.iter().map(|&v| m[v]).collect();
    let max_steps = if max_steps == 0 { 4 * p + 16 } else { max_steps };
    // Structured starts: everything, then stars and reversed stars around
    // spread-out centres; then seeded random subsets.
    let mut starts: Vec<(Vec<usize>, Vec<usize>)> = vec![((0..p).collect(), (0..p).collect())];
    let centres = p.min(8);
    for c in 0..centres {
        let x = c * p / centres;
        let around: Vec<usize> = nb[x].iter().map(|&j| j as usize).collect();
        if !around.is_empty() {
            starts.push((vec![x], around.clone()));
            starts.push((around, vec![x]));
        }
        starts.push((vec![x], vec![x]));
    }
    for t in 0..restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (t as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let de: f64 = rng.gen_range(0.02..0.5);
        let df: f64 = rng.gen_range(0.02..0.5);
        let mut e: Vec<usize> = (0..p).filter(|_| rng.gen_bool(de)).collect();
        let mut f: Vec<usize> = (0..p).filter(|_| rng.gen_bool(df)).collect();
        if e.is_empty() {
            e.push(*(0..p).collect::<Vec<_>>().choose(&mut rng).expect("p >= 1"));
        }
        if f.is_empty() {
            f.push(rng.gen_range(0..p));
        }
        starts.push((e, f));
    }
    let results: Vec<(f64, Vec<bool>, Vec<bool>)> = starts
        .par_iter()
        .map(|(e, f)| {
            let mut s = Search {
                nb: &nb,
                inv: &inv,
                wp: &wp,
                mp: &mp,
                alpha: q.alpha,
                in_e: vec![false; p],
                in_f: vec![false; p],
                g: vec![0.0; p],
                a: vec![0.0; p],
                num: 0.0,
                wf: 0.0,
                me: 0.0,
            };
            for &j in f {
                s.toggle_f(j);
            }
            for &i in e {
                s.toggle_e(i);
            }
            s.climb(max_steps);
            (s.current(), s.in_e, s.in_f)
        })
        .collect();
    let mut best = 0;
    for (t, r) in results.iter().enumerate() {
        if r.0 > results[best].0 {
            best = t;
        }
    }
    let (_, e, f) = &results[best];
    let pick = |mask: &[bool]| (0..p).filter(|&i| mask[i]).map(|i| pool[i]).collect();
    (pick(e), pick(f))
}

// ---------------------------------------------------------------------------
// Γ modulo c_α

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaResult {
    /// `Γ / c_α`.
    pub value: f64,
    pub certification: Certification,
    /// `S_T(r)` for `r = 0..=r_max`.
    pub sphere_sup: Vec<usize>,
    /// `E_T^w(s, r, α)` for `r = 0..=r_max`.
    pub expansion: Vec<f64>,
    /// The term for each `n`.
    pub per_n: Vec<f64>,
    pub argmax_n: usize,
}

#[derive(Clone, Copy, Debug)]
#[derive(Default)]
pub struct GammaOptions {
    pub r_max: Option<usize>,
    pub n_max: Option<usize>,
    pub seed: u64,
}


fn weight_bits(w: &[f64]) -> Vec<Vec<u64>> {
    w.iter().map(|v| vec![v.to_bits()]).collect()
}

/// `sup_n 2^(n α / (2(1-α))) sum_{r : S_T(r) >= 2^(n-1)} E(r)^(1/(1-α)) S_T(r)^(α / (2(1-α)))`.
///
/// `E(r)` ranges over all of `T`: exact for trees of at most 12 vertices,
/// a lower bound from local search otherwise.
pub fn gamma_constant(
    tree: &FiniteTree,
    w: &[f64],
    s: Exponent,
    alpha: f64,
    options: &GammaOptions,
) -> Result<GammaResult, LabError> {
    let (canon, order) = canonicalize(tree, &weight_bits(w));
    let w = permute(w, &order);
    let metric = TreeMetric::new(&canon)?;
    gamma_on(&metric, &w, s, alpha, options)
}

/// Same as [`gamma_constant`] but on the labeling given.
pub fn gamma_on(
    metric: &TreeMetric,
    w: &[f64],
    s: Exponent,
    alpha: f64,
    options: &GammaOptions,
) -> Result<GammaResult, LabError> {
    let diameter = metric.diameter();
    let r_max = options.r_max.map_or(diameter, |r| r.min(diameter));
    let pool: Vec<usize> = (0..metric.len()).collect();
    let strategy = Strategy::auto(pool.len(), options.seed);
    let m = m_s_all(metric, w, s);
    let expansion = (0..=r_max)
        .into_par_iter()
        .map(|r| {
            let q = ExpansionQuery { metric, w, s, r, alpha, pool: pool.clone(), strategy };
            validate(&q)?;
            match expansion_with(&q, &m) {
                Ok(res) => Ok(res.value),
                Err(LabError::UndefinedRatio(_)) => Ok(0.0),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<Vec<f64>, LabError>>()?;
    let sphere_sup: Vec<usize> = (0..=r_max).map(|r| sphere_size_sup(metric, r)).collect();
    let top = sphere_sup.iter().copied().max().unwrap_or(1) as f64;
    let a = alpha / (2.0 * (1.0 - alpha));
    let mut per_n = Vec::new();
    let mut n = 0usize;
    while 2f64.powi(n as i32 - 1) <= top && options.n_max.is_none_or(|cap| n <= cap) {
        let threshold = 2f64.powi(n as i32 - 1);
        let sum: f64 = (0..=r_max)
            .filter(|&r| sphere_sup[r] as f64 >= threshold)
            .map(|r| expansion[r].powf(1.0 / (1.0 - alpha)) * (sphere_sup[r] as f64).powf(a))
            .sum();
        per_n.push(2f64.powf(n as f64 * a) * sum);
        n += 1;
    }
    let mut argmax_n = 0;
    for (i, v) in per_n.iter().enumerate() {
        if *v > per_n[argmax_n] {
            argmax_n = i;
        }
    }
    Ok(GammaResult {
        value: per_n[argmax_n],
        certification: if metric.len() <= EXHAUSTIVE_POOL_LIMIT { Certification::Exact } else { Certification::LowerBound },
        sphere_sup,
        expansion,
        per_n,
        argmax_n,
    })
}

// ---------------------------------------------------------------------------
// Abstract weak type

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AbstractWeakResult {
    /// `sup_λ λ w({M∘ f > λ}) / (Γ/c_α · sum f M_s∘ w)`.
    pub ratio: f64,
    /// `sup_λ λ w({M∘ f > λ})`, attained as `λ` increases to a value of `M∘ f`.
    pub weak_sup: f64,
    pub lambda_star: f64,
    pub denominator: f64,
    pub gamma: f64,
}

/// Weak-type ratio against a precomputed `Γ / c_α`.
pub fn abstract_weak_type_ratio(
    tree: &FiniteTree,
    w: &[f64],
    f: &[f64],
    s: Exponent,
    gamma: f64,
) -> Result<AbstractWeakResult, LabError> {
    if w.len() != tree.len() || f.len() != tree.len() {
        return Err(LabError::BadParameter("f and w must have one value per vertex".into()));
    }
    let data: Vec<Vec<u64>> = w.iter().zip(f).map(|(a, b)| vec![a.to_bits(), b.to_bits()]).collect();
    let (canon, order) = canonicalize(tree, &data);
    let (w, f) = (permute(w, &order), permute(f, &order));
    let metric = TreeMetric::new(&canon)?;
    let mf = spherical_maximal_all(&metric, &f);
    let ms = m_s_all(&metric, &w, s);
    let denominator: f64 = f.iter().zip(&ms).map(|(a, b)| a * b).sum::<f64>() * gamma;
    if !(denominator > 0.0) {
        return Err(LabError::UndefinedRatio("Γ · sum f M_s∘w vanishes".into()));
    }
    let mut idx: Vec<usize> = (0..metric.len()).collect();
    idx.sort_by(|&a, &b| mf[b].total_cmp(&mf[a]).then(a.cmp(&b)));
    let (mut acc, mut weak_sup, mut lambda_star) = (0.0, 0.0, 0.0);
    let mut i = 0;
    while i < idx.len() && mf[idx[i]] > 0.0 {
        let v = mf[idx[i]];
        while i < idx.len() && mf[idx[i]] == v {
            acc += w[idx[i]];
            i += 1;
        }
        if v * acc > weak_sup {
            weak_sup = v * acc;
            lambda_star = v;
        }
    }
    Ok(AbstractWeakResult { ratio: weak_sup / denominator, weak_sup, lambda_star, denominator, gamma })
}

/// Computes `Γ / c_α` for `w` and the weak-type ratio of `f`.
pub fn abstract_weak_type_check(
    tree: &FiniteTree,
    w: &[f64],
    f: &[f64],
    s: Exponent,
    alpha: f64,
    options: &GammaOptions,
) -> Result<(AbstractWeakResult, GammaResult), LabError> {
    let gamma = gamma_constant(tree, w, s, alpha, options)?;
    let res = abstract_weak_type_ratio(tree, w, f, s, gamma.value)?;
    Ok((res, gamma))
}

/// Report rows for a batch of `(f, w)` pairs on one tree.
pub fn abstract_weak_type_report(
    tree: &FiniteTree,
    pairs: &[(Vec<f64>, Vec<f64>)],
    s: Exponent,
    alpha: f64,
    options: &GammaOptions,
) -> Result<ConstantReport, LabError> {
    let rows: Vec<Result<(AbstractWeakResult, GammaResult), LabError>> =
        pairs.par_iter().map(|(f, w)| abstract_weak_type_check(tree, w, f, s, alpha, options)).collect();
    let mut rep = ConstantReport::new("abstract-weak-type", "ratio");
    for (i, row) in rows.into_iter().enumerate() {
        let p = GridPoint::new("finite-tree").input("pair", i).input("alpha", alpha).input("s", s.to_string());
        rep.push(match row {
            Ok((res, gamma)) => p
                .output("gamma_mod_c_alpha", gamma.value)
                .output("gamma_certification", format!("{:?}", gamma.certification))
                .output("weak_sup", res.weak_sup)
                .with_value(res.ratio),
            Err(LabError::UndefinedRatio(m)) => p.with_signal(format!("undefined-ratio: {m}")),
            Err(e) => return Err(e),
        });
    }
    Ok(rep)
}

/// Seeded random `(f, w)` pair: sparse `f`, positive `w`.
pub fn random_pair(n: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let support = rng.gen_range(1..=n.min(8));
    let mut f = vec![0.0; n];
    for _ in 0..support {
        f[rng.gen_range(0..n)] = rng.gen_range(1..=16) as f64 / 4.0;
    }
    let w = (0..n).map(|_| rng.gen_range(1..=64) as f64 / 16.0).collect();
    (f, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn metric(spec: &str) -> TreeMetric {
        TreeMetric::new(&FiniteTree::from_spec(spec).unwrap()).unwrap()
    }

    #[test]
    fn sphere_sup_examples() {
        let path = metric("path 10");
        assert_eq!(sphere_size_sup(&path, 3), 2);
        assert_eq!(sphere_size_sup(&path, 0), 1);
        assert_eq!(sphere_size_sup(&metric("kary 2 6"), 2), 6);
    }

    #[test]
    fn edge_list_round_trip_and_errors() {
        let t = FiniteTree::random(40, 3).unwrap();
        assert_eq!(FiniteTree::parse_edge_list(&t.to_edge_list()).unwrap(), t);
        assert_eq!(FiniteTree::parse_edge_list("").unwrap().len(), 1);
        assert!(FiniteTree::parse_edge_list("0 1\n2 1\n").is_err());
        assert!(FiniteTree::parse_edge_list("1 2\n2 1\n").is_err());
        assert!(FiniteTree::parse_edge_list("0 x\n").is_err());
        assert!(FiniteTree::from_spec("star 4").is_err());
    }

    #[test]
    fn single_vertex_pool_is_at_most_one() {
        let m = metric("kary 2 4");
        let w: Vec<f64> = (0..m.len()).map(|i| 1.0 + (i % 3) as f64).collect();
        for v in [0, 3, 20] {
            let q = ExpansionQuery { metric: &m, w: &w, s: Exponent::from(2), r: 0, alpha: 0.4, pool: vec![v], strategy: Strategy::Exhaustive };
            let res = expansion_constant(&q).unwrap();
            assert!(res.value <= 1.0 + 1e-12);
            assert_eq!((res.e.clone(), res.f.clone()), (vec![v], vec![v]));
        }
    }

    #[test]
    fn unit_weight_radius_zero_full_pool() {
        let m = metric("kary 2 5");
        let w = vec![1.0; m.len()];
        let pool: Vec<usize> = (0..8).map(|i| i * 7).collect();
        let q = ExpansionQuery { metric: &m, w: &w, s: Exponent::from(2), r: 0, alpha: 1.0 / 3.0, pool: pool.clone(), strategy: Strategy::Exhaustive };
        let res = expansion_constant(&q).unwrap();
        let ones = vec![1.0; m.len()];
        let at_pool = expansion_objective(&m, &w, &ones, 0, 1.0 / 3.0, &pool, &pool);
        assert!((res.value - 1.0).abs() < 1e-12);
        assert!((at_pool - res.value).abs() < 1e-12);
    }

    #[test]
    fn sampled_never_beats_exhaustive() {
        let m = metric("random 30 5");
        let w: Vec<f64> = (0..30).map(|i| 0.5 + (i * 7 % 5) as f64).collect();
        let pool: Vec<usize> = (0..10).map(|i| i * 3).collect();
        for r in 0..4 {
            let mut q = ExpansionQuery { metric: &m, w: &w, s: Exponent::from(2), r, alpha: 0.3, pool: pool.clone(), strategy: Strategy::Exhaustive };
            let ex = expansion_constant(&q).unwrap();
            q.strategy = Strategy::sampled(9);
            let sa = expansion_constant(&q).unwrap();
            assert!(sa.value <= ex.value * (1.0 + 1e-12), "r={r}");
            assert_eq!(sa.certification, Certification::LowerBound);
        }
    }

    #[test]
    fn majorant_contracts() {
        let m = metric("kary 2 3");
        let n = m.len();
        let pool: Vec<usize> = (0..n).collect();
        let mut delta = vec![0.0; n];
        delta[4] = 1.0;
        let err = check_majorant(&m, &delta, &Identity, 1.0, &pool).unwrap_err();
        assert!(matches!(err, LabError::ContractViolation { .. }));
        assert!(check_majorant(&m, &vec![1.0; n], &Identity, 1.0, &pool).is_ok());
        let ms = SphericalMs { s: Exponent::from(2) };
        let q = ExpansionQuery { metric: &m, w: &delta, s: Exponent::from(2), r: 1, alpha: 0.3, pool: vec![0, 1, 2, 4, 9, 10], strategy: Strategy::Exhaustive };
        let base = expansion_constant(&q).unwrap();
        assert_eq!(expansion_constant_majorant(&q, &ms, 1.0).unwrap().value, base.value);
        let doubled = expansion_constant_majorant(&q, &Scaled { factor: 2.0, inner: ms }, 1.0).unwrap();
        assert!(doubled.value <= base.value);
    }

    #[test]
    fn canonical_form_ignores_labels() {
        let t = FiniteTree::random(25, 1).unwrap();
        let w: Vec<f64> = (0..25).map(|i| (i % 4) as f64 + 1.0).collect();
        let mut perm: Vec<usize> = (0..25).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(2));
        let t2 = t.relabel(&perm).unwrap();
        let mut w2 = vec![0.0; 25];
        for v in 0..25 {
            w2[perm[v]] = w[v];
        }
        let (c1, o1) = canonicalize(&t, &weight_bits(&w));
        let (c2, o2) = canonicalize(&t2, &weight_bits(&w2));
        assert_eq!(c1, c2);
        assert_eq!(permute(&w, &o1), permute(&w2, &o2));
    }

    #[test]
    fn gamma_single_vertex_and_path() {
        let one = FiniteTree::path(1).unwrap();
        let g = gamma_constant(&one, &[2.0], Exponent::from(2), 0.5, &GammaOptions::default()).unwrap();
        // Only r = 0 contributes, for n = 0 and n = 1; E(0) = 1.
        assert_eq!(g.per_n.len(), 2);
        assert_eq!(g.certification, Certification::Exact);
        assert!((g.value - 2f64.powf(0.5)).abs() < 1e-12);
        let path = FiniteTree::path(9).unwrap();
        let g = gamma_constant(&path, &[1.0; 9], Exponent::from(2), 0.5, &GammaOptions::default()).unwrap();
        assert!(g.sphere_sup.iter().all(|&s| s <= 2));
        assert_eq!(g.per_n.len(), 3);
    }
}
