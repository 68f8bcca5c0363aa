//! Combinatorics of the infinite rooted k-ary tree.
//!
//! Vertices are addressed by their path from the root, so any depth is
//! representable. Sphere and ball cardinalities are exact big integers.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::error::TreeError;

/// Branching factor of the tree. `k = 1` is the path graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TreeParams {
    k: u32,
}

impl TreeParams {
    pub fn new(k: u32) -> Result<Self, TreeError> {
        if k == 0 {
            return Err(TreeError::InvalidBranching(k));
        }
        Ok(Self { k })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Number of vertices at depth `j`, i.e. `k^j`.
    pub fn level_size(&self, j: usize) -> BigUint {
        BigUint::from(self.k).pow(j as u32)
    }
}

/// A vertex of the tree, identified by the child indices along its root path.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct VertexId {
    path: Vec<u32>,
}

impl VertexId {
    pub fn root() -> Self {
        Self { path: Vec::new() }
    }

    pub fn new(path: Vec<u32>, params: &TreeParams) -> Result<Self, TreeError> {
        if let Some(&bad) = path.iter().find(|&&c| c >= params.k) {
            return Err(TreeError::ChildOutOfRange { index: bad, k: params.k });
        }
        Ok(Self { path })
    }

    pub fn path(&self) -> &[u32] {
        &self.path
    }

    pub fn depth(&self) -> usize {
        self.path.len()
    }

    pub fn is_root(&self) -> bool {
        self.path.is_empty()
    }

    pub fn parent(&self) -> Option<VertexId> {
        if self.path.is_empty() {
            return None;
        }
        Some(Self { path: self.path[..self.path.len() - 1].to_vec() })
    }

    /// The ancestor `m` generations up; `None` if that would pass the root.
    pub fn ancestor(&self, m: usize) -> Option<VertexId> {
        let d = self.depth();
        (m <= d).then(|| Self { path: self.path[..d - m].to_vec() })
    }

    /// Caller guarantees `index < k`.
    pub fn child(&self, index: u32) -> VertexId {
        let mut path = self.path.clone();
        path.push(index);
        Self { path }
    }

    pub fn lca_depth(&self, other: &VertexId) -> usize {
        self.path.iter().zip(&other.path).take_while(|(a, b)| a == b).count()
    }

    pub fn is_ancestor_of(&self, other: &VertexId) -> bool {
        other.path.starts_with(&self.path)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.path.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// Graph distance: `depth(x) + depth(y) - 2 depth(lca(x, y))`.
pub fn distance(x: &VertexId, y: &VertexId) -> usize {
    x.depth() + y.depth() - 2 * x.lca_depth(y)
}

/// One cell of a sphere decomposition: the vertices reached by going up `m`
/// generations and then down `r - m`, all lying on a single level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphereCell {
    pub m: usize,
    pub level: usize,
    pub count: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphereDecomposition {
    pub center_depth: usize,
    pub radius: usize,
    pub entries: Vec<SphereCell>,
}

impl SphereDecomposition {
    pub fn total(&self) -> BigUint {
        self.entries.iter().map(|c| &c.count).sum()
    }
}

/// Exact level decomposition of `S(x, r)` for any `x` at depth `j`.
///
/// `m = 0` contributes `k^r` descendants; `1 <= m <= min(r-1, j)` contributes
/// `(k-1) k^(r-m-1)` vertices (first step down avoids the branch back to `x`);
/// `m = r <= j` is the ancestor itself. Cells with zero count (k = 1) are
/// omitted.
pub fn sphere_level_counts(j: usize, r: usize, params: &TreeParams) -> SphereDecomposition {
    let k = BigUint::from(params.k);
    let mut entries = Vec::new();
    if r == 0 {
        entries.push(SphereCell { m: 0, level: j, count: BigUint::one() });
        return SphereDecomposition { center_depth: j, radius: r, entries };
    }
    entries.push(SphereCell { m: 0, level: j + r, count: k.clone().pow(r as u32) });
    let km1 = &k - 1u32;
    if !km1.is_zero() {
        for m in 1..=(r - 1).min(j) {
            let count = &km1 * k.clone().pow((r - m - 1) as u32);
            entries.push(SphereCell { m, level: j + r - 2 * m, count });
        }
    }
    if r <= j {
        entries.push(SphereCell { m: r, level: j - r, count: BigUint::one() });
    }
    SphereDecomposition { center_depth: j, radius: r, entries }
}

pub fn sphere_size(j: usize, r: usize, params: &TreeParams) -> BigUint {
    sphere_level_counts(j, r, params).total()
}

pub fn ball_size(j: usize, r: usize, params: &TreeParams) -> BigUint {
    (0..=r).map(|rho| sphere_size(j, rho, params)).sum()
}

/// Materializes `S(x, r)` by path arithmetic: up `m`, then down `r - m`
/// while avoiding the child that leads back toward `x`.
///
/// Refuses when the exact size exceeds `cap`.
pub fn enumerate_sphere(
    x: &VertexId,
    r: usize,
    params: &TreeParams,
    cap: usize,
) -> Result<BTreeSet<VertexId>, TreeError> {
    let size = sphere_size(x.depth(), r, params);
    if size > BigUint::from(cap) {
        return Err(TreeError::EnumerationCap { size: size.to_string(), cap });
    }
    let mut out = BTreeSet::new();
    for m in 0..=r.min(x.depth()) {
        let top = x.ancestor(m).expect("m <= depth");
        let down = r - m;
        if m == 0 {
            push_descendants(&top, down, params.k, &mut out);
        } else if down == 0 {
            out.insert(top);
        } else {
            let back = x.path[x.depth() - m];
            for c in (0..params.k).filter(|&c| c != back) {
                push_descendants(&top.child(c), down - 1, params.k, &mut out);
            }
        }
    }
    Ok(out)
}

/// All vertices within distance `r` of `x`.
pub fn enumerate_ball(
    x: &VertexId,
    r: usize,
    params: &TreeParams,
    cap: usize,
) -> Result<BTreeSet<VertexId>, TreeError> {
    let size = ball_size(x.depth(), r, params);
    if size > BigUint::from(cap) {
        return Err(TreeError::EnumerationCap { size: size.to_string(), cap });
    }
    let mut out = BTreeSet::new();
    for rho in 0..=r {
        out.extend(enumerate_sphere(x, rho, params, cap)?);
    }
    Ok(out)
}

/// Every vertex of depth at most `depth`, in lexicographic order.
pub fn truncation(depth: usize, params: &TreeParams) -> Vec<VertexId> {
    let mut out = vec![VertexId::root()];
    let mut frontier = vec![VertexId::root()];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(frontier.len() * params.k as usize);
        for v in &frontier {
            for c in 0..params.k {
                next.push(v.child(c));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out.sort();
    out
}

/// All vertices of depth exactly `j`.
pub fn level(j: usize, params: &TreeParams) -> Vec<VertexId> {
    let mut out = Vec::new();
    push_descendants(&VertexId::root(), j, params.k, &mut out);
    out
}

fn push_descendants<C: Extend<VertexId>>(top: &VertexId, down: usize, k: u32, out: &mut C) {
    if down == 0 {
        out.extend(std::iter::once(top.clone()));
        return;
    }
    for c in 0..k {
        push_descendants(&top.child(c), down - 1, k, out);
    }
}

/// Table of exact sphere and ball sizes for `j, r` in a fixed window.
#[derive(Clone, Debug)]
pub struct SizeTable {
    params: TreeParams,
    spheres: Vec<Vec<BigUint>>,
    balls: Vec<Vec<BigUint>>,
}

impl SizeTable {
    pub fn new(params: TreeParams, max_depth: usize, max_radius: usize) -> Self {
        let mut spheres = Vec::with_capacity(max_depth + 1);
        let mut balls = Vec::with_capacity(max_depth + 1);
        for j in 0..=max_depth {
            let row: Vec<BigUint> = (0..=max_radius).map(|r| sphere_size(j, r, &params)).collect();
            let mut acc = BigUint::zero();
            let brow = row
                .iter()
                .map(|s| {
                    acc += s;
                    acc.clone()
                })
                .collect();
            spheres.push(row);
            balls.push(brow);
        }
        Self { params, spheres, balls }
    }

    pub fn params(&self) -> &TreeParams {
        &self.params
    }

    pub fn sphere(&self, j: usize, r: usize) -> BigUint {
        match self.spheres.get(j).and_then(|row| row.get(r)) {
            Some(s) => s.clone(),
            None => sphere_size(j, r, &self.params),
        }
    }

    pub fn ball(&self, j: usize, r: usize) -> BigUint {
        match self.balls.get(j).and_then(|row| row.get(r)) {
            Some(s) => s.clone(),
            None => ball_size(j, r, &self.params),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(k: u32) -> TreeParams {
        TreeParams::new(k).unwrap()
    }

    fn v(path: &[u32], k: u32) -> VertexId {
        VertexId::new(path.to_vec(), &p(k)).unwrap()
    }

    #[test]
    fn distances() {
        let x = v(&[0, 1], 2);
        assert_eq!(distance(&x, &x), 0);
        assert_eq!(distance(&v(&[0], 2), &v(&[1], 2)), 2);
        assert_eq!(distance(&x, &v(&[0, 1, 1, 0], 2)), 2);
    }

    #[test]
    fn rejects_bad_paths() {
        assert!(VertexId::new(vec![0, 2], &p(2)).is_err());
        assert!(TreeParams::new(0).is_err());
    }

    #[test]
    fn level_counts_examples() {
        let d = sphere_level_counts(0, 2, &p(2));
        assert_eq!(d.entries, vec![SphereCell { m: 0, level: 2, count: 4u32.into() }]);

        let d = sphere_level_counts(3, 2, &p(2));
        let cells: Vec<_> = d.entries.iter().map(|c| (c.m, c.level, c.count.clone())).collect();
        assert_eq!(cells, vec![(0, 5, 4u32.into()), (1, 3, 1u32.into()), (2, 1, 1u32.into())]);
        assert_eq!(d.total(), 6u32.into());

        let d = sphere_level_counts(2, 3, &p(2));
        let cells: Vec<_> = d.entries.iter().map(|c| (c.m, c.level, c.count.clone())).collect();
        assert_eq!(cells, vec![(0, 5, 8u32.into()), (1, 3, 2u32.into()), (2, 1, 1u32.into())]);
        assert_eq!(d.total(), 11u32.into());

        let d = sphere_level_counts(7, 0, &p(3));
        assert_eq!(d.entries, vec![SphereCell { m: 0, level: 7, count: 1u32.into() }]);
    }

    #[test]
    fn sizes() {
        assert_eq!(sphere_size(5, 1, &p(2)), 3u32.into());
        assert_eq!(sphere_size(3, 2, &p(2)), 6u32.into());
        assert_eq!(ball_size(0, 3, &p(3)), 40u32.into());
    }

    #[test]
    fn path_graph_spheres() {
        for j in 0..10 {
            for r in 0..10 {
                let expect: u32 = if r == 0 { 1 } else if r <= j { 2 } else { 1 };
                assert_eq!(sphere_size(j, r, &p(1)), expect.into(), "j={j} r={r}");
            }
        }
    }

    #[test]
    fn enumerate_examples() {
        let s = enumerate_sphere(&VertexId::root(), 1, &p(2), 100).unwrap();
        assert_eq!(s.into_iter().collect::<Vec<_>>(), vec![v(&[0], 2), v(&[1], 2)]);

        let s = enumerate_sphere(&v(&[0], 2), 2, &p(2), 100).unwrap();
        let expect: BTreeSet<_> =
            [&[0, 0, 0][..], &[0, 0, 1], &[0, 1, 0], &[0, 1, 1], &[1]].iter().map(|q| v(q, 2)).collect();
        assert_eq!(s, expect);

        let x = v(&[1, 0, 1], 2);
        assert_eq!(enumerate_sphere(&x, 0, &p(2), 1).unwrap().into_iter().collect::<Vec<_>>(), vec![x]);
    }

    #[test]
    fn enumeration_cap() {
        let err = enumerate_sphere(&VertexId::root(), 10, &p(2), 100).unwrap_err();
        assert!(matches!(err, TreeError::EnumerationCap { ref size, cap: 100 } if size == "1024"));
    }

    #[test]
    fn truncation_counts() {
        assert_eq!(truncation(3, &p(2)).len(), 15);
        assert_eq!(level(3, &p(3)).len(), 27);
    }
}
