//! Nonnegative functions and weights on the tree.
//!
//! A [`PointFunction`] has finite support. A [`RadialProfile`] depends only
//! on depth and has a finite head followed by a zero or geometric tail, which
//! covers the power weights `k^(j beta)` and lets the operators work at depths
//! where levels hold astronomically many vertices.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::FunctionError;
use crate::numerics::{Exponent, Scalar};
use crate::tree::{TreeParams, VertexId};

fn check_nonneg<S: Scalar>(v: &S) -> Result<(), FunctionError> {
    if *v < S::zero() {
        return Err(FunctionError::Negative(v.to_decimal()));
    }
    Ok(())
}

/// Finitely supported nonnegative function. Absent vertices are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct PointFunction<S> {
    params: TreeParams,
    values: BTreeMap<VertexId, S>,
}

impl<S: Scalar> PointFunction<S> {
    pub fn new(params: TreeParams) -> Self {
        Self { params, values: BTreeMap::new() }
    }

    pub fn from_entries(
        params: TreeParams,
        entries: impl IntoIterator<Item = (VertexId, S)>,
    ) -> Result<Self, FunctionError> {
        let mut f = Self::new(params);
        for (v, x) in entries {
            f.insert(v, x)?;
        }
        Ok(f)
    }

    /// `delta_x`.
    pub fn delta(params: TreeParams, x: VertexId) -> Self {
        let mut values = BTreeMap::new();
        values.insert(x, S::one());
        Self { params, values }
    }

    /// Sets `f(v) = value`, rejecting negatives and dropping zeros.
    pub fn insert(&mut self, v: VertexId, value: S) -> Result<(), FunctionError> {
        check_nonneg(&value)?;
        VertexId::new(v.path().to_vec(), &self.params)?;
        if value.is_zero() {
            self.values.remove(&v);
        } else {
            self.values.insert(v, value);
        }
        Ok(())
    }

    pub fn params(&self) -> &TreeParams {
        &self.params
    }

    pub fn evaluate(&self, x: &VertexId) -> S {
        self.values.get(x).cloned().unwrap_or_else(S::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = (&VertexId, &S)> {
        self.values.iter()
    }

    pub fn support_len(&self) -> usize {
        self.values.len()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_support_depth(&self) -> usize {
        self.values.keys().map(VertexId::depth).max().unwrap_or(0)
    }

    pub fn max_value(&self) -> S {
        self.values.values().cloned().fold(S::zero(), S::max_of)
    }

    pub fn l1_norm(&self) -> S {
        self.values.values().cloned().fold(S::zero(), |a, b| a + b)
    }

    pub fn scale(&self, c: &S) -> Result<Self, FunctionError> {
        check_nonneg(c)?;
        Self::from_entries(self.params, self.values.iter().map(|(v, x)| (v.clone(), x.clone() * c.clone())))
    }

    pub fn power(&self, s: Exponent) -> Result<Self, FunctionError> {
        let mut values = BTreeMap::new();
        for (v, x) in &self.values {
            values.insert(v.clone(), x.pow_ratio(s)?);
        }
        Ok(Self { params: self.params, values })
    }

    pub fn convert<T: Scalar>(&self) -> Result<PointFunction<T>, FunctionError> {
        let mut values = BTreeMap::new();
        for (v, x) in &self.values {
            values.insert(v.clone(), T::parse_decimal(&x.to_decimal())?);
        }
        Ok(PointFunction { params: self.params, values })
    }
}

/// What follows the head of a radial profile.
#[derive(Clone, Debug, PartialEq)]
pub enum Tail<S> {
    Zero,
    /// `c_j = first * ratio^(j - start)` for `j >= start = head.len()`.
    Geometric { first: S, ratio: S },
}

/// Depth-only function `c_0, c_1, ...`.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialProfile<S> {
    head: Vec<S>,
    tail: Tail<S>,
}

impl<S: Scalar> RadialProfile<S> {
    pub fn new(head: Vec<S>, tail: Tail<S>) -> Result<Self, FunctionError> {
        head.iter().try_for_each(check_nonneg)?;
        if let Tail::Geometric { first, ratio } = &tail {
            check_nonneg(first)?;
            check_nonneg(ratio)?;
        }
        Ok(Self { head, tail })
    }

    pub fn zero() -> Self {
        Self { head: Vec::new(), tail: Tail::Zero }
    }

    pub fn constant(c: S) -> Result<Self, FunctionError> {
        Self::new(Vec::new(), Tail::Geometric { first: c, ratio: S::one() })
    }

    /// `amplitude * chi_{T^j}`.
    pub fn level_indicator(j: usize, amplitude: S) -> Result<Self, FunctionError> {
        let mut head = vec![S::zero(); j + 1];
        head[j] = amplitude;
        Self::new(head, Tail::Zero)
    }

    /// `w_beta`, with `c_j = k^(j beta)`. Fails in exact mode when `k^beta`
    /// is irrational.
    pub fn power_weight(beta: Exponent, params: &TreeParams) -> Result<Self, FunctionError> {
        let ratio = S::from_u64(params.k() as u64).pow_ratio(beta)?;
        Self::new(Vec::new(), Tail::Geometric { first: S::one(), ratio })
    }

    /// `c_j = k^(-j)`: every level carries unit mass.
    pub fn counterexample(params: &TreeParams) -> Self {
        let ratio = S::one() / S::from_u64(params.k() as u64);
        Self { head: Vec::new(), tail: Tail::Geometric { first: S::one(), ratio } }
    }

    pub fn head(&self) -> &[S] {
        &self.head
    }

    pub fn tail(&self) -> &Tail<S> {
        &self.tail
    }

    pub fn head_len(&self) -> usize {
        self.head.len()
    }

    /// Geometric tail ratio; `None` for a zero tail.
    pub fn tail_ratio(&self) -> Option<&S> {
        match &self.tail {
            Tail::Zero => None,
            Tail::Geometric { ratio, .. } => Some(ratio),
        }
    }

    pub fn has_zero_tail(&self) -> bool {
        match &self.tail {
            Tail::Zero => true,
            Tail::Geometric { first, .. } => first.is_zero(),
        }
    }

    pub fn value(&self, j: usize) -> S {
        if let Some(c) = self.head.get(j) {
            return c.clone();
        }
        match &self.tail {
            Tail::Zero => S::zero(),
            Tail::Geometric { first, ratio } => first.clone() * ratio.pow_u((j - self.head.len()) as u64),
        }
    }

    /// `c_0..=c_n`, computed incrementally.
    pub fn values_up_to(&self, n: usize) -> Vec<S> {
        let mut out = Vec::with_capacity(n + 1);
        out.extend(self.head.iter().take(n + 1).cloned());
        if out.len() < n + 1 {
            match &self.tail {
                Tail::Zero => out.resize(n + 1, S::zero()),
                Tail::Geometric { first, ratio } => {
                    let mut c = first.clone();
                    while out.len() < n + 1 {
                        out.push(c.clone());
                        c = c * ratio.clone();
                    }
                }
            }
        }
        out
    }

    /// `sum_j c_j k^j`, with the geometric tail summed in closed form.
    pub fn l1_norm(&self, params: &TreeParams) -> Result<S, FunctionError> {
        let k = S::from_u64(params.k() as u64);
        let mut total = S::zero();
        let mut kj = S::one();
        for c in &self.head {
            total = total + c.clone() * kj.clone();
            kj = kj * k.clone();
        }
        if let Tail::Geometric { first, ratio } = &self.tail {
            if first.is_zero() {
                return Ok(total);
            }
            let qk = ratio.clone() * k;
            let gap = S::one()
                .checked_sub(&qk)
                .filter(|g| !g.is_zero())
                .ok_or_else(|| FunctionError::Divergent { ratio: ratio.to_decimal(), k: params.k() })?;
            total = total + first.clone() * kj / gap;
        }
        Ok(total)
    }

    pub fn power(&self, s: Exponent) -> Result<Self, FunctionError> {
        let head = self.head.iter().map(|c| c.pow_ratio(s)).collect::<Result<Vec<_>, _>>()?;
        let tail = match &self.tail {
            Tail::Zero => Tail::Zero,
            Tail::Geometric { first, ratio } => {
                Tail::Geometric { first: first.pow_ratio(s)?, ratio: ratio.pow_ratio(s)? }
            }
        };
        Ok(Self { head, tail })
    }

    pub fn scale(&self, c: &S) -> Result<Self, FunctionError> {
        check_nonneg(c)?;
        let head = self.head.iter().map(|x| x.clone() * c.clone()).collect();
        let tail = match &self.tail {
            Tail::Zero => Tail::Zero,
            Tail::Geometric { first, ratio } => Tail::Geometric { first: first.clone() * c.clone(), ratio: ratio.clone() },
        };
        Ok(Self { head, tail })
    }

    /// Restriction to depths `<= depth` as a point function.
    pub fn materialize(&self, depth: usize, params: TreeParams) -> Result<PointFunction<S>, FunctionError> {
        let values = self.values_up_to(depth);
        let mut f = PointFunction::new(params);
        for v in crate::tree::truncation(depth, &params) {
            let c = values[v.depth()].clone();
            f.insert(v, c)?;
        }
        Ok(f)
    }

    pub fn convert<T: Scalar>(&self) -> Result<RadialProfile<T>, FunctionError> {
        let head = self.head.iter().map(|c| T::parse_decimal(&c.to_decimal())).collect::<Result<Vec<_>, _>>()?;
        let tail = match &self.tail {
            Tail::Zero => Tail::Zero,
            Tail::Geometric { first, ratio } => Tail::Geometric {
                first: T::parse_decimal(&first.to_decimal())?,
                ratio: T::parse_decimal(&ratio.to_decimal())?,
            },
        };
        RadialProfile::new(head, tail)
    }
}

/// A weight: pointwise-supported or radial.
#[derive(Clone, Debug, PartialEq)]
pub enum Weight<S> {
    Point(PointFunction<S>),
    Radial(RadialProfile<S>),
}

impl<S: Scalar> Weight<S> {
    pub fn evaluate(&self, x: &VertexId) -> S {
        match self {
            Weight::Point(f) => f.evaluate(x),
            Weight::Radial(p) => p.value(x.depth()),
        }
    }

    pub fn l1_norm(&self, params: &TreeParams) -> Result<S, FunctionError> {
        match self {
            Weight::Point(f) => Ok(f.l1_norm()),
            Weight::Radial(p) => p.l1_norm(params),
        }
    }

    pub fn power(&self, s: Exponent) -> Result<Self, FunctionError> {
        if *s.numer() <= 0 {
            return Err(FunctionError::Numerics(crate::error::NumericsError::Parse(format!(
                "power exponent must be positive, got {s}"
            ))));
        }
        Ok(match self {
            Weight::Point(f) => Weight::Point(f.power(s)?),
            Weight::Radial(p) => Weight::Radial(p.power(s)?),
        })
    }

    pub fn scale(&self, c: &S) -> Result<Self, FunctionError> {
        Ok(match self {
            Weight::Point(f) => Weight::Point(f.scale(c)?),
            Weight::Radial(p) => Weight::Radial(p.scale(c)?),
        })
    }

    /// Same weight in another scalar backend.
    pub fn convert<T: Scalar>(&self) -> Result<Weight<T>, FunctionError> {
        Ok(match self {
            Weight::Point(f) => Weight::Point(f.convert()?),
            Weight::Radial(p) => Weight::Radial(p.convert()?),
        })
    }

    /// `sup w`, or `None` when unbounded.
    pub fn sup(&self) -> Option<S> {
        match self {
            Weight::Point(f) => Some(f.max_value()),
            Weight::Radial(p) => {
                let head = p.head().iter().cloned().fold(S::zero(), S::max_of);
                match p.tail() {
                    Tail::Zero => Some(head),
                    Tail::Geometric { first, ratio } if *ratio <= S::one() || first.is_zero() => {
                        Some(S::max_of(head, first.clone()))
                    }
                    Tail::Geometric { .. } => None,
                }
            }
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let repr = match self {
            Weight::Point(f) => FunctionRepr::Point {
                entries: f
                    .support()
                    .map(|(v, x)| EntryRepr { path: v.path().to_vec(), value: x.to_decimal() })
                    .collect(),
            },
            Weight::Radial(p) => FunctionRepr::Radial {
                head: p.head.iter().map(S::to_decimal).collect(),
                tail: match &p.tail {
                    Tail::Zero => TailRepr::Zero,
                    Tail::Geometric { first, ratio } => {
                        TailRepr::Geometric { first: first.to_decimal(), ratio: ratio.to_decimal() }
                    }
                },
            },
        };
        serde_json::to_value(repr).expect("function repr serializes")
    }

    pub fn from_json(value: &serde_json::Value, params: TreeParams) -> Result<Self, FunctionError> {
        let repr: FunctionRepr =
            serde_json::from_value(value.clone()).map_err(|e| FunctionError::Json(e.to_string()))?;
        Ok(match repr {
            FunctionRepr::Point { entries } => {
                let mut f = PointFunction::new(params);
                for e in entries {
                    f.insert(VertexId::new(e.path, &params)?, S::parse_decimal(&e.value)?)?;
                }
                Weight::Point(f)
            }
            FunctionRepr::Radial { head, tail } => {
                let head = head.iter().map(|s| S::parse_decimal(s)).collect::<Result<Vec<_>, _>>()?;
                let tail = match tail {
                    TailRepr::Zero => Tail::Zero,
                    TailRepr::Geometric { first, ratio } => {
                        Tail::Geometric { first: S::parse_decimal(&first)?, ratio: S::parse_decimal(&ratio)? }
                    }
                };
                Weight::Radial(RadialProfile::new(head, tail)?)
            }
        })
    }
}

impl<S: Scalar> From<PointFunction<S>> for Weight<S> {
    fn from(f: PointFunction<S>) -> Self {
        Weight::Point(f)
    }
}

impl<S: Scalar> From<RadialProfile<S>> for Weight<S> {
    fn from(p: RadialProfile<S>) -> Self {
        Weight::Radial(p)
    }
}

/// `amplitude * chi_{T^j}` as a weight.
pub fn level_indicator<S: Scalar>(j: usize, amplitude: S) -> Result<Weight<S>, FunctionError> {
    Ok(Weight::Radial(RadialProfile::level_indicator(j, amplitude)?))
}

/// `k^n` in the scalar backend.
pub fn k_pow<S: Scalar>(params: &TreeParams, n: usize) -> S {
    S::from_biguint(&num_traits::pow(BigUint::from(params.k()), n))
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum FunctionRepr {
    Radial { head: Vec<String>, tail: TailRepr },
    Point { entries: Vec<EntryRepr> },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum TailRepr {
    Zero,
    Geometric { first: String, ratio: String },
}

#[derive(Serialize, Deserialize)]
struct EntryRepr {
    path: Vec<u32>,
    value: String,
}

#[cfg(test)]
mod tests {
    use num_rational::BigRational;

    use super::*;
    use crate::numerics::parse_rational;

    type Q = BigRational;

    fn q(s: &str) -> Q {
        parse_rational(s).unwrap()
    }

    fn k2() -> TreeParams {
        TreeParams::new(2).unwrap()
    }

    fn v(path: &[u32]) -> VertexId {
        VertexId::new(path.to_vec(), &k2()).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let w0: RadialProfile<Q> = RadialProfile::power_weight(Exponent::from(0), &k2()).unwrap();
        assert_eq!(Weight::Radial(w0).evaluate(&v(&[1, 0, 1])), q("1"));
        let cex: Weight<Q> = RadialProfile::counterexample(&k2()).into();
        assert_eq!(cex.evaluate(&v(&[0, 1, 1])), q("1/8"));
        let f = PointFunction::from_entries(k2(), [(VertexId::root(), q("5"))]).unwrap();
        assert_eq!(f.evaluate(&v(&[0, 1])), q("0"));
    }

    #[test]
    fn norms() {
        let fj = level_indicator(4, q("3")).unwrap();
        assert_eq!(fj.l1_norm(&k2()).unwrap(), q("48"));
        let cex: Weight<Q> = RadialProfile::counterexample(&k2()).into();
        assert!(matches!(cex.l1_norm(&k2()), Err(FunctionError::Divergent { .. })));
        let f = PointFunction::from_entries(k2(), [(VertexId::root(), q("2")), (v(&[0]), q("3"))]).unwrap();
        assert_eq!(f.l1_norm(), q("5"));
        // c_j = 4^-j on k = 2: sum 2^j 4^-j = 2.
        let p = RadialProfile::new(vec![], Tail::Geometric { first: q("1"), ratio: q("1/4") }).unwrap();
        assert_eq!(p.l1_norm(&k2()).unwrap(), q("2"));
        // Head plus shifted tail: 1 + 2*(1/2) + tail from j=2: (1/16)*4/(1-1/2).
        let p = RadialProfile::new(vec![q("1"), q("1/2")], Tail::Geometric { first: q("1/16"), ratio: q("1/4") }).unwrap();
        assert_eq!(p.l1_norm(&k2()).unwrap(), q("5/2"));
    }

    #[test]
    fn powers() {
        let w = RadialProfile::<Q>::power_weight(Exponent::from(-1), &k2()).unwrap();
        let ws = w.power(Exponent::from(2)).unwrap();
        assert_eq!(ws, RadialProfile::power_weight(Exponent::from(-2), &k2()).unwrap());
        let one = RadialProfile::constant(q("1")).unwrap();
        assert_eq!(one.power(Exponent::new(7, 3)).unwrap(), one);
        let sq = RadialProfile::<Q>::counterexample(&k2()).power(Exponent::from(2)).unwrap();
        assert_eq!(sq.value(3), q("1/64"));
        assert_eq!(sq.tail_ratio(), Some(&q("1/4")));
        assert!(RadialProfile::<Q>::power_weight(Exponent::new(1, 2), &k2()).is_err());
    }

    #[test]
    fn indicators() {
        let d: RadialProfile<Q> = RadialProfile::level_indicator(0, q("1")).unwrap();
        assert_eq!(d.value(0), q("1"));
        assert_eq!(d.value(1), q("0"));
        let f = RadialProfile::level_indicator(4, q("3")).unwrap();
        assert_eq!(f.value(4), q("3"));
        for j in 0..6 {
            let f = RadialProfile::level_indicator(j, q("3")).unwrap();
            assert_eq!(f.l1_norm(&k2()).unwrap(), q("3") * Q::from_biguint(&k2().level_size(j)));
        }
    }

    #[test]
    fn rejects_negatives() {
        assert!(PointFunction::from_entries(k2(), [(VertexId::root(), q("-1"))]).is_err());
        assert!(RadialProfile::new(vec![q("-1")], Tail::Zero).is_err());
        assert!(RadialProfile::new(vec![], Tail::Geometric { first: q("1"), ratio: q("-1/2") }).is_err());
    }

    #[test]
    fn json_schema() {
        let p = RadialProfile::new(vec![q("1"), q("1/2")], Tail::Geometric { first: q("1/4"), ratio: q("1/2") }).unwrap();
        let w: Weight<Q> = p.into();
        let j = w.to_json();
        assert_eq!(
            j.to_string(),
            r#"{"head":["1","1/2"],"kind":"radial","tail":{"first":"1/4","ratio":"1/2","type":"geometric"}}"#
        );
        assert_eq!(Weight::<Q>::from_json(&j, k2()).unwrap(), w);

        let f = PointFunction::from_entries(k2(), [(v(&[0, 1]), q("2/3"))]).unwrap();
        let w: Weight<Q> = f.into();
        let j = w.to_json();
        assert_eq!(j.to_string(), r#"{"entries":[{"path":[0,1],"value":"2/3"}],"kind":"point"}"#);
        assert_eq!(Weight::<Q>::from_json(&j, k2()).unwrap(), w);

        let bad = serde_json::json!({"kind":"point","entries":[{"path":[0,2],"value":"1"}]});
        assert!(Weight::<Q>::from_json(&bad, k2()).is_err());
        let zero = serde_json::json!({"kind":"radial","head":[],"tail":{"type":"zero"}});
        assert_eq!(Weight::<Q>::from_json(&zero, k2()).unwrap(), Weight::Radial(RadialProfile::zero()));
    }
}
