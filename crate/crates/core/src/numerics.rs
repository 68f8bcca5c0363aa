//! Scalar backends.
//!
//! Everything downstream is written against [`Scalar`], a nonnegative
//! semifield interface. Three families implement it:
//!
//! * [`BigRational`]: exact; irrational powers are refused with
//!   [`NumericsError::Inexact`].
//! * `f64` / `f32`: ordinary floating point.
//! * [`LogScalar`]: a nonnegative number stored as its natural log, for
//!   quantities such as `k^(j beta)` at depths where `f64` over/underflows.
//!
//! [`Enclosure`] carries a certified interval over any backend; float
//! backends round its endpoints outward.

use std::cmp::Ordering;
use std::fmt::{self, Debug};
use std::ops::{Add, Div, Mul};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::NumericsError;

/// Rational exponent used for powers (`s`, `1/s`, `beta`, ...).
pub type Exponent = Ratio<i64>;

/// Nonnegative scalar arithmetic shared by all engines.
pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    /// Whether arithmetic is exact (no rounding).
    const EXACT: bool;
    /// Short backend name recorded in reports.
    const NAME: &'static str;

    fn from_biguint(n: &BigUint) -> Self;
    fn from_rational(r: &BigRational) -> Result<Self, NumericsError>;
    fn to_f64(&self) -> f64;
    /// Natural logarithm as a float; `-inf` for zero.
    fn ln_value(&self) -> f64;
    fn pow_ratio(&self, p: Exponent) -> Result<Self, NumericsError>;
    /// `self - rhs`, or `None` when the difference would be negative.
    fn checked_sub(&self, rhs: &Self) -> Option<Self>;
    /// Move the value down to absorb `ops` roundings. Identity when exact.
    fn round_down(&self, ops: u32) -> Self;
    fn round_up(&self, ops: u32) -> Self;
    fn to_decimal(&self) -> String;
    fn parse_decimal(s: &str) -> Result<Self, NumericsError>;

    fn from_u64(n: u64) -> Self {
        Self::from_biguint(&BigUint::from(n))
    }

    fn is_finite(&self) -> bool {
        true
    }

    /// Integer power by repeated squaring.
    fn pow_u(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base.clone();
            }
            n >>= 1;
            if n > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }
}

/// Parses `"3/2"`, `"-1"`, `"0.25"` or `"-1e-3"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational, NumericsError> {
    let t = s.trim();
    let err = || NumericsError::Parse(s.to_string());
    if t.contains('/') {
        return BigRational::from_str(t).map_err(|_| err());
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| err())?),
        None => (t, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| err())?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        value = -value;
    }
    Ok(value)
}

/// Parses an exponent written as a fraction or a terminating decimal.
pub fn parse_exponent(s: &str) -> Result<Exponent, NumericsError> {
    let r = parse_rational(s)?;
    match (r.numer().to_i64(), r.denom().to_i64()) {
        (Some(n), Some(d)) => Ok(Exponent::new(n, d)),
        _ => Err(NumericsError::Parse(s.to_string())),
    }
}

/// Hoelder conjugate `s / (s - 1)`. Caller guarantees `s > 1`.
pub fn conjugate(s: Exponent) -> Exponent {
    s / (s - Exponent::one())
}

pub fn exponent_to_f64(p: Exponent) -> f64 {
    *p.numer() as f64 / *p.denom() as f64
}

fn biguint_ln(n: &BigUint) -> f64 {
    if n.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

fn rational_ln(r: &BigRational) -> f64 {
    match r.numer().sign() {
        Sign::NoSign => f64::NEG_INFINITY,
        Sign::Minus => f64::NAN,
        Sign::Plus => biguint_ln(r.numer().magnitude()) - biguint_ln(r.denom().magnitude()),
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;
    const NAME: &'static str = "exact";

    fn from_biguint(n: &BigUint) -> Self {
        BigRational::from_integer(BigInt::from_biguint(Sign::Plus, n.clone()))
    }

    fn from_rational(r: &BigRational) -> Result<Self, NumericsError> {
        Ok(r.clone())
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| rational_ln(self).exp())
    }

    fn ln_value(&self) -> f64 {
        rational_ln(self)
    }

    fn pow_ratio(&self, p: Exponent) -> Result<Self, NumericsError> {
        if self.is_negative() {
            return Err(NumericsError::Negative(self.to_string()));
        }
        if self.is_zero() {
            return match p.numer().cmp(&0) {
                Ordering::Greater => Ok(Self::zero()),
                Ordering::Equal => Ok(Self::one()),
                Ordering::Less => Err(NumericsError::ZeroPower(p.to_string())),
            };
        }
        let base = if *p.numer() < 0 { self.recip() } else { self.clone() };
        let powed = num_traits::pow(base, p.numer().unsigned_abs() as usize);
        let q = *p.denom();
        if q == 1 {
            return Ok(powed);
        }
        let q32 = u32::try_from(q).map_err(|_| NumericsError::Parse(p.to_string()))?;
        let rn = powed.numer().nth_root(q32);
        let rd = powed.denom().nth_root(q32);
        if num_traits::pow(rn.clone(), q as usize) == *powed.numer()
            && num_traits::pow(rd.clone(), q as usize) == *powed.denom()
        {
            Ok(BigRational::new(rn, rd))
        } else {
            Err(NumericsError::Inexact { base: self.to_string(), exponent: p.to_string() })
        }
    }

    fn checked_sub(&self, rhs: &Self) -> Option<Self> {
        (self >= rhs).then(|| self - rhs)
    }

    fn round_down(&self, _ops: u32) -> Self {
        self.clone()
    }

    fn round_up(&self, _ops: u32) -> Self {
        self.clone()
    }

    fn to_decimal(&self) -> String {
        self.to_string()
    }

    fn parse_decimal(s: &str) -> Result<Self, NumericsError> {
        parse_rational(s)
    }
}

macro_rules! float_scalar {
    ($t:ty, $name:literal) => {
        impl Scalar for $t {
            const EXACT: bool = false;
            const NAME: &'static str = $name;

            fn from_biguint(n: &BigUint) -> Self {
                n.to_f64().unwrap_or(f64::INFINITY) as $t
            }

            fn from_rational(r: &BigRational) -> Result<Self, NumericsError> {
                let v = ToPrimitive::to_f64(r).unwrap_or_else(|| {
                    let mag = rational_ln(&r.abs()).exp();
                    if r.is_negative() { -mag } else { mag }
                });
                Ok(v as $t)
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn ln_value(&self) -> f64 {
                (*self as f64).ln()
            }

            fn pow_ratio(&self, p: Exponent) -> Result<Self, NumericsError> {
                if *self < 0.0 {
                    return Err(NumericsError::Negative(self.to_string()));
                }
                if *self == 0.0 && *p.numer() < 0 {
                    return Err(NumericsError::ZeroPower(p.to_string()));
                }
                if *p.denom() == 1 {
                    return Ok(self.powi(*p.numer() as i32));
                }
                Ok(self.powf(exponent_to_f64(p) as $t))
            }

            fn checked_sub(&self, rhs: &Self) -> Option<Self> {
                (self >= rhs).then(|| self - rhs)
            }

            fn round_down(&self, ops: u32) -> Self {
                if *self == 0.0 || !self.is_finite() {
                    return *self;
                }
                let e = ops as $t * <$t>::EPSILON;
                let v = if *self > 0.0 { self * (1.0 - e) } else { self * (1.0 + e) };
                v.next_down()
            }

            fn round_up(&self, ops: u32) -> Self {
                if *self == 0.0 || !self.is_finite() {
                    return *self;
                }
                let e = ops as $t * <$t>::EPSILON;
                let v = if *self > 0.0 { self * (1.0 + e) } else { self * (1.0 - e) };
                v.next_up()
            }

            fn to_decimal(&self) -> String {
                format!("{:?}", self)
            }

            fn parse_decimal(s: &str) -> Result<Self, NumericsError> {
                let t = s.trim();
                if let Ok(v) = t.parse::<$t>() {
                    return Ok(v);
                }
                Self::from_rational(&parse_rational(t)?)
            }

            fn is_finite(&self) -> bool {
                <$t>::is_finite(*self)
            }
        }
    };
}

float_scalar!(f64, "f64");
float_scalar!(f32, "f32");

/// A nonnegative number stored as its natural logarithm (`-inf` is zero).
///
/// Products and powers are exact in the log domain; sums use a stable
/// log-sum-exp against the larger operand.
#[derive(Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct LogScalar {
    log: f64,
}

impl LogScalar {
    pub const ZERO: LogScalar = LogScalar { log: f64::NEG_INFINITY };

    pub fn from_log(log: f64) -> Self {
        Self { log }
    }

    /// Rejects negative values.
    pub fn from_value(v: f64) -> Result<Self, NumericsError> {
        if v < 0.0 || v.is_nan() {
            return Err(NumericsError::Negative(v.to_string()));
        }
        Ok(Self { log: v.ln() })
    }

    pub fn log(&self) -> f64 {
        self.log
    }

    pub fn value(&self) -> f64 {
        self.log.exp()
    }
}

impl Debug for LogScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exp({:?})", self.log)
    }
}

fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

impl Add for LogScalar {
    type Output = LogScalar;
    fn add(self, rhs: Self) -> Self {
        Self { log: log_add_exp(self.log, rhs.log) }
    }
}

impl Mul for LogScalar {
    type Output = LogScalar;
    fn mul(self, rhs: Self) -> Self {
        if self.log == f64::NEG_INFINITY || rhs.log == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        Self { log: self.log + rhs.log }
    }
}

impl Div for LogScalar {
    type Output = LogScalar;
    fn div(self, rhs: Self) -> Self {
        if self.log == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        Self { log: self.log - rhs.log }
    }
}

impl Zero for LogScalar {
    fn zero() -> Self {
        Self::ZERO
    }
    fn is_zero(&self) -> bool {
        self.log == f64::NEG_INFINITY
    }
}

impl One for LogScalar {
    fn one() -> Self {
        Self { log: 0.0 }
    }
}

impl Scalar for LogScalar {
    const EXACT: bool = false;
    const NAME: &'static str = "log";

    fn from_biguint(n: &BigUint) -> Self {
        Self { log: biguint_ln(n) }
    }

    fn from_rational(r: &BigRational) -> Result<Self, NumericsError> {
        if r.is_negative() {
            return Err(NumericsError::Negative(r.to_string()));
        }
        Ok(Self { log: rational_ln(r) })
    }

    fn to_f64(&self) -> f64 {
        self.value()
    }

    fn ln_value(&self) -> f64 {
        self.log
    }

    fn pow_ratio(&self, p: Exponent) -> Result<Self, NumericsError> {
        if self.is_zero() {
            return match p.numer().cmp(&0) {
                Ordering::Greater => Ok(Self::ZERO),
                Ordering::Equal => Ok(Self::one()),
                Ordering::Less => Err(NumericsError::ZeroPower(p.to_string())),
            };
        }
        Ok(Self { log: self.log * exponent_to_f64(p) })
    }

    fn checked_sub(&self, rhs: &Self) -> Option<Self> {
        if self < rhs {
            return None;
        }
        if rhs.is_zero() {
            return Some(*self);
        }
        Some(Self { log: self.log + (-(rhs.log - self.log).exp()).ln_1p() })
    }

    fn round_down(&self, ops: u32) -> Self {
        if !self.log.is_finite() {
            return *self;
        }
        let slack = (self.log.abs() + 1.0) * ops as f64 * f64::EPSILON;
        Self { log: (self.log - slack).next_down() }
    }

    fn round_up(&self, ops: u32) -> Self {
        if !self.log.is_finite() {
            return *self;
        }
        let slack = (self.log.abs() + 1.0) * ops as f64 * f64::EPSILON;
        Self { log: (self.log + slack).next_up() }
    }

    fn to_decimal(&self) -> String {
        if self.is_zero() {
            "0".to_string()
        } else if self.log.abs() < 700.0 {
            format!("{:?}", self.value())
        } else {
            format!("exp({:?})", self.log)
        }
    }

    fn parse_decimal(s: &str) -> Result<Self, NumericsError> {
        let t = s.trim();
        if let Some(inner) = t.strip_prefix("exp(").and_then(|r| r.strip_suffix(')')) {
            return inner
                .trim()
                .parse::<f64>()
                .map(Self::from_log)
                .map_err(|_| NumericsError::Parse(s.to_string()));
        }
        if let Ok(v) = t.parse::<f64>() {
            return Self::from_value(v);
        }
        Self::from_rational(&parse_rational(t)?)
    }

    fn is_finite(&self) -> bool {
        self.log < f64::INFINITY && !self.log.is_nan()
    }
}

/// Log of a sum of log-domain terms, accumulated against the running maximum.
pub fn log_sum(items: &[LogScalar]) -> LogScalar {
    let max = items.iter().map(|x| x.log).fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return LogScalar::ZERO;
    }
    if max == f64::INFINITY {
        return LogScalar::from_log(f64::INFINITY);
    }
    let s: f64 = items.iter().map(|x| (x.log - max).exp()).sum();
    LogScalar::from_log(max + s.ln())
}

/// A certified interval `[lower, upper]` containing a true value.
#[derive(Clone, Debug, PartialEq)]
pub struct Enclosure<S> {
    lower: S,
    upper: S,
}

impl<S: Scalar> Enclosure<S> {
    pub fn new(lower: S, upper: S) -> Result<Self, NumericsError> {
        if lower > upper {
            return Err(NumericsError::Inverted { lower: lower.to_decimal(), upper: upper.to_decimal() });
        }
        Ok(Self { lower, upper })
    }

    pub fn point(x: S) -> Self {
        Self { lower: x.clone(), upper: x }
    }

    /// Encloses a float result that carries up to `ops` roundings.
    pub fn rounded(x: S, ops: u32) -> Self {
        Self { lower: x.round_down(ops), upper: x.round_up(ops) }
    }

    pub fn lower(&self) -> &S {
        &self.lower
    }

    pub fn upper(&self) -> &S {
        &self.upper
    }

    pub fn into_bounds(self) -> (S, S) {
        (self.lower, self.upper)
    }

    pub fn is_degenerate(&self) -> bool {
        self.lower == self.upper
    }

    pub fn contains(&self, x: &S) -> bool {
        self.lower <= *x && *x <= self.upper
    }

    /// True when the enclosure lies strictly above `lambda`.
    pub fn exceeds(&self, lambda: &S) -> bool {
        self.lower > *lambda
    }

    /// True when the enclosure cannot decide `value > lambda`.
    pub fn straddles(&self, lambda: &S) -> bool {
        self.lower <= *lambda && self.upper > *lambda
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self {
            lower: (self.lower.clone() + rhs.lower.clone()).round_down(1),
            upper: (self.upper.clone() + rhs.upper.clone()).round_up(1),
        }
    }

    /// Product of nonnegative enclosures.
    pub fn mul(&self, rhs: &Self) -> Self {
        Self {
            lower: (self.lower.clone() * rhs.lower.clone()).round_down(1),
            upper: (self.upper.clone() * rhs.upper.clone()).round_up(1),
        }
    }

    /// Quotient by a strictly positive enclosure.
    pub fn div(&self, rhs: &Self) -> Self {
        Self {
            lower: (self.lower.clone() / rhs.upper.clone()).round_down(1),
            upper: (self.upper.clone() / rhs.lower.clone()).round_up(1),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        Self {
            lower: (self.lower.clone() * c.clone()).round_down(1),
            upper: (self.upper.clone() * c.clone()).round_up(1),
        }
    }

    pub fn max(&self, rhs: &Self) -> Self {
        Self {
            lower: S::max_of(self.lower.clone(), rhs.lower.clone()),
            upper: S::max_of(self.upper.clone(), rhs.upper.clone()),
        }
    }

    /// Monotone power of a nonnegative enclosure.
    pub fn pow_ratio(&self, p: Exponent) -> Result<Self, NumericsError> {
        let a = self.lower.pow_ratio(p)?;
        let b = self.upper.pow_ratio(p)?;
        let (lo, hi) = if *p.numer() >= 0 { (a, b) } else { (b, a) };
        Ok(Self { lower: lo.round_down(2), upper: hi.round_up(2) })
    }

    pub fn map_bounds<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Enclosure<T> {
        Enclosure { lower: f(&self.lower), upper: f(&self.upper) }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.lower.to_f64(), self.upper.to_f64())
    }
}

#[derive(Serialize, Deserialize)]
struct EnclosureRepr {
    lower: String,
    upper: String,
}

impl<S: Scalar> Serialize for Enclosure<S> {
    fn serialize<Ser: serde::Serializer>(&self, ser: Ser) -> Result<Ser::Ok, Ser::Error> {
        EnclosureRepr { lower: self.lower.to_decimal(), upper: self.upper.to_decimal() }.serialize(ser)
    }
}

impl<'de, S: Scalar> Deserialize<'de> for Enclosure<S> {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let repr = EnclosureRepr::deserialize(de)?;
        let lower = S::parse_decimal(&repr.lower).map_err(serde::de::Error::custom)?;
        let upper = S::parse_decimal(&repr.upper).map_err(serde::de::Error::custom)?;
        Enclosure::new(lower, upper).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn exact_powers() {
        assert_eq!(q("4").pow_ratio(Exponent::new(1, 2)).unwrap(), q("2"));
        assert_eq!(q("2").pow_ratio(Exponent::new(-1, 1)).unwrap(), q("1/2"));
        assert_eq!(q("8/27").pow_ratio(Exponent::new(2, 3)).unwrap(), q("4/9"));
        assert_eq!(q("0").pow_ratio(Exponent::new(3, 2)).unwrap(), q("0"));
        assert!(matches!(q("2").pow_ratio(Exponent::new(1, 2)), Err(NumericsError::Inexact { .. })));
        assert!(matches!(q("0").pow_ratio(Exponent::new(-1, 2)), Err(NumericsError::ZeroPower(_))));
    }

    #[test]
    fn log_power_is_definitional() {
        let two = LogScalar::from_u64(2);
        let beta = parse_exponent("-0.3").unwrap();
        let v = two.pow_u(64);
        assert!((v.log() - 64.0 * std::f64::consts::LN_2).abs() < 1e-12);
        let w = two.pow_ratio(beta * Exponent::from(64)).unwrap();
        assert!((w.log() - 64.0 * -0.3 * std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn log_sum_examples() {
        let a = LogScalar::from_log(-3.25);
        assert_eq!(log_sum(&[a]), a);
        assert!((log_sum(&[a, a]).log() - (-3.25 + std::f64::consts::LN_2)).abs() < 1e-15);
        assert!(log_sum(&[]).is_zero());
        // Geometric series 1/(1 - 1/2) = 2.
        let terms: Vec<_> = (0..200).map(|j| LogScalar::from_log(-(j as f64) * std::f64::consts::LN_2)).collect();
        let s = log_sum(&terms);
        assert!((s.log() - std::f64::consts::LN_2).abs() / std::f64::consts::LN_2 < 1e-12);
    }

    #[test]
    fn log_sub() {
        let a = LogScalar::from_value(5.0).unwrap();
        let b = LogScalar::from_value(3.0).unwrap();
        assert!((a.checked_sub(&b).unwrap().value() - 2.0).abs() < 1e-14);
        assert!(b.checked_sub(&a).is_none());
    }

    #[test]
    fn parse_forms() {
        assert_eq!(q("3/2"), BigRational::new(3.into(), 2.into()));
        assert_eq!(q("-0.3"), BigRational::new((-3).into(), 10.into()));
        assert_eq!(q("1e-3"), BigRational::new(1.into(), 1000.into()));
        assert_eq!(q("2.5E1"), BigRational::from_integer(25.into()));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational(".").is_err());
        assert_eq!(parse_exponent("-5/4").unwrap(), Exponent::new(-5, 4));
        assert_eq!(conjugate(Exponent::from(2)), Exponent::from(2));
        assert_eq!(conjugate(Exponent::new(3, 2)), Exponent::from(3));
    }

    #[test]
    fn decimal_round_trip() {
        for s in ["0", "7", "-3/8", "12345678901234567890/7"] {
            assert_eq!(BigRational::parse_decimal(s).unwrap().to_decimal(), s);
        }
        let x = LogScalar::parse_decimal("exp(-2000.5)").unwrap();
        assert_eq!(x.to_decimal(), "exp(-2000.5)");
        assert_eq!(f64::parse_decimal("1/4").unwrap(), 0.25);
    }

    #[test]
    fn huge_biguint_log() {
        let n = num_traits::pow(BigUint::from(3u32), 2000);
        let l = LogScalar::from_biguint(&n).log();
        assert!((l - 2000.0 * 3f64.ln()).abs() / l < 1e-14);
    }

    #[test]
    fn enclosure_ops() {
        let a = Enclosure::new(q("1"), q("2")).unwrap();
        let b = Enclosure::new(q("3"), q("5")).unwrap();
        assert_eq!(a.add(&b), Enclosure::new(q("4"), q("7")).unwrap());
        assert_eq!(a.mul(&b), Enclosure::new(q("3"), q("10")).unwrap());
        assert_eq!(a.div(&b), Enclosure::new(q("1/5"), q("2/3")).unwrap());
        assert!(Enclosure::new(q("2"), q("1")).is_err());
        assert!(a.straddles(&q("3/2")));
        assert!(b.exceeds(&q("2")));
        let f = Enclosure::rounded(0.1f64, 3);
        assert!(f.lower() < &0.1 && f.upper() > &0.1);
    }

    #[test]
    fn enclosure_json() {
        let a = Enclosure::new(q("1/3"), q("1/2")).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"lower":"1/3","upper":"1/2"}"#);
        let back: Enclosure<BigRational> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
    }
}
