//! Extended reals `R ∪ {+∞}` and the tolerance used for every finite comparison.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ValueError {
    #[error("value is NaN")]
    NaN,
    #[error("negative infinity is not representable")]
    NegativeInfinity,
    #[error("finite value expected, got {0}")]
    NotFinite(f64),
}

/// A real number or `+∞`.
///
/// Stored as a single `f64` where `f64::INFINITY` is the `+∞` tag. NaN and
/// `-∞` are rejected at construction, so the type is totally ordered.
/// Adding two finite values that overflow saturates to `+∞`.
#[derive(Clone, Copy, PartialEq, Default)]
pub struct ExtValue(f64);

impl ExtValue {
    pub const INFINITY: ExtValue = ExtValue(f64::INFINITY);
    pub const ZERO: ExtValue = ExtValue(0.0);

    /// A finite value. Rejects NaN and both infinities.
    pub fn finite(v: f64) -> Result<Self, ValueError> {
        if v.is_nan() {
            Err(ValueError::NaN)
        } else if !v.is_finite() {
            Err(ValueError::NotFinite(v))
        } else {
            Ok(ExtValue(v))
        }
    }

    /// Accepts any `f64` except NaN and `-∞`; `+∞` maps to [`ExtValue::INFINITY`].
    pub fn from_f64(v: f64) -> Result<Self, ValueError> {
        if v.is_nan() {
            Err(ValueError::NaN)
        } else if v == f64::NEG_INFINITY {
            Err(ValueError::NegativeInfinity)
        } else {
            Ok(ExtValue(v))
        }
    }

    #[inline]
    pub fn is_infinite(self) -> bool {
        self.0 == f64::INFINITY
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        !self.is_infinite()
    }

    #[inline]
    pub fn finite_value(self) -> Option<f64> {
        if self.is_finite() {
            Some(self.0)
        } else {
            None
        }
    }

    /// Raw representation; `f64::INFINITY` for `+∞`.
    #[inline]
    pub fn to_f64(self) -> f64 {
        self.0
    }

    /// Adds a finite shift; `+∞` stays `+∞`.
    #[inline]
    pub fn shift(self, delta: f64) -> Self {
        debug_assert!(delta.is_finite());
        ExtValue(self.0 + delta)
    }
}

impl From<f64> for ExtValue {
    /// Panics on NaN or `-∞`. Meant for literals in tests and generators.
    fn from(v: f64) -> Self {
        ExtValue::from_f64(v).expect("invalid extended value")
    }
}

impl From<i32> for ExtValue {
    fn from(v: i32) -> Self {
        ExtValue(f64::from(v))
    }
}

impl Add for ExtValue {
    type Output = ExtValue;

    #[inline]
    fn add(self, rhs: ExtValue) -> ExtValue {
        // never NaN: neither side can be -inf
        ExtValue(self.0 + rhs.0)
    }
}

impl Eq for ExtValue {}

impl PartialOrd for ExtValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtValue {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.partial_cmp(&other.0).expect("ExtValue is never NaN")
    }
}

impl fmt::Debug for ExtValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ExtValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl Serialize for ExtValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for ExtValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct ExtVisitor;

        impl Visitor<'_> for ExtVisitor {
            type Value = ExtValue;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a finite number or the string \"inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<ExtValue, E> {
                ExtValue::finite(v).map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<ExtValue, E> {
                Ok(ExtValue(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<ExtValue, E> {
                Ok(ExtValue(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<ExtValue, E> {
                match v {
                    "inf" | "+inf" => Ok(ExtValue::INFINITY),
                    other => Err(E::invalid_value(de::Unexpected::Str(other), &self)),
                }
            }
        }

        d.deserialize_any(ExtVisitor)
    }
}

/// Relative tolerance `ε·max(1, |lhs|, |rhs|)` for comparisons of finite reals.
///
/// Infinity is a tag and is always compared exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    eps: f64,
}

pub const DEFAULT_EPSILON: f64 = 1e-9;

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            eps: DEFAULT_EPSILON,
        }
    }
}

impl Tolerance {
    /// Panics unless `eps` is finite and positive.
    pub fn new(eps: f64) -> Self {
        assert!(
            eps.is_finite() && eps > 0.0,
            "epsilon must be a positive real"
        );
        Tolerance { eps }
    }

    pub fn epsilon(&self) -> f64 {
        self.eps
    }

    #[inline]
    fn slack(&self, a: f64, b: f64) -> f64 {
        self.eps * 1f64.max(a.abs()).max(b.abs())
    }

    #[inline]
    pub fn eq_f64(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.slack(a, b)
    }

    #[inline]
    pub fn ge_f64(&self, a: f64, b: f64) -> bool {
        a >= b - self.slack(a, b)
    }

    #[inline]
    pub fn gt_f64(&self, a: f64, b: f64) -> bool {
        a > b + self.slack(a, b)
    }

    #[inline]
    pub fn eq(&self, a: ExtValue, b: ExtValue) -> bool {
        match (a.is_infinite(), b.is_infinite()) {
            (true, true) => true,
            (false, false) => self.eq_f64(a.0, b.0),
            _ => false,
        }
    }

    /// `a ≥ b` up to tolerance.
    #[inline]
    pub fn ge(&self, a: ExtValue, b: ExtValue) -> bool {
        if a.is_infinite() {
            true
        } else if b.is_infinite() {
            false
        } else {
            self.ge_f64(a.0, b.0)
        }
    }

    /// `a > b` by more than the tolerance.
    #[inline]
    pub fn gt(&self, a: ExtValue, b: ExtValue) -> bool {
        match (a.is_infinite(), b.is_infinite()) {
            (_, true) => false,
            (true, false) => true,
            (false, false) => self.gt_f64(a.0, b.0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rejects_nan_and_negative_infinity() {
        assert_eq!(ExtValue::from_f64(f64::NAN), Err(ValueError::NaN));
        assert_eq!(
            ExtValue::from_f64(f64::NEG_INFINITY),
            Err(ValueError::NegativeInfinity)
        );
        assert!(ExtValue::finite(f64::INFINITY).is_err());
        assert!(ExtValue::from_f64(f64::INFINITY).unwrap().is_infinite());
    }

    #[test]
    fn arithmetic_and_order_on_a_million_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1_000_000 {
            let x = ExtValue::finite(rng.gen_range(-1e12..1e12)).unwrap();
            assert!(x < ExtValue::INFINITY);
            assert_eq!(x + ExtValue::INFINITY, ExtValue::INFINITY);
            assert_eq!(ExtValue::INFINITY + x, ExtValue::INFINITY);
            assert_eq!(x.min(ExtValue::INFINITY), x);
            assert!((x + x).is_finite());
        }
        assert_eq!(ExtValue::INFINITY, ExtValue::INFINITY);
        assert_eq!(ExtValue::INFINITY + ExtValue::INFINITY, ExtValue::INFINITY);
    }

    #[test]
    fn tolerance_treats_infinity_as_a_tag() {
        let tol = Tolerance::default();
        let inf = ExtValue::INFINITY;
        let one = ExtValue::from(1.0);
        assert!(tol.eq(inf, inf));
        assert!(!tol.eq(inf, one));
        assert!(tol.ge(inf, one) && !tol.ge(one, inf));
        assert!(tol.gt(inf, one) && !tol.gt(inf, inf) && !tol.gt(one, inf));
        assert!(tol.eq_f64(1.0, 1.0 + 1e-12));
        assert!(!tol.gt_f64(1.0 + 1e-12, 1.0));
        assert!(tol.eq_f64(1e12, 1e12 + 1.0));
        assert!(!tol.eq_f64(0.0, 1e-6));
    }

    #[test]
    fn json_forms() {
        let v: ExtValue = serde_json::from_str("\"inf\"").unwrap();
        assert!(v.is_infinite());
        let v: ExtValue = serde_json::from_str("2").unwrap();
        assert_eq!(v, ExtValue::from(2.0));
        assert!(serde_json::from_str::<ExtValue>("\"-inf\"").is_err());
        assert_eq!(
            serde_json::to_string(&ExtValue::INFINITY).unwrap(),
            "\"inf\""
        );
        assert_eq!(serde_json::to_string(&ExtValue::from(1.5)).unwrap(), "1.5");
    }
}
