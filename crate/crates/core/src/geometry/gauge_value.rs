use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{exact_sqrt, nth_root_enclosure, parse_rational, to_f64, Enclosure, Rational, DEFAULT_ROOT_BITS};

/// An exact nonnegative value of a gauge or support function.
///
/// Quadratic families produce square roots of rationals, stored by their
/// square. Ordering and equality compare the underlying real numbers, so
/// `Rational(1/2) == SqrtRational(1/4)`.
#[derive(Clone, Debug)]
pub enum GaugeValue {
    Rational(Rational),
    /// The value is the square root of the stored rational.
    SqrtRational(Rational),
}

impl GaugeValue {
    pub fn zero() -> Self {
        GaugeValue::Rational(Rational::zero())
    }

    pub fn square(&self) -> Rational {
        match self {
            GaugeValue::Rational(q) => q * q,
            GaugeValue::SqrtRational(s) => s.clone(),
        }
    }

    pub fn is_sqrt(&self) -> bool {
        matches!(self, GaugeValue::SqrtRational(_))
    }

    /// The value as a rational, when it is one.
    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            GaugeValue::Rational(q) => Some(q.clone()),
            GaugeValue::SqrtRational(s) => exact_sqrt(s),
        }
    }

    pub fn enclosure(&self) -> Enclosure {
        match self {
            GaugeValue::Rational(q) => Enclosure::exact(q.clone()),
            GaugeValue::SqrtRational(s) => nth_root_enclosure(s, 2, DEFAULT_ROOT_BITS),
        }
    }

    /// A rational number `>=` the value (the value itself when rational).
    pub fn upper_rational(&self) -> Rational {
        self.enclosure().hi
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            GaugeValue::Rational(q) => to_f64(q),
            GaugeValue::SqrtRational(s) => to_f64(s).sqrt(),
        }
    }

    /// `|t| * self`.
    pub fn scale(&self, t: &Rational) -> GaugeValue {
        let t = t.abs();
        match self {
            GaugeValue::Rational(q) => GaugeValue::Rational(q * t),
            GaugeValue::SqrtRational(s) => GaugeValue::SqrtRational(s * &t * &t),
        }
    }

    pub fn le_rational(&self, t: &Rational) -> bool {
        !t.is_negative() && self.square() <= t * t
    }
}

impl PartialEq for GaugeValue {
    fn eq(&self, other: &Self) -> bool {
        self.square() == other.square()
    }
}

impl Eq for GaugeValue {}

impl PartialOrd for GaugeValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GaugeValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (GaugeValue::Rational(a), GaugeValue::Rational(b)) => a.cmp(b),
            _ => self.square().cmp(&other.square()),
        }
    }
}

impl fmt::Display for GaugeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GaugeValue::Rational(q) => write!(f, "{q}"),
            GaugeValue::SqrtRational(s) => match exact_sqrt(s) {
                Some(r) => write!(f, "{r}"),
                None => write!(f, "sqrt({s})"),
            },
        }
    }
}

impl FromStr for GaugeValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
            let q = parse_rational(inner)?;
            if q.is_negative() {
                return Err(Error::Parse(format!("negative radicand in {s:?}")));
            }
            return Ok(GaugeValue::SqrtRational(q));
        }
        let q = parse_rational(s)?;
        if q.is_negative() {
            return Err(Error::Parse(format!("negative gauge value {s:?}")));
        }
        Ok(GaugeValue::Rational(q))
    }
}

impl Serialize for GaugeValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GaugeValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn mixed_kind_ordering_is_exact() {
        let half = GaugeValue::Rational(ratio(1, 2));
        let sqrt_quarter = GaugeValue::SqrtRational(ratio(1, 4));
        assert_eq!(half, sqrt_quarter);
        let sqrt2 = GaugeValue::SqrtRational(int(2));
        assert!(sqrt2 > GaugeValue::Rational(ratio(141, 100)));
        assert!(sqrt2 < GaugeValue::Rational(ratio(142, 100)));
    }

    #[test]
    fn display_round_trips() {
        for v in [
            GaugeValue::Rational(ratio(3, 7)),
            GaugeValue::SqrtRational(ratio(1, 2)),
            GaugeValue::SqrtRational(ratio(1, 4)),
        ] {
            let s = v.to_string();
            let back: GaugeValue = s.parse().unwrap();
            assert_eq!(back, v, "{s}");
        }
        assert_eq!(GaugeValue::SqrtRational(ratio(1, 4)).to_string(), "1/2");
        assert_eq!(GaugeValue::SqrtRational(ratio(1, 2)).to_string(), "sqrt(1/2)");
    }
}
