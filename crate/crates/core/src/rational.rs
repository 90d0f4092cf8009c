//! Exact rational helpers and certified enclosures of irrational roots.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Relative width of enclosures produced by default: 2^-40.
pub const DEFAULT_ROOT_BITS: u32 = 40;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p"`, `"p/q"`, or a plain decimal such as `"1.25"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        let mut num: BigInt = digits.parse().map_err(|_| bad())?;
        if neg {
            num = -num;
        }
        let den = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(Rational::new(num, den));
    }
    let p: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(p))
}

pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Exact integer square root test: returns `Some(s)` with `s*s == q` when `q`
/// is the square of a rational.
pub fn exact_sqrt(q: &Rational) -> Option<Rational> {
    let e = nth_root_enclosure(q, 2, 8);
    e.is_exact().then_some(e.lo)
}

/// Decimal rendering truncated to `digits` significant digits.
pub fn to_decimal(q: &Rational, digits: usize) -> String {
    if q.is_zero() {
        return "0".into();
    }
    let neg = q.is_negative();
    let q = q.abs();
    let int_part = q.to_integer();
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    let mut rem = q - Rational::from_integer(int_part.clone());
    let int_str = int_part.to_string();
    out.push_str(&int_str);
    let used = if int_part.is_zero() { 0 } else { int_str.len() };
    out.push('.');
    let mut significant = used;
    let ten = Rational::from_integer(BigInt::from(10));
    let mut started = used > 0;
    while significant < digits {
        rem *= &ten;
        let d = rem.to_integer();
        rem -= Rational::from_integer(d.clone());
        out.push_str(&d.to_string());
        if started || !d.is_zero() {
            started = true;
            significant += 1;
        }
    }
    out
}

/// A closed interval `[lo, hi]` known to contain an exact value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Enclosure {
    #[serde(serialize_with = "ser_rational")]
    pub lo: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub hi: Rational,
}

pub(crate) fn ser_rational<S: serde::Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(q))
}

impl Enclosure {
    pub fn exact(q: Rational) -> Self {
        Enclosure { lo: q.clone(), hi: q }
    }

    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        Enclosure { lo, hi }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn mid_f64(&self) -> f64 {
        (to_f64(&self.lo) + to_f64(&self.hi)) / 2.0
    }

    /// Product of two nonnegative enclosures.
    pub fn mul(&self, other: &Enclosure) -> Enclosure {
        Enclosure::new(&self.lo * &other.lo, &self.hi * &other.hi)
    }

    pub fn scale(&self, q: &Rational) -> Enclosure {
        if q.is_negative() {
            Enclosure::new(&self.hi * q, &self.lo * q)
        } else {
            Enclosure::new(&self.lo * q, &self.hi * q)
        }
    }

    /// `1 - x`.
    pub fn one_minus(&self) -> Enclosure {
        let one = Rational::one();
        Enclosure::new(&one - &self.hi, &one - &self.lo)
    }

    pub fn clamp_nonnegative(&self) -> Enclosure {
        let z = Rational::zero();
        Enclosure::new(self.lo.clone().max(z.clone()), self.hi.clone().max(z))
    }

    /// Enclosure of `min(a, b)`.
    pub fn min(&self, other: &Enclosure) -> Enclosure {
        Enclosure::new(
            self.lo.clone().min(other.lo.clone()),
            self.hi.clone().min(other.hi.clone()),
        )
    }

    pub fn contains(&self, q: &Rational) -> bool {
        &self.lo <= q && q <= &self.hi
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "[{}, {}]", to_decimal(&self.lo, 12), to_decimal(&self.hi, 12))
        }
    }
}

/// Certified enclosure of `q^(1/k)` for `q >= 0`, `k >= 1`, with relative
/// width below `2^-bits`. Perfect k-th powers come back exact.
pub fn nth_root_enclosure(q: &Rational, k: u32, bits: u32) -> Enclosure {
    assert!(k >= 1, "root order must be positive");
    assert!(!q.is_negative(), "root of a negative rational");
    if q.is_zero() {
        return Enclosure::exact(Rational::zero());
    }
    if k == 1 {
        return Enclosure::exact(q.clone());
    }
    let a = q.numer().clone();
    let b = q.denom().clone();
    // q^(1/k) = (a * b^(k-1))^(1/k) / b
    let base = &a * num_traits::pow(b.clone(), (k - 1) as usize);
    let mut shift = bits + 2;
    loop {
        let scaled = &base << (shift as usize * k as usize);
        let r = scaled.nth_root(k);
        let den = &b << shift as usize;
        if num_traits::pow(r.clone(), k as usize) == scaled {
            return Enclosure::exact(Rational::new(r, den));
        }
        if r.bits() as u32 > bits {
            return Enclosure::new(
                Rational::new(r.clone(), den.clone()),
                Rational::new(r + BigInt::one(), den),
            );
        }
        shift += bits + 1 - r.bits() as u32;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("-7").unwrap(), int(-7));
        assert_eq!(parse_rational("1.25").unwrap(), ratio(5, 4));
        assert_eq!(parse_rational("-0.5").unwrap(), ratio(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1.").is_err());
    }

    #[test]
    fn perfect_roots_are_exact() {
        let e = nth_root_enclosure(&ratio(1, 10_000), 2, 40);
        assert!(e.is_exact());
        assert_eq!(e.lo, ratio(1, 100));
        let e = nth_root_enclosure(&ratio(27, 8), 3, 40);
        assert_eq!(e, Enclosure::exact(ratio(3, 2)));
    }

    #[test]
    fn irrational_roots_are_bracketed_tightly() {
        let e = nth_root_enclosure(&int(2), 2, 40);
        assert!(!e.is_exact());
        assert!(&e.lo * &e.lo < int(2));
        assert!(&e.hi * &e.hi > int(2));
        let rel = to_f64(&(e.width() / &e.lo));
        assert!(rel < 1e-12, "{rel}");

        let q = ratio(1, 7);
        let e = nth_root_enclosure(&q, 5, 40);
        assert!(num_traits::pow(e.lo.clone(), 5) <= q);
        assert!(num_traits::pow(e.hi.clone(), 5) >= q);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal(&ratio(1, 3), 5), "0.33333");
        assert_eq!(to_decimal(&ratio(314159, 100000), 4), "3.141");
        assert_eq!(to_decimal(&ratio(1, 400), 2), "0.0025");
    }
}
