//! Exact rational scalars.
//!
//! Every LP value, capacity and bound in this crate is a [`Rational`]. The
//! canonical-form invariant (gcd 1, positive denominator) is maintained by
//! `num-rational`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::str::FromStr;
use thiserror::Error;

pub type Rational = num_rational::BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse `{0}` as a rational (expected `p/q`, an integer, or a decimal)")]
pub struct ParseRationalError(pub String);

/// `p / q` as a rational.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

pub fn from_usize(p: usize) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Parses `p/q`, `p`, or a finite decimal such as `0.125` exactly.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let t = s.trim();
    if t.is_empty() {
        return Err(err());
    }
    if let Some((p, q)) = t.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| err())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit())
            || !whole_digits.chars().all(|c| c.is_ascii_digit())
            || (whole_digits.is_empty() && frac.is_empty())
        {
            return Err(err());
        }
        let digits = format!("{whole_digits}{frac}");
        let mantissa = BigInt::from_str(if digits.is_empty() { "0" } else { &digits })
            .map_err(|_| err())?;
        let scale = num_traits::pow(BigInt::from(10u32), frac.len());
        let value = Rational::new(mantissa, scale);
        return Ok(if negative { -value } else { value });
    }
    BigInt::from_str(t)
        .map(Rational::from_integer)
        .map_err(|_| err())
}

/// `p/q` text form; integers are printed without a denominator.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Decimal rendering with `digits` digits after the point (rounded toward
/// negative infinity).
pub fn to_decimal(r: &Rational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10u32), digits);
    let scaled = (r * Rational::from_integer(scale.clone())).floor().to_integer();
    let negative = scaled.is_negative();
    let abs = scaled.abs();
    let (whole, frac) = abs.div_rem(&scale);
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    out.push_str(&whole.to_string());
    if digits > 0 {
        let f = frac.to_string();
        out.push('.');
        out.push_str(&"0".repeat(digits - f.len()));
        out.push_str(&f);
    }
    out
}

pub fn to_f64(r: &Rational) -> f64 {
    // Numerator and denominator may not fit in f64 individually.
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Least common multiple of the denominators of `values`.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Decides `log_base(arg) >= value` exactly, for `base >= 2`, `arg >= 1`.
pub fn log_at_least(base: u64, arg: &BigUint, value: &Rational) -> bool {
    // log_b(a) >= p/r  <=>  a^r >= b^p   (r > 0)
    let p = value.numer();
    let r = value
        .denom()
        .to_usize()
        .expect("denominator too large for an exact logarithm comparison");
    if p.is_negative() {
        return true;
    }
    let p = p.to_usize().expect("numerator too large for an exact logarithm comparison");
    num_traits::pow(arg.clone(), r) >= num_traits::pow(BigUint::from(base), p)
}

/// Decides `log_base(arg) <= value` exactly.
pub fn log_at_most(base: u64, arg: &BigUint, value: &Rational) -> bool {
    let p = value.numer();
    if p.is_negative() {
        return false;
    }
    let r = value
        .denom()
        .to_usize()
        .expect("denominator too large for an exact logarithm comparison");
    let p = p.to_usize().expect("numerator too large for an exact logarithm comparison");
    num_traits::pow(arg.clone(), r) <= num_traits::pow(BigUint::from(base), p)
}

/// `log_base(arg)` for an integer `arg >= 1`, kept symbolic.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct LogValue {
    pub base: u64,
    #[serde(with = "biguint_str")]
    pub arg: BigUint,
}

mod biguint_str {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};
    use std::str::FromStr;

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        BigUint::from_str(&s).map_err(serde::de::Error::custom)
    }
}

/// `(r, e)` with `x = r^e` and `e` maximal.
fn perfect_power(x: &BigUint) -> (BigUint, u32) {
    let bits = x.bits() as u32;
    for e in (2..=bits.max(2)).rev() {
        let r = x.nth_root(e);
        if r > BigUint::one() && &num_traits::pow(r.clone(), e as usize) == x {
            return (r, e);
        }
    }
    (x.clone(), 1)
}

impl LogValue {
    pub fn new(base: u64, arg: BigUint) -> Self {
        assert!(base >= 2, "logarithm base must be at least 2");
        assert!(!arg.is_zero(), "logarithm of zero");
        LogValue { base, arg }
    }

    pub fn from_u64(base: u64, arg: u64) -> Self {
        Self::new(base, BigUint::from(arg))
    }

    /// The exact value when it is rational, i.e. when `arg` and `base` are
    /// powers of a common integer.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.arg.is_one() {
            return Some(Rational::zero());
        }
        let (root, e) = perfect_power(&BigUint::from(self.base));
        let mut x = self.arg.clone();
        let mut k = 0u64;
        while (&x % &root).is_zero() {
            x /= &root;
            k += 1;
        }
        x.is_one()
            .then(|| Rational::new(BigInt::from(k), BigInt::from(e)))
    }

    pub fn to_f64(&self) -> f64 {
        // ln(arg) via the bit length keeps huge arguments finite.
        let bits = self.arg.bits();
        let shift = bits.saturating_sub(52);
        let top = (&self.arg >> shift).to_f64().unwrap_or(f64::MAX);
        (top.ln() + shift as f64 * std::f64::consts::LN_2) / (self.base as f64).ln()
    }

    pub fn at_least(&self, value: &Rational) -> bool {
        log_at_least(self.base, &self.arg, value)
    }

    pub fn at_most(&self, value: &Rational) -> bool {
        log_at_most(self.base, &self.arg, value)
    }
}

impl std::fmt::Display for LogValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.as_rational() {
            Some(r) => write!(f, "{r}"),
            None => write!(f, "log_{}({})", self.base, self.arg),
        }
    }
}

impl PartialOrd for LogValue {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        if self.base == other.base {
            Some(self.arg.cmp(&other.arg))
        } else {
            None
        }
    }
}

/// Serde adapter storing a rational as its `p/q` string.
pub mod serde_str {
    use super::{format_rational, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}
