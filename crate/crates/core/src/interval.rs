//! Rational interval arithmetic and certified natural logarithms.
//!
//! Endpoints are exact rationals. Transcendental results are rounded
//! outward to dyadic endpoints so sizes stay bounded.

use crate::rational::{from_usize, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "crate::rational::serde_str")]
    pub lo: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi }
    }

    pub fn point(x: Rational) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn zero() -> Self {
        Self::point(Rational::zero())
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rational {
        (&self.lo + &self.hi) / from_usize(2)
    }

    /// Larger distance from `x` to an endpoint.
    pub fn radius_about(&self, x: &Rational) -> Rational {
        let a = (x - &self.lo).abs();
        let b = (&self.hi - x).abs();
        a.max(b)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let (a, b) = (&self.lo * k, &self.hi * k);
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    /// `self / other`; `other` must not contain zero.
    pub fn div(&self, other: &Interval) -> Self {
        assert!(
            other.lo.is_positive() || other.hi.is_negative(),
            "interval division by an interval containing zero"
        );
        let c = [
            &self.lo / &other.lo,
            &self.lo / &other.hi,
            &self.hi / &other.lo,
            &self.hi / &other.hi,
        ];
        Self::hull(&c)
    }

    fn hull(c: &[Rational]) -> Self {
        let lo = c.iter().min().expect("nonempty").clone();
        let hi = c.iter().max().expect("nonempty").clone();
        Interval { lo, hi }
    }

    /// Outward rounding to multiples of `2^-bits`.
    pub fn round_out(&self, bits: usize) -> Self {
        Interval {
            lo: round_dyadic(&self.lo, bits, false),
            hi: round_dyadic(&self.hi, bits, true),
        }
    }

    pub fn clamp(&self, lo: &Rational, hi: &Rational) -> Self {
        let c = |x: &Rational| x.clone().max(lo.clone()).min(hi.clone());
        Interval {
            lo: c(&self.lo),
            hi: c(&self.hi),
        }
    }
}

/// `x` rounded to a multiple of `2^-bits`, upward when `up`.
pub fn round_dyadic(x: &Rational, bits: usize, up: bool) -> Rational {
    let scale = BigInt::one() << bits;
    let scaled = x * Rational::from_integer(scale.clone());
    let r = if up { scaled.ceil() } else { scaled.floor() };
    Rational::new(r.to_integer(), scale)
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, o: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, o: &Interval) -> Interval {
        Interval {
            lo: &self.lo - &o.hi,
            hi: &self.hi - &o.lo,
        }
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }
}

impl Mul for &Interval {
    type Output = Interval;
    fn mul(self, o: &Interval) -> Interval {
        Interval::hull(&[
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ])
    }
}

/// Working precision in bits for `digits` decimal digits.
pub fn bits_for_digits(digits: usize) -> usize {
    // log2(10) < 3.3220
    (digits * 33220).div_ceil(10000) + 32
}

/// `2·atanh(t) = ln((1+t)/(1-t))` for `|t| <= 1/3`, enclosed with the
/// geometric tail bound.
fn two_atanh(t: &Rational, bits: usize) -> Interval {
    assert!(t.abs() <= Rational::new(1.into(), 3.into()));
    let eps = Rational::new(BigInt::one(), BigInt::one() << (bits + 2));
    let t2 = t * t;
    let mut power = t.clone();
    let mut sum = Rational::zero();
    let mut k = 0usize;
    loop {
        let term = &power / from_usize(2 * k + 1);
        sum += &term;
        power = round_toward_zero(&(&power * &t2), bits + 16);
        k += 1;
        // tail after this term: |t|^(2k+1) / ((2k+1)(1 - t^2)), doubled below
        let tail = power.abs() / (from_usize(2 * k + 1) * (Rational::one() - &t2));
        if tail < eps {
            let two = from_usize(2);
            // Each truncation adds at most 2^-(bits+16) to a power, damped by
            // t^2 <= 1/9 afterwards, so every power is off by at most
            // 9/8 of that; the tail estimate inherits the same error.
            let drift = Rational::new(BigInt::from(2 * (k + 2)), BigInt::one() << (bits + 16));
            let slack = &tail + &drift;
            let iv = Interval::new(&sum - &slack, &sum + &slack);
            return iv.scale(&two).round_out(bits);
        }
    }
}

fn round_toward_zero(x: &Rational, bits: usize) -> Rational {
    round_dyadic(x, bits, x.is_negative())
}

pub fn ln2(bits: usize) -> Interval {
    two_atanh(&Rational::new(1.into(), 3.into()), bits)
}

/// Certified enclosure of `ln x` for rational `x > 0`.
pub fn ln(x: &Rational, bits: usize) -> Interval {
    assert!(x.is_positive(), "ln of a non-positive number");
    if x.is_one() {
        return Interval::zero();
    }
    // x = 2^k y with y in [2/3, 4/3]
    let mut k: i64 = x.numer().bits() as i64 - x.denom().bits() as i64;
    let pow2 = |e: i64| -> Rational {
        if e >= 0 {
            Rational::from_integer(BigInt::one() << e as usize)
        } else {
            Rational::new(BigInt::one(), BigInt::one() << (-e) as usize)
        }
    };
    let mut y = x / pow2(k);
    let lo = Rational::new(2.into(), 3.into());
    let hi = Rational::new(4.into(), 3.into());
    while y > hi {
        y /= from_usize(2);
        k += 1;
    }
    while y < lo {
        y *= from_usize(2);
        k -= 1;
    }
    let t = (&y - Rational::one()) / (&y + Rational::one());
    let extra = 64 - (k.unsigned_abs().max(1)).leading_zeros() as usize;
    let core = two_atanh(&t, bits + extra);
    let shift = ln2(bits + extra).scale(&Rational::from_integer(BigInt::from(k)));
    (&core + &shift).round_out(bits)
}
