//! Bounds on storage capacity when each vertex only needs to recover its
//! symbol up to a failure fraction `δ`.
//!
//! The coding rate `R_q(δ)` is unknown in general, so the LP upper bound
//! is evaluated at several standard upper bounds on it (Singleton, Plotkin,
//! Hamming) and the lower bound comes from the generalised clique packing.
//! Transcendental quantities are carried as certified enclosures.

use crate::clique_packing::{fcc, fcc_delta, PackingError};
use crate::entropy::info_lp::{partial_info_lp_bound, InfoLpError, LpMode};
use crate::graph::Graph;
use crate::interval::{bits_for_digits, ln, round_dyadic, Interval};
use crate::rational::{self, from_usize, to_decimal, Rational};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Mutex;
use thiserror::Error;

/// Decimal digits used for `h_q` unless a caller asks otherwise.
pub const DEFAULT_DIGITS: usize = 40;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PartialError {
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("closed forms need an odd cycle; n = {0} is even")]
    EvenCycle(usize),
    #[error(transparent)]
    InfoLp(#[from] InfoLpError),
    #[error(transparent)]
    Packing(Box<PackingError>),
}

impl From<PackingError> for PartialError {
    fn from(e: PackingError) -> Self {
        PartialError::Packing(Box::new(e))
    }
}

fn check_q(q: u64) -> Result<(), PartialError> {
    if q < 2 {
        return Err(PartialError::DomainError(format!("alphabet size q = {q} must be at least 2")));
    }
    Ok(())
}

fn check_unit(name: &str, x: &Rational) -> Result<(), PartialError> {
    if x.is_negative() || x > &Rational::one() {
        return Err(PartialError::DomainError(format!("{name} = {x} outside [0, 1]")));
    }
    Ok(())
}

/// `1 - 1/q`.
pub fn plotkin_threshold(q: u64) -> Rational {
    Rational::one() - Rational::new(1.into(), q.into())
}

/// Enclosure of the `q`-ary entropy
/// `h_q(x) = x log_q(q-1) - x log_q x - (1-x) log_q(1-x)`, of width below
/// `10^-digits`. Exact at `x = 0`, at `x = 1 - 1/q`, and at `x = 1` for
/// `q = 2`.
pub fn entropy_hq(q: u64, x: &Rational, digits: usize) -> Result<Interval, PartialError> {
    check_q(q)?;
    check_unit("x", x)?;
    if x.is_zero() {
        return Ok(Interval::zero());
    }
    if x == &plotkin_threshold(q) {
        return Ok(Interval::point(Rational::one()));
    }
    if x.is_one() && q == 2 {
        return Ok(Interval::zero());
    }
    let bits = bits_for_digits(digits) + 8;
    let qm1 = Rational::from_integer((q - 1).into());
    let mut num = ln(&qm1, bits).scale(x);
    num = &num - &ln(x, bits).scale(x);
    let y = Rational::one() - x;
    if !y.is_zero() {
        num = &num - &ln(&y, bits).scale(&y);
    }
    let lnq = ln(&Rational::from_integer(q.into()), bits);
    Ok(num
        .div(&lnq)
        .round_out(bits)
        .clamp(&Rational::zero(), &Rational::one()))
}

/// Standard bounds on the coding rate `R_q(δ)`, each clamped to `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RateBoundModel {
    pub q: u64,
    pub digits: usize,
}

/// Named upper bounds on `R_q(δ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UpperModel {
    Singleton,
    Plotkin,
    Hamming,
}

impl UpperModel {
    pub const ALL: [UpperModel; 3] = [UpperModel::Singleton, UpperModel::Plotkin, UpperModel::Hamming];

    pub fn name(self) -> &'static str {
        match self {
            UpperModel::Singleton => "singleton",
            UpperModel::Plotkin => "plotkin",
            UpperModel::Hamming => "hamming",
        }
    }
}

impl RateBoundModel {
    pub fn new(q: u64) -> Self {
        RateBoundModel { q, digits: DEFAULT_DIGITS }
    }

    fn unit(iv: Interval) -> Interval {
        iv.clamp(&Rational::zero(), &Rational::one())
    }

    /// Gilbert–Varshamov lower bound `1 - h_q(δ)`, zero past `1 - 1/q`.
    pub fn gv_lower(&self, delta: &Rational) -> Result<Interval, PartialError> {
        check_unit("delta", delta)?;
        if delta >= &plotkin_threshold(self.q) {
            return Ok(Interval::zero());
        }
        let h = entropy_hq(self.q, delta, self.digits)?;
        Ok(Self::unit(&Interval::point(Rational::one()) - &h))
    }

    /// `1 - δ`.
    pub fn singleton(&self, delta: &Rational) -> Result<Interval, PartialError> {
        check_unit("delta", delta)?;
        Ok(Interval::point(Rational::one() - delta))
    }

    /// `max(0, 1 - δ q/(q-1))`.
    pub fn plotkin(&self, delta: &Rational) -> Result<Interval, PartialError> {
        check_unit("delta", delta)?;
        let q = Rational::from_integer(self.q.into());
        let r = Rational::one() - delta * &q / (q - Rational::one());
        Ok(Interval::point(r.max(Rational::zero())))
    }

    /// `1 - h_q(δ/2)`.
    pub fn hamming(&self, delta: &Rational) -> Result<Interval, PartialError> {
        check_unit("delta", delta)?;
        let h = entropy_hq(self.q, &(delta / from_usize(2)), self.digits)?;
        Ok(Self::unit(&Interval::point(Rational::one()) - &h))
    }

    pub fn upper(&self, model: UpperModel, delta: &Rational) -> Result<Interval, PartialError> {
        match model {
            UpperModel::Singleton => self.singleton(delta),
            UpperModel::Plotkin => self.plotkin(delta),
            UpperModel::Hamming => self.hamming(delta),
        }
    }

    /// Upper bound actually used for `R_q(δ)`: the model's value below
    /// `1 - 1/q` and zero from there on, where the rate vanishes.
    pub fn effective_upper(&self, model: UpperModel, delta: &Rational) -> Result<Interval, PartialError> {
        if delta >= &plotkin_threshold(self.q) {
            check_unit("delta", delta)?;
            return Ok(Interval::zero());
        }
        self.upper(model, delta)
    }
}

/// A value with an absolute error bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Approx {
    #[serde(with = "rational::serde_str")]
    pub value: Rational,
    #[serde(with = "rational::serde_str")]
    pub error: Rational,
}

impl Approx {
    pub fn exact(value: Rational) -> Self {
        Approx { value, error: Rational::zero() }
    }

    pub fn lo(&self) -> Rational {
        &self.value - &self.error
    }

    pub fn hi(&self) -> Rational {
        &self.value + &self.error
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LowerSource {
    /// `δ = 0`: every vertex stores its own symbol.
    Trivial,
    FccDelta,
    Fcc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpperEntry {
    pub model: UpperModel,
    /// Enclosure of the rate bound at `δ`.
    pub rate: Interval,
    /// Dyadic rate fed to the LP.
    #[serde(with = "rational::serde_str")]
    pub rate_used: Rational,
    /// LP optimum; `error` covers the gap between `rate_used` and `rate`.
    pub bound: Approx,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedFormEntry {
    pub model: UpperModel,
    pub lower: Interval,
    pub upper: Interval,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialCapacityReport {
    #[serde(with = "rational::serde_str")]
    pub delta: Rational,
    pub q: u64,
    pub n: usize,
    pub collapsed: bool,
    pub lower: Approx,
    pub lower_source: LowerSource,
    pub uppers: Vec<UpperEntry>,
    /// LP value at the Gilbert–Varshamov rate: the upper bound that would
    /// hold if that rate were tight.
    pub gv_conditional_upper: Approx,
    pub odd_cycle: Option<Vec<ClosedFormEntry>>,
}

impl PartialCapacityReport {
    pub fn upper(&self, model: UpperModel) -> Option<&UpperEntry> {
        self.uppers.iter().find(|u| u.model == model)
    }

    /// Tightest upper bound, as its certified top end.
    pub fn best_upper(&self) -> Rational {
        self.uppers
            .iter()
            .map(|u| u.bound.hi())
            .min()
            .unwrap_or_else(|| from_usize(self.n))
    }

    /// Lower enclosure does not exceed any upper enclosure.
    pub fn consistent(&self) -> bool {
        let lo = self.lower.lo();
        self.uppers.iter().all(|u| lo <= u.bound.hi())
    }

    /// Gap between the tightest upper bound and the lower bound.
    pub fn gap(&self) -> Rational {
        self.best_upper() - self.lower.value.clone()
    }
}

/// Evaluates the partial-failure LP at dyadic rates, caching by rate.
pub struct PartialLp<'g> {
    g: &'g Graph,
    bits: usize,
    cache: Mutex<BTreeMap<Rational, Rational>>,
}

impl<'g> PartialLp<'g> {
    pub fn new(g: &'g Graph, digits: usize) -> Self {
        PartialLp {
            g,
            bits: bits_for_digits(digits),
            cache: Mutex::new(BTreeMap::new()),
        }
    }

    fn value_at(&self, rate: &Rational) -> Result<Rational, PartialError> {
        if let Some(v) = self.cache.lock().expect("cache lock").get(rate) {
            return Ok(v.clone());
        }
        let v = partial_info_lp_bound(self.g, rate, &LpMode::Full)?;
        self.cache.lock().expect("cache lock").insert(rate.clone(), v.clone());
        Ok(v)
    }

    /// LP bound for a rate enclosure. The LP value moves by at most `n`
    /// per unit of rate, which bounds the error from using the midpoint.
    pub fn evaluate(&self, rate: &Interval) -> Result<(Rational, Approx), PartialError> {
        let used = if rate.width().is_zero() {
            rate.lo.clone()
        } else {
            round_dyadic(&rate.mid(), self.bits, false)
        };
        let value = self.value_at(&used)?;
        let error = rate.radius_about(&used) * from_usize(self.g.n());
        Ok((used, Approx { value, error }))
    }
}

/// Connected, 2-regular, odd order.
pub fn is_odd_cycle(g: &Graph) -> bool {
    g.n() >= 3 && g.n() % 2 == 1 && (0..g.n()).all(|v| g.degree(v) == 2) && g.is_connected()
}

/// Lower and upper bounds for the `δ`-partial capacity of `g` over an
/// alphabet of size `q`.
pub fn partial_bounds(g: &Graph, q: u64, delta: &Rational) -> Result<PartialCapacityReport, PartialError> {
    partial_bounds_with(g, &RateBoundModel::new(q), delta, &PartialLp::new(g, DEFAULT_DIGITS))
}

pub fn partial_bounds_with(
    g: &Graph,
    model: &RateBoundModel,
    delta: &Rational,
    lp: &PartialLp<'_>,
) -> Result<PartialCapacityReport, PartialError> {
    let q = model.q;
    check_q(q)?;
    check_unit("delta", delta)?;
    let n = g.n();
    let threshold = plotkin_threshold(q);
    let collapsed = delta >= &threshold;
    let odd_cycle = if is_odd_cycle(g) {
        Some(
            UpperModel::ALL
                .iter()
                .map(|&m| odd_cycle_closed_forms(n, q, delta, model, m))
                .collect::<Result<Vec<_>, _>>()?,
        )
    } else {
        None
    };

    if delta.is_zero() {
        let full = Approx::exact(from_usize(n));
        let uppers = UpperModel::ALL
            .iter()
            .map(|&m| UpperEntry {
                model: m,
                rate: Interval::point(Rational::one()),
                rate_used: Rational::one(),
                bound: full.clone(),
            })
            .collect();
        return Ok(PartialCapacityReport {
            delta: delta.clone(),
            q,
            n,
            collapsed,
            lower: full.clone(),
            lower_source: LowerSource::Trivial,
            uppers,
            gv_conditional_upper: full,
            odd_cycle,
        });
    }

    let (lower, lower_source) = if delta <= &threshold {
        let p = fcc_delta(g, q, delta, model.digits)?;
        let error = p.error_bound.clone().unwrap_or_else(Rational::zero);
        (Approx { value: p.value, error }, LowerSource::FccDelta)
    } else {
        (Approx::exact(fcc(g)?.value), LowerSource::Fcc)
    };

    let mut uppers = Vec::with_capacity(UpperModel::ALL.len());
    for m in UpperModel::ALL {
        let rate = model.effective_upper(m, delta)?;
        let (rate_used, bound) = lp.evaluate(&rate)?;
        uppers.push(UpperEntry { model: m, rate, rate_used, bound });
    }
    let (_, gv_conditional_upper) = lp.evaluate(&model.gv_lower(delta)?)?;

    Ok(PartialCapacityReport {
        delta: delta.clone(),
        q,
        n,
        collapsed,
        lower,
        lower_source,
        uppers,
        gv_conditional_upper,
        odd_cycle,
    })
}

/// Closed forms for the odd cycle `C_n`: lower `n/2 (2 - h_q(δ))` for
/// `δ <= 1 - 1/q` (else `n/2`) and upper `n/2 (1 + R)` with `R` the
/// chosen rate upper bound.
pub fn odd_cycle_closed_forms(
    n: usize,
    q: u64,
    delta: &Rational,
    model: &RateBoundModel,
    which: UpperModel,
) -> Result<ClosedFormEntry, PartialError> {
    if n % 2 == 0 {
        return Err(PartialError::EvenCycle(n));
    }
    if n < 3 {
        return Err(PartialError::DomainError(format!("cycle length {n} below 3")));
    }
    check_q(q)?;
    check_unit("delta", delta)?;
    let model = RateBoundModel { q, ..*model };
    let half = from_usize(n) / from_usize(2);
    let two_minus_h = if delta <= &plotkin_threshold(q) {
        &Interval::point(from_usize(2)) - &entropy_hq(q, delta, model.digits)?
    } else {
        Interval::point(Rational::one())
    };
    let rate = model.effective_upper(which, delta)?;
    Ok(ClosedFormEntry {
        model: which,
        lower: two_minus_h.scale(&half),
        upper: (&Interval::point(Rational::one()) + &rate).scale(&half),
    })
}

/// `δ = k/(points-1)` for `k = 0..points`.
pub fn delta_grid(points: usize) -> Vec<Rational> {
    assert!(points >= 2, "a grid needs at least two points");
    (0..points)
        .map(|k| Rational::new(k.into(), (points - 1).into()))
        .collect()
}

/// Reports along a `δ` grid, computed in parallel with a shared LP cache.
pub fn sweep(g: &Graph, q: u64, deltas: &[Rational], digits: usize) -> Result<Vec<PartialCapacityReport>, PartialError> {
    let model = RateBoundModel { q, digits };
    let lp = PartialLp::new(g, digits);
    deltas
        .par_iter()
        .map(|d| partial_bounds_with(g, &model, d, &lp))
        .collect()
}

pub const CSV_HEADER: &str = "delta,lower,upper_singleton,upper_plotkin,upper_hamming,collapsed";

/// CSV rows with values rendered to `digits` decimal places.
pub fn sweep_csv(reports: &[PartialCapacityReport], digits: usize) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in reports {
        let cell = |m: UpperModel| {
            r.upper(m)
                .map(|u| to_decimal(&u.bound.value, digits))
                .unwrap_or_default()
        };
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.delta,
            to_decimal(&r.lower.value, digits),
            cell(UpperModel::Singleton),
            cell(UpperModel::Plotkin),
            cell(UpperModel::Hamming),
            r.collapsed
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::*;
    use crate::rational::{parse_rational, rat, to_f64};

    fn close(iv: &Interval, x: f64, tol: f64) -> bool {
        (to_f64(&iv.lo) - x).abs() < tol && (to_f64(&iv.hi) - x).abs() < tol
    }

    #[test]
    fn entropy_special_points() {
        assert_eq!(entropy_hq(2, &rat(1, 2), 40).unwrap(), Interval::point(Rational::one()));
        assert_eq!(entropy_hq(3, &rat(2, 3), 40).unwrap(), Interval::point(Rational::one()));
        assert_eq!(entropy_hq(2, &Rational::zero(), 40).unwrap(), Interval::zero());
        assert_eq!(entropy_hq(2, &Rational::one(), 40).unwrap(), Interval::zero());
        // h_3(1) = log_3 2
        assert!(close(&entropy_hq(3, &Rational::one(), 30).unwrap(), 2f64.ln() / 3f64.ln(), 1e-15));
        assert!(entropy_hq(2, &rat(3, 2), 40).is_err());
        assert!(entropy_hq(1, &rat(1, 2), 40).is_err());
    }

    #[test]
    fn entropy_binary_tenth() {
        let iv = entropy_hq(2, &rat(1, 10), 40).unwrap();
        // 50-digit reference from an independent multiprecision evaluation.
        let reference = parse_rational("0.46899559358928122125358933038332046009716545917811").unwrap();
        let tol = Rational::new(1.into(), num_traits::pow(num_bigint::BigInt::from(10), 45));
        assert!(iv.lo <= &reference + &tol && &reference - &tol <= iv.hi);
        // Second formula in floats: -(x ln x + (1-x) ln(1-x)) / ln 2.
        let x: f64 = 0.1;
        let f = -(x * x.ln() + (1.0 - x) * (1.0 - x).ln()) / 2f64.ln();
        assert!(close(&iv, f, 1e-15));
    }

    #[test]
    fn entropy_width_meets_digits() {
        let ten40 = Rational::new(1.into(), num_traits::pow(num_bigint::BigInt::from(10), 40));
        for (q, p, d) in [(2u64, 1i64, 3i64), (3, 1, 7), (5, 3, 4), (2, 9, 10)] {
            let iv = entropy_hq(q, &rat(p, d), 40).unwrap();
            assert!(iv.width() < ten40, "q={q} x={p}/{d}");
        }
    }

    #[test]
    fn rate_models() {
        let m = RateBoundModel::new(2);
        let d = rat(1, 10);
        assert_eq!(m.singleton(&d).unwrap(), Interval::point(rat(9, 10)));
        assert_eq!(m.plotkin(&d).unwrap(), Interval::point(rat(4, 5)));
        assert_eq!(m.plotkin(&rat(3, 4)).unwrap(), Interval::zero());
        let gv = m.gv_lower(&d).unwrap();
        for um in UpperModel::ALL {
            assert!(gv.hi <= m.upper(um, &d).unwrap().lo);
        }
    }

    #[test]
    fn delta_zero_is_full() {
        for g in [cycle(5), complete(4), path(4)] {
            let r = partial_bounds(&g, 2, &Rational::zero()).unwrap();
            assert_eq!(r.lower.value, from_usize(g.n()));
            assert_eq!(r.best_upper(), from_usize(g.n()));
        }
    }

    #[test]
    fn collapse_on_c5() {
        let r = partial_bounds(&cycle(5), 2, &rat(1, 2)).unwrap();
        assert!(r.collapsed);
        assert_eq!(r.lower.value, rat(5, 2));
        for u in &r.uppers {
            assert_eq!(u.bound, Approx::exact(rat(5, 2)));
        }
    }

    #[test]
    fn c5_tenth() {
        let r = partial_bounds(&cycle(5), 2, &rat(1, 10)).unwrap();
        assert!((to_f64(&r.lower.value) - 3.827511016026797).abs() < 1e-12);
        let singleton = r.upper(UpperModel::Singleton).unwrap();
        assert_eq!(singleton.bound.value, rat(19, 4));
        let h05 = 0.2863969571159562;
        let hamming = r.upper(UpperModel::Hamming).unwrap();
        assert!((to_f64(&hamming.bound.value) - 2.5 * (2.0 - h05)).abs() < 1e-12);
        assert!(r.consistent());
    }

    #[test]
    fn odd_cycle_forms() {
        let m = RateBoundModel::new(2);
        let c = odd_cycle_closed_forms(5, 2, &Rational::zero(), &m, UpperModel::Hamming).unwrap();
        assert_eq!(c.lower, Interval::point(from_usize(5)));
        assert_eq!(c.upper, Interval::point(from_usize(5)));
        let c = odd_cycle_closed_forms(5, 2, &rat(3, 5), &m, UpperModel::Plotkin).unwrap();
        assert_eq!(c.upper, Interval::point(rat(5, 2)));
        assert_eq!(
            odd_cycle_closed_forms(6, 2, &rat(1, 5), &m, UpperModel::Plotkin),
            Err(PartialError::EvenCycle(6))
        );
    }

    #[test]
    fn csv_shape() {
        let g = cycle(5);
        let reports = sweep(&g, 2, &delta_grid(5), 20).unwrap();
        let csv = sweep_csv(&reports, 6);
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 6);
        assert!(lines[1].starts_with("0,5.000000,5.000000"));
        assert!(lines[5].ends_with("true"));
    }
}
