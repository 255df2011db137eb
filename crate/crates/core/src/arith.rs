//! Exact p-adic valuations of rationals and log-radius bookkeeping.
//!
//! Every absolute value in this crate is carried as its base-p logarithm,
//! an exact rational, with a distinguished bottom element standing for
//! `|0| = 0`. Multiplication of absolute values is addition of logs and the
//! ultrametric maximum is the maximum of logs, so the algebra used here is
//! the max-plus semiring over `Q ∪ {bottom}`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"3"`, `"-7/4"` or a plain decimal such as `"0.25"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("not a rational number: `{s}`"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::InvalidInput(format!("zero denominator in `{s}`")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let neg = whole.trim_start().starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let q = Rational::new(n, d);
        return Ok(if neg { -q } else { q });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // numerator/denominator too large for a direct conversion
        let shift = q.numer().bits().max(q.denom().bits()) as i64 - 900;
        let n = (q.numer() >> shift.max(0) as usize).to_f64().unwrap_or(f64::NAN);
        let d = (q.denom() >> shift.max(0) as usize).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Formats an exact rational as `n` or `n/d`.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// A prime number `p ≥ 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if p < 2 {
            return Err(Error::InvalidParameter(format!("{p} is not a prime")));
        }
        let mut d = 2u64;
        while d * d <= p {
            if p.is_multiple_of(d) {
                return Err(Error::InvalidParameter(format!("{p} is not a prime")));
            }
            d += 1;
        }
        Ok(Prime(p))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn as_bigint(self) -> BigInt {
        BigInt::from(self.0)
    }

    /// `log_p |π| = -1/(p-1)` for Dwork's constant `π = p^{-1/(p-1)}`.
    pub fn log_pi(self) -> Rational {
        rat(-1, self.0 as i64 - 1)
    }

    /// Largest power `p^k` that fits in a `u64`, together with `k`.
    fn word_power(self) -> (u64, u32) {
        let mut pk = self.0;
        let mut k = 1;
        while let Some(next) = pk.checked_mul(self.0) {
            pk = next;
            k += 1;
        }
        (pk, k)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for Prime {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u64(self.0)
    }
}

pub fn log_pi(p: Prime) -> LogMagnitude {
    LogMagnitude::Finite(p.log_pi())
}

fn valuation_u64(mut n: u64, p: u64) -> u64 {
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// `v_p(n)` for a nonzero integer, `None` for zero.
pub fn valuation_int(n: &BigInt, p: Prime) -> Option<u64> {
    if n.is_zero() {
        return None;
    }
    if p.0 == 2 {
        return n.trailing_zeros();
    }
    let (pk, k) = p.word_power();
    let mut v = 0u64;
    let mut m = n.magnitude().clone();
    loop {
        let r = (&m % pk).to_u64().expect("remainder fits in a word");
        if r != 0 {
            // v_p(m) < k, so it is determined by m mod p^k
            return Some(v + valuation_u64(r, p.0));
        }
        m /= pk;
        v += k as u64;
    }
}

/// `v_p(a)` for a nonzero rational, `None` for zero.
pub fn valuation(a: &Rational, p: Prime) -> Option<i64> {
    let n = valuation_int(a.numer(), p)? as i64;
    let d = valuation_int(a.denom(), p).expect("denominator is nonzero") as i64;
    Some(n - d)
}

/// `log_p |a|_p`, i.e. `-v_p(a)`, or bottom for `a = 0`.
pub fn vp(a: &Rational, p: Prime) -> LogMagnitude {
    match valuation(a, p) {
        None => LogMagnitude::Bottom,
        Some(v) => LogMagnitude::Finite(int(-v)),
    }
}

/// Sum of the base-p digits of `n`.
pub fn digit_sum(mut n: u64, p: Prime) -> u64 {
    let mut s = 0;
    while n > 0 {
        s += n % p.0;
        n /= p.0;
    }
    s
}

/// `v_p(n!) = (n - s_p(n)) / (p - 1)` (Legendre).
pub fn factorial_valuation(n: u64, p: Prime) -> u64 {
    (n - digit_sum(n, p)) / (p.0 - 1)
}

/// The base-p logarithm of an absolute value, or bottom for zero.
///
/// The derived order puts `Bottom` below every finite value, which makes
/// `max` the ultrametric sum and `Bottom` its identity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LogMagnitude {
    Bottom,
    Finite(Rational),
}

impl LogMagnitude {
    pub fn zero() -> Self {
        LogMagnitude::Finite(Rational::zero())
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, LogMagnitude::Bottom)
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            LogMagnitude::Bottom => None,
            LogMagnitude::Finite(q) => Some(q),
        }
    }

    /// `⊕max`: the ultrametric bound for a sum.
    pub fn max_with(self, other: Self) -> Self {
        std::cmp::max(self, other)
    }

    /// `⊕mul`: log of a product.
    pub fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (LogMagnitude::Finite(a), LogMagnitude::Finite(b)) => LogMagnitude::Finite(a + b),
            _ => LogMagnitude::Bottom,
        }
    }

    /// Adds a finite shift (`|a| · p^shift`).
    pub fn shift(&self, by: &Rational) -> Self {
        match self {
            LogMagnitude::Bottom => LogMagnitude::Bottom,
            LogMagnitude::Finite(a) => LogMagnitude::Finite(a + by),
        }
    }

    /// Log of the `k`-th root, `k > 0`.
    pub fn root(&self, k: u64) -> Self {
        match self {
            LogMagnitude::Bottom => LogMagnitude::Bottom,
            LogMagnitude::Finite(a) => LogMagnitude::Finite(a / int(k as i64)),
        }
    }

    /// `None` for bottom.
    pub fn to_f64(&self) -> Option<f64> {
        self.finite().map(rational_to_f64)
    }
}

impl Add for LogMagnitude {
    type Output = LogMagnitude;

    fn add(self, rhs: Self) -> Self {
        self.mul(&rhs)
    }
}

impl fmt::Display for LogMagnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogMagnitude::Bottom => write!(f, "bottom"),
            LogMagnitude::Finite(q) => write!(f, "{}", format_rational(q)),
        }
    }
}

impl Serialize for LogMagnitude {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            LogMagnitude::Bottom => s.serialize_none(),
            LogMagnitude::Finite(q) => s.serialize_str(&format_rational(q)),
        }
    }
}

/// A reported log-value: exact in exact mode, a double in float mode.
#[derive(Debug, Clone, PartialEq)]
pub enum LogValue {
    Bottom,
    Exact(Rational),
    Float(f64),
}

impl LogValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            LogValue::Bottom => f64::NEG_INFINITY,
            LogValue::Exact(q) => rational_to_f64(q),
            LogValue::Float(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            LogValue::Exact(q) => Some(q),
            _ => None,
        }
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, LogValue::Bottom)
            || matches!(self, LogValue::Float(x) if *x == f64::NEG_INFINITY)
    }
}

impl fmt::Display for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogValue::Bottom => write!(f, "bottom"),
            LogValue::Exact(q) => write!(f, "{}", format_rational(q)),
            LogValue::Float(x) => write!(f, "{x}"),
        }
    }
}

impl From<LogMagnitude> for LogValue {
    fn from(m: LogMagnitude) -> Self {
        match m {
            LogMagnitude::Bottom => LogValue::Bottom,
            LogMagnitude::Finite(q) => LogValue::Exact(q),
        }
    }
}

/// Rounds to 12 decimal places so that printed reports are reproducible.
pub fn fixed(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    format!("{x:.12}").parse().unwrap_or(x)
}

impl Serialize for LogValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            LogValue::Bottom => s.serialize_none(),
            LogValue::Exact(q) => s.serialize_str(&format_rational(q)),
            LogValue::Float(x) if x.is_finite() => s.serialize_f64(fixed(*x)),
            LogValue::Float(_) => s.serialize_none(),
        }
    }
}

/// An open interval `(lo, hi)` of log-radii `ρ = log_p r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LogInterval {
    lo: Rational,
    hi: Rational,
}

impl LogInterval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        match lo.cmp(&hi) {
            Ordering::Less => Ok(LogInterval { lo, hi }),
            Ordering::Equal => Err(Error::InvalidInput(format!(
                "degenerate interval: both endpoints equal {}",
                format_rational(&lo)
            ))),
            Ordering::Greater => Err(Error::InvalidInput(format!(
                "interval endpoints out of order: {} > {}",
                format_rational(&lo),
                format_rational(&hi)
            ))),
        }
    }

    pub fn from_ints(lo: i64, hi: i64) -> Result<Self> {
        Self::new(int(lo), int(hi))
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / int(2)
    }

    pub fn contains(&self, rho: &Rational) -> bool {
        &self.lo < rho && rho < &self.hi
    }

    pub fn closure_contains(&self, rho: &Rational) -> bool {
        &self.lo <= rho && rho <= &self.hi
    }

    /// `count` equispaced interior points `lo + k·(hi-lo)/(count+1)`, `k = 1..=count`.
    pub fn grid(&self, count: usize) -> Vec<Rational> {
        let step = self.width() / int(count as i64 + 1);
        (1..=count as i64).map(|k| &self.lo + &step * int(k)).collect()
    }

    /// Image under `ρ ↦ factor·ρ` for a positive factor.
    pub fn scaled(&self, factor: &Rational) -> Self {
        assert!(factor.is_positive());
        LogInterval { lo: &self.lo * factor, hi: &self.hi * factor }
    }

    pub fn domain_error(&self, rho: &Rational) -> Error {
        Error::Domain { rho: format_rational(rho), domain: self.to_string() }
    }
}

impl fmt::Display for LogInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", format_rational(&self.lo), format_rational(&self.hi))
    }
}

impl Serialize for LogInterval {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [format_rational(&self.lo), format_rational(&self.hi)].serialize(s)
    }
}

/// Exact `log_p r` when `r` is a power of `p`.
pub fn exact_log(r: &Rational, p: Prime) -> Option<i64> {
    if !r.is_positive() {
        return None;
    }
    let k = valuation(r, p)?;
    let pk = Rational::from_integer(num_traits::pow(p.as_bigint(), k.unsigned_abs() as usize));
    let power = if k >= 0 { pk } else { pk.recip() };
    (&power == r).then_some(k)
}

/// `log_p r`: exact for powers of `p`, otherwise a rational rounded to
/// 12 significant digits.
pub fn log_radius(r: &Rational, p: Prime) -> Result<Rational> {
    if !r.is_positive() {
        return Err(Error::InvalidInput(format!("radius must be positive, got {}", format_rational(r))));
    }
    if let Some(k) = exact_log(r, p) {
        return Ok(int(k));
    }
    let x = rational_to_f64(r).ln() / (p.get() as f64).ln();
    Ok(round_significant(x, 12))
}

/// A rational with `digits` significant decimal digits of `x`.
pub fn round_significant(x: f64, digits: i32) -> Rational {
    if x == 0.0 || !x.is_finite() {
        return Rational::zero();
    }
    let exp = digits - 1 - x.abs().log10().floor() as i32;
    let scale = num_traits::pow(BigInt::from(10), exp.unsigned_abs() as usize);
    let mantissa = (x * 10f64.powi(exp)).round();
    let m = BigInt::from(mantissa as i64);
    if exp >= 0 {
        Rational::new(m, scale)
    } else {
        Rational::from_integer(m * scale)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn vp_examples() {
        assert_eq!(vp(&int(0), p(2)), LogMagnitude::Bottom);
        assert_eq!(vp(&int(12), p(2)), LogMagnitude::Finite(int(-2)));
        assert_eq!(vp(&rat(5, 6), p(3)), LogMagnitude::Finite(int(1)));
    }

    #[test]
    fn log_pi_examples() {
        assert_eq!(log_pi(p(2)), LogMagnitude::Finite(int(-1)));
        assert_eq!(log_pi(p(3)), LogMagnitude::Finite(rat(-1, 2)));
        assert_eq!(log_pi(p(5)), LogMagnitude::Finite(rat(-1, 4)));
    }

    #[test]
    fn rejects_composites() {
        assert!(Prime::new(1).is_err());
        assert!(Prime::new(9).is_err());
        assert!(Prime::new(7).is_ok());
    }

    #[test]
    fn large_valuations() {
        let big = num_traits::pow(BigInt::from(3), 200) * BigInt::from(14);
        assert_eq!(valuation_int(&big, p(3)), Some(200));
        let big = num_traits::pow(BigInt::from(2), 345) * BigInt::from(-7);
        assert_eq!(valuation_int(&big, p(2)), Some(345));
    }

    #[test]
    fn legendre_matches_direct_factorial() {
        for prime in [2, 3, 5] {
            let pr = p(prime);
            let mut fact = BigInt::one();
            for n in 1..=40u64 {
                fact *= BigInt::from(n);
                assert_eq!(valuation_int(&fact, pr).unwrap(), factorial_valuation(n, pr));
            }
        }
    }

    #[test]
    fn bottom_is_absorbing_and_max_identity() {
        let a = LogMagnitude::Finite(rat(3, 2));
        assert_eq!(a.mul(&LogMagnitude::Bottom), LogMagnitude::Bottom);
        assert_eq!(a.clone().max_with(LogMagnitude::Bottom), a);
        assert_eq!(a.mul(&LogMagnitude::zero()), a);
    }

    #[test]
    fn intervals() {
        assert!(LogInterval::from_ints(1, 1).is_err());
        assert!(LogInterval::from_ints(2, 1).is_err());
        let i = LogInterval::from_ints(-2, 2).unwrap();
        assert_eq!(i.grid(3), vec![int(-1), int(0), int(1)]);
        assert!(!i.contains(&int(2)));
        assert!(i.closure_contains(&int(2)));
    }

    #[test]
    fn radius_conversion() {
        assert_eq!(log_radius(&rat(1, 8), p(2)).unwrap(), int(-3));
        assert_eq!(log_radius(&int(9), p(3)).unwrap(), int(2));
        let approx = log_radius(&int(3), p(2)).unwrap();
        assert!((rational_to_f64(&approx) - 3f64.log2()).abs() < 1e-11);
        assert!(log_radius(&int(0), p(2)).is_err());
    }

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational("-7/4").unwrap(), rat(-7, 4));
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), rat(-3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-10_000i64..10_000, 1i64..10_000).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn ultrametric_soundness(a in small_rational(), b in small_rational(), pi in 0usize..3) {
            let pr = p([2, 3, 5][pi]);
            prop_assert_eq!(vp(&(&a * &b), pr), vp(&a, pr).mul(&vp(&b, pr)));
            let (va, vb) = (vp(&a, pr), vp(&b, pr));
            let vs = vp(&(&a + &b), pr);
            prop_assert!(vs <= va.clone().max_with(vb.clone()));
            if va != vb {
                prop_assert_eq!(vs, va.max_with(vb));
            }
        }

        #[test]
        fn log_mul_is_commutative_monoid(a in small_rational(), b in small_rational(), c in small_rational()) {
            let pr = p(3);
            let (x, y, z) = (vp(&a, pr), vp(&b, pr), vp(&c, pr));
            prop_assert_eq!(x.mul(&y), y.mul(&x));
            prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        }
    }
}
