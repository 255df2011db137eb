use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::arith::{LogInterval, LogMagnitude, Prime, Rational};
use crate::error::{Error, Result};

use super::newton::distinct_root_log_magnitudes;
use super::poly::{write_poly, LaurentPoly};

type Poly = LaurentPoly<Rational>;

/// A quotient `num/den` of Laurent polynomials over `Q`.
///
/// Arithmetic keeps results in lowest terms with `den` an ordinary monic
/// polynomial with nonzero constant term, but values built with
/// [`RationalFunction::new_unreduced`] may be in any form; equality is
/// decided by cross-multiplication either way.
#[derive(Clone)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        Ok(Self::new_unreduced(num, den)?.reduced())
    }

    pub fn new_unreduced(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        Ok(RationalFunction { num, den })
    }

    pub fn from_poly(num: Poly) -> Self {
        RationalFunction { num, den: Poly::one() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn x() -> Self {
        Self::from_poly(Poly::x())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.support_len() == 1
    }

    /// Lowest terms: cancels the polynomial gcd and moves monomials and the
    /// leading coefficient of the denominator into the numerator.
    pub fn reduced(&self) -> Self {
        if self.num.is_zero() {
            return Self::zero();
        }
        let g = self.num.gcd(&self.den);
        let num = self.num.exact_div(&g).expect("gcd divides numerator");
        let den = self.den.exact_div(&g).expect("gcd divides denominator");
        let shift = den.low().unwrap();
        let lead = den.leading().unwrap();
        let inv = lead.recip();
        RationalFunction { num: num.shift(-shift).scale(&inv), den: den.shift(-shift).scale(&inv) }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::InvalidInput("reciprocal of zero".into()));
        }
        Ok(RationalFunction { num: self.den.clone(), den: self.num.clone() }.reduced())
    }

    pub fn derivative(&self) -> Self {
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        RationalFunction { num, den: &self.den * &self.den }.reduced()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        RationalFunction { num: self.num.scale(c), den: self.den.clone() }.reduced()
    }

    /// `f(x^k)`.
    pub fn compose_power(&self, k: u64) -> Self {
        RationalFunction { num: self.num.compose_power(k), den: self.den.compose_power(k) }.reduced()
    }

    /// `log_p |f|_r = log_p |num|_r - log_p |den|_r` by multiplicativity.
    pub fn gauss_norm(&self, rho: &Rational, p: Prime) -> Result<LogMagnitude> {
        let d = self.den.gauss_norm(rho, p);
        let Some(d) = d.finite().cloned() else {
            return Err(Error::InvalidInput("zero denominator".into()));
        };
        Ok(self.num.gauss_norm(rho, p).shift(&-d))
    }

    /// Log-magnitudes of the (nonzero) poles, after reduction.
    pub fn pole_log_magnitudes(&self, p: Prime) -> Vec<Rational> {
        distinct_root_log_magnitudes(self.reduced().den(), p)
    }

    /// Log-magnitudes of the nonzero zeros, after reduction.
    pub fn zero_log_magnitudes(&self, p: Prime) -> Vec<Rational> {
        distinct_root_log_magnitudes(self.reduced().num(), p)
    }

    /// No pole of absolute value `p^ρ` with `ρ ∈ I` (open interval).
    pub fn pole_free_on(&self, interval: &LogInterval, p: Prime) -> bool {
        !self.pole_log_magnitudes(p).iter().any(|m| interval.contains(m))
    }

    /// No pole with log-magnitude in the closed interval `[lo, hi]`.
    pub fn pole_free_on_closed(&self, lo: &Rational, hi: &Rational, p: Prime) -> bool {
        !self.pole_log_magnitudes(p).iter().any(|m| lo <= m && m <= hi)
    }

    /// Writes the function in the parser grammar using `var` as the variable.
    pub fn to_string_with(&self, var: &str) -> String {
        let mut num = String::new();
        let mut den = String::new();
        write_poly(&mut num, &self.num, var).unwrap();
        if self.den == Poly::one() {
            return num;
        }
        write_poly(&mut den, &self.den, var).unwrap();
        format!("({num})/({den})")
    }

    fn combine(&self, other: &Self, subtract: bool) -> Self {
        if self.den == other.den {
            let num = if subtract { &self.num - &other.num } else { &self.num + &other.num };
            return RationalFunction { num, den: self.den.clone() }.reduced();
        }
        let a = &self.num * &other.den;
        let b = &other.num * &self.den;
        let num = if subtract { &a - &b } else { &a + &b };
        RationalFunction { num, den: &self.den * &other.den }.reduced()
    }
}

/// Division that reports a zero divisor instead of panicking.
pub fn checked_div(a: &RationalFunction, b: &RationalFunction) -> Result<RationalFunction> {
    Ok(a * &b.recip()?)
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for RationalFunction {}

impl Zero for RationalFunction {
    fn zero() -> Self {
        RationalFunction::zero()
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RationalFunction {
    fn one() -> Self {
        RationalFunction::one()
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;

    fn add(self, rhs: Self) -> RationalFunction {
        self.combine(rhs, false)
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;

    fn sub(self, rhs: Self) -> RationalFunction {
        self.combine(rhs, true)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;

    fn mul(self, rhs: Self) -> RationalFunction {
        RationalFunction { num: &self.num * &rhs.num, den: &self.den * &rhs.den }.reduced()
    }
}

/// Panics on a zero divisor; see [`checked_div`].
impl Div for &RationalFunction {
    type Output = RationalFunction;

    fn div(self, rhs: Self) -> RationalFunction {
        checked_div(self, rhs).expect("division by zero rational function")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;

    fn neg(self) -> RationalFunction {
        RationalFunction { num: -self.num.clone(), den: self.den.clone() }
    }
}

impl Add for RationalFunction {
    type Output = RationalFunction;

    fn add(self, rhs: Self) -> RationalFunction {
        &self + &rhs
    }
}

impl Sub for RationalFunction {
    type Output = RationalFunction;

    fn sub(self, rhs: Self) -> RationalFunction {
        &self - &rhs
    }
}

impl Mul for RationalFunction {
    type Output = RationalFunction;

    fn mul(self, rhs: Self) -> RationalFunction {
        &self * &rhs
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;

    fn neg(self) -> RationalFunction {
        -&self
    }
}

impl From<Poly> for RationalFunction {
    fn from(p: Poly) -> Self {
        RationalFunction::from_poly(p)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_with("x"))
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_with("x"))
    }
}

/// Checks `|f|_r ≤ max(|f|_{r1}, |f|_{r2})` for `ρ1 ≤ ρ ≤ ρ2`.
///
/// Always true for functions without poles on the closed annulus; exposed as
/// an oracle for tests.
pub fn interval_max_principle_check(
    f: &RationalFunction,
    rho1: &Rational,
    rho: &Rational,
    rho2: &Rational,
    p: Prime,
) -> Result<bool> {
    if !(rho1 <= rho && rho <= rho2) {
        return Err(Error::InvalidInput("expected rho1 <= rho <= rho2".into()));
    }
    if !f.pole_free_on_closed(rho1, rho2, p) {
        return Err(Error::InvalidInput("function has a pole on the closed annulus".into()));
    }
    let mid = f.gauss_norm(rho, p)?;
    let bound = f.gauss_norm(rho1, p)?.max_with(f.gauss_norm(rho2, p)?);
    Ok(mid <= bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::laurent::parse::parse_rational_function;

    fn two() -> Prime {
        Prime::new(2).unwrap()
    }

    fn rf(s: &str) -> RationalFunction {
        parse_rational_function(s, "x").unwrap()
    }

    #[test]
    fn gauss_norm_of_quotient() {
        let f = rf("(1+2*x)^2/(2+x)");
        assert_eq!(f.gauss_norm(&int(0), two()).unwrap(), LogMagnitude::Finite(int(0)));
    }

    #[test]
    fn pole_checks() {
        let i = LogInterval::from_ints(-2, 0).unwrap();
        assert!(rf("1/x").pole_free_on(&i, two()));
        assert!(!rf("1/(x-2)").pole_free_on(&i, two()));
        let j = LogInterval::new(rat(-3, 2), rat(-5, 4)).unwrap();
        let f = rf("1/(x^2-6*x+8)");
        assert!(f.pole_free_on(&j, two()));
        // roots 2 and 4 by factoring
        assert_eq!(f.pole_log_magnitudes(two()), vec![int(-2), int(-1)]);
        // a cancelled pole is not a pole
        assert!(rf("(x-2)/(x-2)").pole_free_on(&i, two()));
    }

    #[test]
    fn max_principle_examples() {
        let p = two();
        assert!(interval_max_principle_check(&rf("x"), &int(-3), &int(1), &int(2), p).unwrap());
        assert!(interval_max_principle_check(&rf("1+x"), &int(-1), &int(0), &int(1), p).unwrap());
        // |2+x| at -2,-1,0 is -1,-1,0; minus rho gives 1, 0, 0
        let f = rf("(2+x)/x");
        assert_eq!(f.gauss_norm(&int(-2), p).unwrap(), LogMagnitude::Finite(int(1)));
        assert_eq!(f.gauss_norm(&int(-1), p).unwrap(), LogMagnitude::Finite(int(0)));
        assert_eq!(f.gauss_norm(&int(0), p).unwrap(), LogMagnitude::Finite(int(0)));
        assert!(interval_max_principle_check(&f, &int(-2), &int(-1), &int(0), p).unwrap());
        assert!(interval_max_principle_check(&f, &int(0), &int(-1), &int(1), p).is_err());
    }

    #[test]
    fn equality_ignores_representation() {
        let a = RationalFunction::new_unreduced(
            LaurentPoly::from_terms([(0, int(2)), (1, int(2))]),
            LaurentPoly::from_terms([(1, int(4))]),
        )
        .unwrap();
        assert_eq!(a, rf("(1+x)/(2*x)"));
        assert!(RationalFunction::new(LaurentPoly::one(), LaurentPoly::zero()).is_err());
    }

    #[test]
    fn quotient_rule() {
        assert_eq!(rf("1/x").derivative(), rf("-1/x^2"));
        assert_eq!(rf("x/(1+x)").derivative(), rf("1/(1+x)^2"));
    }
}
