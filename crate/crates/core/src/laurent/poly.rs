use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{format_rational, valuation, valuation_int, LogMagnitude, Prime, Rational};

/// Coefficient rings for Laurent polynomials: exact rationals for the
/// public surface and bare integers for the Taylor recursion.
pub trait Coefficient:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + Send
    + Sync
{
    fn from_i64(n: i64) -> Self;

    /// `v_p` of a nonzero coefficient; `None` for zero.
    fn valuation(&self, p: Prime) -> Option<i64>;

    fn to_rational(&self) -> Rational;

    /// Approximate bit length, used by memory guards.
    fn bits(&self) -> u64;

    fn mul_ref(&self, other: &Self) -> Self;

    fn add_assign_ref(&mut self, other: &Self);

    fn sub_assign_ref(&mut self, other: &Self);

    /// Coefficients of the product of two dense coefficient vectors.
    fn convolve(a: &[Self], b: &[Self]) -> Vec<Self> {
        let mut out = vec![Self::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    out[i + j].add_assign_ref(&x.mul_ref(y));
                }
            }
        }
        out
    }
}

impl Coefficient for Rational {
    fn from_i64(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }

    fn valuation(&self, p: Prime) -> Option<i64> {
        valuation(self, p)
    }

    fn to_rational(&self) -> Rational {
        self.clone()
    }

    fn bits(&self) -> u64 {
        self.numer().bits() + self.denom().bits()
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }

    fn sub_assign_ref(&mut self, other: &Self) {
        *self -= other;
    }

    // Integer products after clearing denominators; one normalization per
    // output coefficient instead of one per term.
    fn convolve(a: &[Self], b: &[Self]) -> Vec<Self> {
        let (da, ia) = clear_denominators(a);
        let (db, ib) = clear_denominators(b);
        let d = da * db;
        BigInt::convolve(&ia, &ib).into_iter().map(|c| Rational::new(c, d.clone())).collect()
    }
}

/// `(d, d·c)` with `d` the positive lcm of the denominators.
fn clear_denominators(c: &[Rational]) -> (BigInt, Vec<BigInt>) {
    let d = c.iter().fold(BigInt::one(), |acc, x| if x.denom().is_one() { acc } else { acc.lcm(x.denom()) });
    let scaled = c.iter().map(|x| x.numer() * (&d / x.denom())).collect();
    (d, scaled)
}

impl Coefficient for BigInt {
    fn from_i64(n: i64) -> Self {
        BigInt::from(n)
    }

    fn valuation(&self, p: Prime) -> Option<i64> {
        valuation_int(self, p).map(|v| v as i64)
    }

    fn to_rational(&self) -> Rational {
        Rational::from_integer(self.clone())
    }

    fn bits(&self) -> u64 {
        BigInt::bits(self)
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }

    fn sub_assign_ref(&mut self, other: &Self) {
        *self -= other;
    }
}

/// A Laurent polynomial `Σ a_n x^n` with finite support.
///
/// Stored densely from the lowest to the highest nonzero exponent; both end
/// coefficients are nonzero and the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly<C = Rational> {
    low: i64,
    coeffs: Vec<C>,
}

pub type IntLaurent = LaurentPoly<BigInt>;

impl<C: Coefficient> LaurentPoly<C> {
    pub fn zero() -> Self {
        LaurentPoly { low: 0, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(c, 0)
    }

    /// `c·x^e`.
    pub fn monomial(c: C, e: i64) -> Self {
        Self::from_dense(e, vec![c])
    }

    pub fn x() -> Self {
        Self::monomial(C::one(), 1)
    }

    /// Coefficients of `x^low, x^{low+1}, …`; zeros at either end are trimmed.
    pub fn from_dense(low: i64, coeffs: Vec<C>) -> Self {
        let mut p = LaurentPoly { low, coeffs };
        p.trim();
        p
    }

    /// Builds from `(exponent, coefficient)` pairs; repeated exponents add up.
    pub fn from_terms<I: IntoIterator<Item = (i64, C)>>(terms: I) -> Self {
        let terms: Vec<(i64, C)> = terms.into_iter().collect();
        if terms.is_empty() {
            return Self::zero();
        }
        let low = terms.iter().map(|t| t.0).min().unwrap();
        let high = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![C::zero(); (high - low + 1) as usize];
        for (e, c) in terms {
            let slot = &mut coeffs[(e - low) as usize];
            *slot = slot.clone() + &c;
        }
        Self::from_dense(low, coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn low(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn high(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i64 - 1)
    }

    pub fn coeff(&self, e: i64) -> C {
        if e < self.low || e >= self.low + self.coeffs.len() as i64 {
            C::zero()
        } else {
            self.coeffs[(e - self.low) as usize].clone()
        }
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.low + i as i64, c))
    }

    pub fn support_len(&self) -> usize {
        self.terms().count()
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        LaurentPoly { low: self.low + k, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_dense(self.low, self.coeffs.iter().map(|a| a.mul_ref(c)).collect())
    }

    /// `Σ n·a_n x^{n-1}`.
    pub fn derivative(&self) -> Self {
        Self::from_dense(
            self.low - 1,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c.mul_ref(&C::from_i64(self.low + i as i64)))
                .collect(),
        )
    }

    /// `f(x^k)` for `k ≥ 1`.
    pub fn compose_power(&self, k: u64) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (e * k as i64, c.clone())))
    }

    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> LaurentPoly<D> {
        LaurentPoly::from_dense(self.low, self.coeffs.iter().map(f).collect())
    }

    pub fn to_rational(&self) -> LaurentPoly<Rational> {
        self.map_coeffs(|c| c.to_rational())
    }

    pub fn bits(&self) -> u64 {
        self.coeffs.iter().map(|c| c.bits()).sum()
    }

    /// `log_p |f|_r` at `ρ = log_p r`: `max_n (-v_p(a_n) + n·ρ)`.
    pub fn gauss_norm(&self, rho: &Rational, p: Prime) -> LogMagnitude {
        self.terms()
            .map(|(e, c)| {
                let v = c.valuation(p).expect("terms are nonzero");
                LogMagnitude::Finite(Rational::from_integer(BigInt::from(e)) * rho - Rational::from_integer(BigInt::from(v)))
            })
            .max()
            .unwrap_or(LogMagnitude::Bottom)
    }

    /// Points `(n, v_p(a_n))` of the support.
    pub fn valuation_points(&self, p: Prime) -> Vec<(i64, i64)> {
        self.terms().map(|(e, c)| (e, c.valuation(p).expect("terms are nonzero"))).collect()
    }

    fn add_impl(&self, other: &Self, negate: bool) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { -other.clone() } else { other.clone() };
        }
        let low = self.low.min(other.low);
        let high = self.high().unwrap().max(other.high().unwrap());
        let mut coeffs = vec![C::zero(); (high - low + 1) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[(self.low - low) as usize + i] = c.clone();
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            let slot = &mut coeffs[(other.low - low) as usize + i];
            if negate {
                slot.sub_assign_ref(c);
            } else {
                slot.add_assign_ref(c);
            }
        }
        Self::from_dense(low, coeffs)
    }

    fn mul_impl(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Self::from_dense(self.low + other.low, C::convolve(&self.coeffs, &other.coeffs))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }
}

impl LaurentPoly<Rational> {
    /// Clears denominators: returns `(d, g)` with `g = d·self` having integer
    /// coefficients and `d` a positive integer.
    pub fn to_integer(&self) -> (BigInt, IntLaurent) {
        let (d, scaled) = clear_denominators(&self.coeffs);
        (d, LaurentPoly { low: self.low, coeffs: scaled })
    }

    /// Leading coefficient (highest exponent).
    pub fn leading(&self) -> Option<Rational> {
        self.coeffs.last().cloned()
    }

    /// Makes the leading coefficient one.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => self.scale(&l.recip()),
        }
    }

    /// Greatest common divisor up to units of `Q[x, 1/x]`: the result is a
    /// monic ordinary polynomial with nonzero constant term.
    pub fn gcd(&self, other: &Self) -> Self {
        let strip = |f: &Self| if f.is_zero() { Self::zero() } else { f.shift(-f.low) };
        let (a, b) = (strip(self), strip(other));
        if a.is_zero() {
            return b.monic();
        }
        if b.is_zero() {
            return a.monic();
        }
        if a.coeffs.len() == 1 || b.coeffs.len() == 1 {
            return Self::one();
        }
        let (a, b) = (primitive(&a.to_integer().1.coeffs), primitive(&b.to_integer().1.coeffs));
        let g = modular_gcd(&a, &b);
        LaurentPoly::from_dense(0, g.into_iter().map(Rational::from_integer).collect()).monic()
    }

    /// Exact division; `None` when `other` does not divide `self` in `Q[x, 1/x]`.
    pub fn exact_div(&self, other: &Self) -> Option<Self> {
        assert!(!other.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        // by Gauss's lemma the quotient of primitive parts is integral
        let (da, ia) = clear_denominators(&self.coeffs);
        let (db, ib) = clear_denominators(&other.coeffs);
        let (ca, cb) = (content(&ia), content(&ib));
        let pa: Vec<BigInt> = ia.iter().map(|x| x / &ca).collect();
        let pb: Vec<BigInt> = ib.iter().map(|x| x / &cb).collect();
        let q = div_exact_int(&pa, &pb)?;
        let scale = Rational::new(ca * db, cb * da);
        Some(LaurentPoly::from_dense(self.low - other.low, q.into_iter().map(|c| &scale * Rational::from_integer(c)).collect()))
    }}

fn primitive(c: &[BigInt]) -> Vec<BigInt> {
    let g = content(c);
    let sign = if c.last().is_some_and(|l| l.is_negative()) { -BigInt::one() } else { BigInt::one() };
    c.iter().map(|x| x / &g * &sign).collect()
}

fn mulmod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, q: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, q);
        }
        a = mulmod(a, a, q);
        e >>= 1;
    }
    r
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 || n.is_multiple_of(2) {
        return n == 2;
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37].iter().all(|&a| {
        if a % n == 0 {
            return true;
        }
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            return true;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                return true;
            }
        }
        false
    })
}

/// Primes below 2^62, largest first.
fn moduli() -> impl Iterator<Item = u64> {
    (1..(1u64 << 62)).rev().step_by(2).filter(|&n| is_prime_u64(n))
}

fn mod_coeffs(c: &[BigInt], q: u64) -> Vec<u64> {
    let qb = BigInt::from(q);
    c.iter().map(|x| x.mod_floor(&qb).try_into().expect("reduced below q")).collect()
}

/// Monic gcd in `F_q[x]`; inputs must have nonzero leading coefficients.
fn gcd_mod(mut a: Vec<u64>, mut b: Vec<u64>, q: u64) -> Vec<u64> {
    let trim = |v: &mut Vec<u64>| {
        while v.last() == Some(&0) {
            v.pop();
        }
    };
    while !b.is_empty() {
        let inv = powmod(*b.last().unwrap(), q - 2, q);
        while a.len() >= b.len() {
            let f = mulmod(*a.last().unwrap(), inv, q);
            let off = a.len() - b.len();
            for (i, &y) in b.iter().enumerate() {
                a[off + i] = (a[off + i] + q - mulmod(y, f, q)) % q;
            }
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    let inv = powmod(*a.last().unwrap(), q - 2, q);
    a.iter().map(|&x| mulmod(x, inv, q)).collect()
}

fn content(c: &[BigInt]) -> BigInt {
    c.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
}

/// Exact quotient in `Z[x]`, or `None` if `g` does not divide `f`.
fn div_exact_int(f: &[BigInt], g: &[BigInt]) -> Option<Vec<BigInt>> {
    if f.len() < g.len() {
        return None;
    }
    let lg = g.last().unwrap();
    let mut r = f.to_vec();
    let mut q = vec![BigInt::zero(); f.len() - g.len() + 1];
    while r.len() >= g.len() {
        let (t, rem) = r.last().unwrap().div_rem(lg);
        if !rem.is_zero() {
            return None;
        }
        let off = r.len() - g.len();
        for (i, y) in g.iter().enumerate() {
            r[off + i] -= y * &t;
        }
        q[off] = t;
        while r.last().is_some_and(|x| x.is_zero()) {
            r.pop();
        }
    }
    r.is_empty().then_some(q)
}

fn divides(g: &[BigInt], f: &[BigInt]) -> bool {
    div_exact_int(f, g).is_some()
}

/// Gcd of primitive polynomials in `Z[x]` by images modulo word-size primes
/// and Chinese remaindering, checked by trial division.
fn modular_gcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let gamma = a.last().unwrap().gcd(b.last().unwrap());
    let mut image: Vec<BigInt> = Vec::new();
    let mut modulus = BigInt::one();
    let mut last: Option<Vec<BigInt>> = None;
    for q in moduli() {
        let qb = BigInt::from(q);
        if (a.last().unwrap() % &qb).is_zero() || (b.last().unwrap() % &qb).is_zero() {
            continue;
        }
        let g = gcd_mod(mod_coeffs(a, q), mod_coeffs(b, q), q);
        if g.len() == 1 {
            return vec![BigInt::one()];
        }
        let gm: u64 = gamma.mod_floor(&qb).try_into().expect("reduced below q");
        let g: Vec<u64> = g.iter().map(|&x| mulmod(x, gm, q)).collect();
        if !image.is_empty() && g.len() > image.len() {
            continue;
        }
        if image.is_empty() || g.len() < image.len() {
            image = g.into_iter().map(BigInt::from).collect();
            modulus = qb;
            last = None;
            continue;
        }
        // combine x ≡ image (mod modulus) and x ≡ g (mod q)
        let inv = BigInt::from(powmod(modulus.mod_floor(&qb).try_into().expect("reduced"), q - 2, q));
        for (c, &r) in image.iter_mut().zip(&g) {
            let t = ((BigInt::from(r) - &*c) * &inv).mod_floor(&qb);
            *c += &modulus * t;
        }
        modulus *= &qb;
        let half = &modulus >> 1;
        let sym: Vec<BigInt> = image.iter().map(|c| if c > &half { c - &modulus } else { c.clone() }).collect();
        let cand = primitive(&sym);
        if last.as_ref() == Some(&cand) && divides(&cand, a) && divides(&cand, b) {
            return cand;
        }
        last = Some(cand);
    }
    unreachable!("the supply of primes is effectively unbounded")
}

impl<C: Coefficient> Add for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;

    fn add(self, rhs: Self) -> LaurentPoly<C> {
        self.add_impl(rhs, false)
    }
}

impl<C: Coefficient> Sub for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;

    fn sub(self, rhs: Self) -> LaurentPoly<C> {
        self.add_impl(rhs, true)
    }
}

impl<C: Coefficient> Mul for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;

    fn mul(self, rhs: Self) -> LaurentPoly<C> {
        self.mul_impl(rhs)
    }
}

impl<C: Coefficient> Neg for LaurentPoly<C> {
    type Output = LaurentPoly<C>;

    fn neg(self) -> LaurentPoly<C> {
        LaurentPoly { low: self.low, coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl<C: Coefficient> Add for LaurentPoly<C> {
    type Output = LaurentPoly<C>;

    fn add(self, rhs: Self) -> LaurentPoly<C> {
        &self + &rhs
    }
}

impl<C: Coefficient> Sub for LaurentPoly<C> {
    type Output = LaurentPoly<C>;

    fn sub(self, rhs: Self) -> LaurentPoly<C> {
        &self - &rhs
    }
}

impl<C: Coefficient> Mul for LaurentPoly<C> {
    type Output = LaurentPoly<C>;

    fn mul(self, rhs: Self) -> LaurentPoly<C> {
        &self * &rhs
    }
}

impl<C: Coefficient> Zero for LaurentPoly<C> {
    fn zero() -> Self {
        LaurentPoly::zero()
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<C: Coefficient> One for LaurentPoly<C> {
    fn one() -> Self {
        LaurentPoly::one()
    }
}

impl<C: Coefficient> Default for LaurentPoly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coefficient> fmt::Display for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, self, "x")
    }
}

impl<C: Coefficient> fmt::Debug for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, self, "x")
    }
}

/// Writes in the grammar accepted by the parser, e.g. `-1/2*x^-1 + 3*x^2`.
pub(crate) fn write_poly<C: Coefficient>(f: &mut impl fmt::Write, p: &LaurentPoly<C>, var: &str) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    let mut first = true;
    for (e, c) in p.terms() {
        let c = c.to_rational();
        let negative = c.is_negative();
        let a = c.abs();
        if first {
            if negative {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if negative { "-" } else { "+" })?;
        }
        first = false;
        let coeff = format_rational(&a);
        let coeff = if a.denom().is_one() { coeff } else { format!("({coeff})") };
        match e {
            0 => write!(f, "{coeff}")?,
            _ => {
                if !a.is_one() {
                    write!(f, "{coeff}*")?;
                }
                if e == 1 {
                    write!(f, "{var}")?;
                } else if e < 0 {
                    write!(f, "{var}^({e})")?;
                } else {
                    write!(f, "{var}^{e}")?;
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    type P = LaurentPoly<Rational>;

    fn poly(terms: &[(i64, i64)]) -> P {
        P::from_terms(terms.iter().map(|&(e, c)| (e, int(c))))
    }

    fn two() -> Prime {
        Prime::new(2).unwrap()
    }

    #[test]
    fn derivative_rule() {
        let f = poly(&[(-1, 1), (2, 3)]);
        assert_eq!(f.derivative(), poly(&[(-2, -1), (1, 6)]));
    }

    #[test]
    fn square_and_cancel() {
        let f = poly(&[(0, 1), (1, 2)]);
        assert_eq!(&f * &f, poly(&[(0, 1), (1, 4), (2, 4)]));
        let x = P::x();
        let s = &x - &x;
        assert!(s.is_zero());
        assert_eq!(s.support_len(), 0);
    }

    #[test]
    fn gauss_norm_examples() {
        let f = poly(&[(0, 2), (1, 1)]);
        assert_eq!(f.gauss_norm(&int(0), two()), LogMagnitude::Finite(int(0)));
        let g = poly(&[(-1, 1), (1, 4)]);
        assert_eq!(g.gauss_norm(&int(1), two()), LogMagnitude::Finite(int(-1)));
        assert_eq!(P::zero().gauss_norm(&int(3), two()), LogMagnitude::Bottom);
    }

    #[test]
    fn gcd_and_exact_division() {
        // (x - 2)(x - 4) and (x - 2)(x + 1)
        let a = poly(&[(0, 8), (1, -6), (2, 1)]);
        let b = poly(&[(0, -2), (1, -1), (2, 1)]);
        assert_eq!(a.gcd(&b), poly(&[(0, -2), (1, 1)]));
        let q = a.exact_div(&poly(&[(0, -4), (1, 1)])).unwrap();
        assert_eq!(q, poly(&[(0, -2), (1, 1)]));
        assert!(a.exact_div(&poly(&[(0, 1), (1, 1)])).is_none());
        // units of Q[x, 1/x] are ignored
        let c = a.shift(-3).scale(&rat(1, 7));
        assert_eq!(c.gcd(&a), a.monic());
    }

    #[test]
    fn gcd_of_larger_products() {
        let f = poly(&[(0, 3), (1, -1), (3, 5)]);
        let g = poly(&[(0, -7), (2, 2)]);
        let h = poly(&[(0, 1), (1, 1), (2, 9)]);
        let a = &(&f * &g) * &f;
        let b = &(&f * &h).shift(-2) * &h;
        assert_eq!(a.gcd(&b), f.monic());
        assert_eq!(g.gcd(&h), P::one());
    }

    #[test]
    fn integer_clearing() {
        let f = P::from_terms([(0, rat(1, 2)), (2, rat(3, 4))]);
        let (d, g) = f.to_integer();
        assert_eq!(d, BigInt::from(4));
        assert_eq!(g.to_rational(), f.scale(&int(4)));
    }

    #[test]
    fn display_round_trip_shape() {
        let f = P::from_terms([(-1, rat(-1, 2)), (0, int(3)), (2, int(1))]);
        assert_eq!(f.to_string(), "-(1/2)*x^(-1) + 3 + x^2");
    }
}
