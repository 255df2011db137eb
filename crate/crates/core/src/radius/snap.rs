//! Best rational approximations with a bounded denominator.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{FromPrimitive, One, Signed, Zero};

use crate::arith::Rational;

/// The rational closest to `x` among those with denominator `≤ max_den`,
/// found from the continued-fraction convergents of `x` and the best
/// semiconvergent below the bound. Ties go to the convergent.
pub fn snap_rational(x: &Rational, max_den: u64) -> Rational {
    assert!(max_den >= 1, "denominator bound must be positive");
    let max_den = BigInt::from(max_den);
    if x.denom() <= &max_den {
        return x.clone();
    }
    let (mut p0, mut q0, mut p1, mut q1) = (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    let (mut n, mut d) = (x.numer().clone(), x.denom().clone());
    loop {
        let a = n.div_floor(&d);
        let q2 = &q0 + &a * &q1;
        if q2 > max_den {
            break;
        }
        let p2 = &p0 + &a * &p1;
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let r = &n - &a * &d;
        (n, d) = (d, r);
    }
    let k = (&max_den - &q0).div_floor(&q1);
    let semi = Rational::new(&p0 + &k * &p1, &q0 + &k * &q1);
    let conv = Rational::new(p1, q1);
    if (&conv - x).abs() <= (&semi - x).abs() {
        conv
    } else {
        semi
    }
}

/// [`snap_rational`] for a double.
pub fn snap_f64(x: f64, max_den: u64) -> Rational {
    let exact = Rational::from_f64(x).expect("finite value");
    snap_rational(&exact, max_den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn known_values() {
        assert_eq!(snap_f64(std::f64::consts::PI, 7), rat(22, 7));
        assert_eq!(snap_f64(std::f64::consts::PI, 120), rat(355, 113));
        assert_eq!(snap_f64(0.996, 32), int(1));
        assert_eq!(snap_f64(-1.998, 32), int(-2));
        assert_eq!(snap_f64(0.49, 8), rat(1, 2));
        assert_eq!(snap_f64(-0.335, 8), rat(-1, 3));
        assert_eq!(snap_rational(&rat(3, 7), 8), rat(3, 7));
    }

    /// Brute force over all denominators up to the bound.
    fn nearest(x: f64, max_den: i64) -> f64 {
        (1..=max_den)
            .map(|q| (x * q as f64).round() / q as f64)
            .min_by(|a, b| (a - x).abs().total_cmp(&(b - x).abs()))
            .unwrap()
    }

    proptest! {
        #[test]
        fn matches_brute_force(x in -5.0f64..5.0, max_den in 1u64..40) {
            let snapped = crate::arith::rational_to_f64(&snap_f64(x, max_den));
            let best = nearest(x, max_den as i64);
            prop_assert!(((snapped - x).abs() - (best - x).abs()).abs() < 1e-12);
            prop_assert!(snap_f64(x, max_den).denom() <= &BigInt::from(max_den));
        }
    }
}
