use num_traits::One;
use proptest::prelude::*;

use padic_diffmod::arith::{int, rat, vp, LogInterval, LogMagnitude, Prime, Rational};
use padic_diffmod::diffmod::{
    frobenius_pullback, gauge_residual, gauge_transform, gn_sequence, Budget, DiffModule, NormProfile, Normalization,
};
use padic_diffmod::laurent::{LaurentPoly, RationalFunction};
use padic_diffmod::matrix::{Matrix, RationalFunctionMatrix};
use padic_diffmod::radius::{radius_estimate, snap_rational, EstimateOptions};
use padic_diffmod::spectral::{max_root_norm, ScalarOperator};

fn prime() -> impl Strategy<Value = Prime> {
    prop::sample::select(vec![2u64, 3, 5]).prop_map(|p| Prime::new(p).unwrap())
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=20).prop_map(|(n, d)| rat(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    small_rational().prop_filter("nonzero", |q| q != &int(0))
}

fn laurent() -> impl Strategy<Value = LaurentPoly> {
    (-2i64..=1, prop::collection::vec(small_rational(), 1..4)).prop_map(|(low, c)| LaurentPoly::from_dense(low, c))
}

fn matrix(mu: usize) -> impl Strategy<Value = RationalFunctionMatrix> {
    prop::collection::vec(laurent(), mu * mu).prop_map(move |v| {
        let mut it = v.into_iter();
        Matrix::from_fn(mu, |_, _| RationalFunction::from_poly(it.next().unwrap()))
    })
}

/// Products of elementary matrices `1 + c·x^k·E_ij`: determinant one.
fn unimodular() -> impl Strategy<Value = RationalFunctionMatrix> {
    prop::collection::vec((nonzero_rational(), 0i64..=2, any::<bool>()), 1..4).prop_map(|factors| {
        factors.into_iter().fold(Matrix::identity(2), |acc: RationalFunctionMatrix, (c, k, upper)| {
            let mut e: RationalFunctionMatrix = Matrix::identity(2);
            let slot = if upper { (0, 1) } else { (1, 0) };
            e[slot] = RationalFunction::from_poly(LaurentPoly::monomial(c, k));
            &acc * &e
        })
    })
}

fn window() -> LogInterval {
    LogInterval::from_ints(-2, 2).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn radius_never_exceeds_rho(p in prime(), alpha in nonzero_rational(), rho in -7i64..=7) {
        let rho = rat(rho, 4);
        let m = DiffModule::scalar(p, RationalFunction::constant(alpha), window()).unwrap();
        let est = radius_estimate(&m, &rho, 32, &EstimateOptions::default()).unwrap();
        prop_assert!(est.log_r.exact().unwrap() <= &rho);
    }

    #[test]
    fn profile_matches_direct_norms(p in prime(), g in matrix(2), rho in -4i64..=4) {
        let rho = rat(rho, 2);
        let m = DiffModule::new_unchecked(p, g, window());
        let state = gn_sequence(&m, 6).unwrap();
        let profile = NormProfile::build(&m, 6, &Budget::default()).unwrap();
        for n in 0..=6 {
            let gn = state.g_n(n);
            let direct = gn
                .entries()
                .map(|f| f.gauss_norm(&rho, p).unwrap())
                .fold(LogMagnitude::Bottom, LogMagnitude::max_with);
            prop_assert_eq!(profile.entry(n, &rho, Normalization::Plain), direct, "n = {}", n);
        }
    }

    #[test]
    fn gauge_residual_vanishes(p in prime(), g in matrix(2), h in unimodular()) {
        let m = DiffModule::new_unchecked(p, g, window());
        let out = gauge_transform(&m, &h).unwrap();
        prop_assert!(gauge_residual(m.matrix(), &h, out.module.matrix()).is_zero());
    }

    #[test]
    fn inverse_gauge_recovers_module(p in prime(), g in matrix(2), h in unimodular()) {
        let m = DiffModule::new_unchecked(p, g, window());
        let there = gauge_transform(&m, &h).unwrap().module;
        let back = gauge_transform(&there, &h.inverse().unwrap()).unwrap().module;
        prop_assert!(back.matrix() == m.matrix());
    }

    #[test]
    fn root_norm_is_largest_planted_root(
        p in prime(),
        roots in prop::collection::vec((prop::sample::select(vec![1i64, -1, 3, -3, 5, 7]), -3i32..=3), 1..=5),
    ) {
        let roots: Vec<Rational> = roots.into_iter().map(|(c, k)| int(c) * int(p.get() as i64).pow(k)).collect();
        let mut coeffs = vec![Rational::one()];
        for r in &roots {
            let mut next = coeffs.clone();
            next.push(int(0));
            for (j, c) in coeffs.iter().enumerate() {
                next[j + 1] -= c * r;
            }
            coeffs = next;
        }
        let q = coeffs[1..].iter().map(|c| RationalFunction::constant(c.clone())).collect();
        let op = ScalarOperator::new(p, q, window()).unwrap();
        let brute = roots.iter().map(|r| vp(r, p)).max().unwrap();
        prop_assert_eq!(max_root_norm(&op, &int(0)).unwrap(), brute);
    }

    #[test]
    fn pullback_of_constant(p in prime(), alpha in nonzero_rational(), h in 1u32..=2) {
        let m = DiffModule::scalar(p, RationalFunction::constant(alpha.clone()), window()).unwrap();
        let q = p.get().pow(h) as i64;
        let pulled = frobenius_pullback(&m, h).unwrap();
        let expected = RationalFunction::from_poly(LaurentPoly::monomial(alpha * int(q), q - 1));
        prop_assert!(pulled.matrix()[(0, 0)] == expected);
        prop_assert_eq!(pulled.interval(), &window().scaled(&rat(1, q)));
    }

    #[test]
    fn snapping_keeps_small_fractions(n in -200i64..=200, d in 1i64..=12, max_den in 12u64..=64) {
        let x = rat(n, d);
        prop_assert_eq!(snap_rational(&x, max_den), x.clone());
        let nudged = &x + rat(1, 1_000_000);
        prop_assert_eq!(snap_rational(&nudged, max_den), x);
    }
}
