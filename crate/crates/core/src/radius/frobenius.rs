//! The radius relation `R(M, r)^{p^h} = R(N, r^{p^h})` between a module `N`
//! and its `h`-fold Frobenius pullback `M`.

use serde::Serialize;

use crate::arith::{fixed, int, rational_to_f64, LogValue, Rational};
use crate::diffmod::{frobenius_pullback, DiffModule, NormProfile};
use crate::error::{Error, Result};

use super::{estimate_from_profile, EstimateOptions, MIN_DEPTH};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrobeniusPoint {
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub rho: Rational,
    pub log_r_m: LogValue,
    pub log_r_n: LogValue,
    /// Points with `log R_M ≤ ρ + log π / p^{h-1}` are outside the theorem's
    /// hypothesis and are excluded.
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub threshold: Rational,
    pub excluded: bool,
    /// `|p^h log R_M(ρ) - log R_N(p^h ρ)|`, absent for excluded points.
    #[serde(serialize_with = "crate::report::ser_opt_f64")]
    pub residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrobeniusReport {
    pub p: u64,
    pub h: u32,
    pub depth: usize,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub tolerance: f64,
    pub points: Vec<FrobeniusPoint>,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub max_residual: f64,
    pub holds: bool,
}

/// Compares radii of `n_mod` and its pullback on `grid` interior points of
/// the pullback's interval.
pub fn frobenius_radius_check(
    n_mod: &DiffModule,
    h: u32,
    grid: usize,
    depth: usize,
    tol: f64,
    opts: &EstimateOptions,
) -> Result<FrobeniusReport> {
    opts.validate()?;
    if grid == 0 {
        return Err(Error::InvalidParameter("grid must contain at least one point".into()));
    }
    if depth < MIN_DEPTH {
        return Err(Error::InvalidParameter(format!("depth must be at least {MIN_DEPTH}, got {depth}")));
    }
    let m = frobenius_pullback(n_mod, h)?;
    let p = n_mod.p();
    let q = int(p.get() as i64).pow(h as i32);
    let pi_shift = p.log_pi() / int(p.get() as i64).pow(h as i32 - 1);

    let (profile_m, profile_n) = rayon::join(
        || NormProfile::build(&m, depth, &opts.budget),
        || NormProfile::build(n_mod, depth, &opts.budget),
    );
    let (profile_m, profile_n) = (profile_m?, profile_n?);

    let mut points = Vec::with_capacity(grid);
    for rho in m.interval().grid(grid) {
        let em = estimate_from_profile(&profile_m, &rho, opts)?;
        let en = estimate_from_profile(&profile_n, &(&q * &rho), opts)?;
        let threshold = &rho + &pi_shift;
        let excluded = match em.log_r.exact() {
            Some(v) => v <= &threshold,
            None => em.log_r.to_f64() <= rational_to_f64(&threshold),
        };
        let residual = (!excluded).then(|| match (em.log_r.exact(), en.log_r.exact()) {
            (Some(a), Some(b)) => rational_to_f64(&(&q * a - b)).abs(),
            _ => (rational_to_f64(&q) * em.log_r.to_f64() - en.log_r.to_f64()).abs(),
        });
        points.push(FrobeniusPoint {
            rho,
            log_r_m: em.log_r,
            log_r_n: en.log_r,
            threshold,
            excluded,
            residual: residual.map(fixed),
        });
    }
    if points.iter().all(|pt| pt.excluded) {
        return Err(Error::HypothesisViolated(format!(
            "every sampled point of {} fails log R > ρ + log π / p^{}",
            m.interval(),
            h - 1
        )));
    }
    let max_residual = points.iter().filter_map(|pt| pt.residual).fold(0.0, f64::max);
    Ok(FrobeniusReport { p: p.get(), h, depth, tolerance: tol, holds: max_residual <= tol, points, max_residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{LogInterval, Prime};
    use crate::laurent::parse_rational_function;

    fn scalar(p: u64, g: &str, iv: LogInterval) -> DiffModule {
        DiffModule::scalar(Prime::new(p).unwrap(), parse_rational_function(g, "x").unwrap(), iv).unwrap()
    }

    #[test]
    fn zero_module_has_zero_residual() {
        let n = scalar(2, "0", LogInterval::from_ints(-2, 2).unwrap());
        let r = frobenius_radius_check(&n, 1, 5, 64, 0.1, &EstimateOptions::default()).unwrap();
        assert!(r.holds);
        assert_eq!(r.max_residual, 0.0);
        assert!(r.points.iter().all(|pt| !pt.excluded));
    }

    #[test]
    fn exponential_pullback_at_zero() {
        let n = scalar(2, "1", LogInterval::from_ints(-1, 1).unwrap());
        let r = frobenius_radius_check(&n, 1, 1, 256, 0.1, &EstimateOptions::default()).unwrap();
        let pt = &r.points[0];
        assert_eq!(pt.rho, int(0));
        assert!((pt.log_r_m.to_f64() + 0.5).abs() < 0.05, "{pt:?}");
        assert!(r.holds, "{r:?}");
    }

    #[test]
    fn all_points_excluded() {
        // on ρ ∈ (1, 2) the pullback 2x has log R = -ρ ≤ ρ - 1
        let n = scalar(2, "1", LogInterval::from_ints(2, 4).unwrap());
        let err = frobenius_radius_check(&n, 1, 3, 64, 0.1, &EstimateOptions::default()).unwrap_err();
        assert!(matches!(err, Error::HypothesisViolated(_)));
    }
}
