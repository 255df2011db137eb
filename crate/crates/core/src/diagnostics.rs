//! Boundedness of the generic solution matrix on the disk of convergence and
//! the end-to-end check of the one-slope theorem.
//!
//! With `b_n = log_p ||G_n/n!||_ρ + n·log R` the solution is bounded on the
//! open disk iff `sup b_n < ∞`. Only finitely many terms are available, so
//! the sequence is classified by the trend of its tail.

use rayon::prelude::*;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::arith::{fixed, int, rational_to_f64, LogMagnitude, LogValue, Rational};
use crate::diffmod::{DiffModule, NormProfile};
use crate::error::{Error, Result};
use crate::radius::{is_non_robba, least_squares, one_slope, polygon_from_profile, ConvergencePolygon, EstimateOptions, Mode, NonRobba, MIN_DEPTH};

pub const DEFAULT_TOLERANCE: f64 = 0.02;

/// `max b_n` above this is never called a plateau.
pub const HUGE_GUARD: f64 = 1e4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    BoundedDecaying,
    BoundedPlateau,
    SuspectedUnbounded,
    Inconclusive,
}

impl Classification {
    pub fn is_bounded(self) -> bool {
        matches!(self, Classification::BoundedDecaying | Classification::BoundedPlateau)
    }
}

/// The classification rule. A tail with no finite term (a zero tail) is a plateau.
pub fn classify(max_b: f64, tail_slope: Option<f64>, slope_stderr: f64, tol: f64) -> Classification {
    let Some(slope) = tail_slope else {
        return if max_b < HUGE_GUARD { Classification::BoundedPlateau } else { Classification::Inconclusive };
    };
    if slope_stderr > tol {
        Classification::Inconclusive
    } else if slope < -tol {
        Classification::BoundedDecaying
    } else if slope > tol {
        Classification::SuspectedUnbounded
    } else if max_b < HUGE_GUARD {
        Classification::BoundedPlateau
    } else {
        Classification::Inconclusive
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundednessReport {
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub rho: Rational,
    pub depth: usize,
    pub log_r: LogValue,
    #[serde(serialize_with = "ser_sequence")]
    pub b: Vec<LogValue>,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub max_b: f64,
    pub argmax: usize,
    /// Least-squares slope of `b_n` over `[N/2, N]`.
    #[serde(serialize_with = "crate::report::ser_opt_f64")]
    pub tail_slope: Option<f64>,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub slope_stderr: f64,
    pub classification: Classification,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub tolerance: f64,
}

/// `[{ "n": 0, "value": … }, …]`
fn ser_sequence<S: Serializer>(b: &[LogValue], s: S) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Entry<'a> {
        n: usize,
        value: &'a LogValue,
    }
    let mut seq = s.serialize_seq(Some(b.len()))?;
    for (n, value) in b.iter().enumerate() {
        seq.serialize_element(&Entry { n, value })?;
    }
    seq.end()
}

/// Boundedness report at `rho` with the given `log R`.
pub fn bounded_report(
    m: &DiffModule,
    rho: &Rational,
    depth: usize,
    log_r: &LogValue,
    tol: f64,
    opts: &EstimateOptions,
) -> Result<BoundednessReport> {
    if !m.interval().contains(rho) {
        return Err(m.interval().domain_error(rho));
    }
    if depth < MIN_DEPTH {
        return Err(Error::InvalidParameter(format!("depth must be at least {MIN_DEPTH}, got {depth}")));
    }
    let profile = NormProfile::build(m, depth, &opts.budget)?;
    bounded_from_profile(&profile, rho, log_r, tol, opts)
}

pub fn bounded_from_profile(
    profile: &NormProfile,
    rho: &Rational,
    log_r: &LogValue,
    tol: f64,
    opts: &EstimateOptions,
) -> Result<BoundednessReport> {
    let depth = profile.depth();
    let exact = match (opts.mode, log_r) {
        (Mode::Exact, LogValue::Exact(q)) => Some(q),
        (_, LogValue::Bottom) => return Err(Error::InvalidParameter("log R must be finite".into())),
        _ => None,
    };
    if log_r.to_f64() > rational_to_f64(rho) || exact.is_some_and(|q| q > rho) {
        return Err(Error::InvalidParameter(format!("log R = {} exceeds ρ", log_r.to_f64())));
    }
    let b: Vec<LogValue> = match exact {
        Some(q) => (0..=depth)
            .map(|n| match profile.entry(n, rho, opts.normalization) {
                LogMagnitude::Bottom => LogValue::Bottom,
                LogMagnitude::Finite(v) => LogValue::Exact(v + q * int(n as i64)),
            })
            .collect(),
        None => {
            let (r, l) = (rational_to_f64(rho), log_r.to_f64());
            (0..=depth)
                .map(|n| match profile.entry_f64(n, r, opts.normalization) {
                    v if v == f64::NEG_INFINITY => LogValue::Bottom,
                    v => LogValue::Float(v + n as f64 * l),
                })
                .collect()
        }
    };
    let (mut max_b, mut argmax) = (f64::NEG_INFINITY, 0);
    for (n, v) in b.iter().enumerate() {
        if !v.is_bottom() && v.to_f64() > max_b {
            (max_b, argmax) = (v.to_f64(), n);
        }
    }
    let tail: Vec<(f64, f64)> = (depth / 2..=depth)
        .filter(|&n| !b[n].is_bottom())
        .map(|n| (n as f64, b[n].to_f64()))
        .collect();
    let fit = least_squares(&tail);
    let tail_slope = fit.map(|f| fixed(f.slope));
    let slope_stderr = fit.map_or(0.0, |f| fixed(f.slope_stderr));
    Ok(BoundednessReport {
        rho: rho.clone(),
        depth,
        log_r: log_r.clone(),
        b,
        max_b: fixed(max_b),
        argmax,
        tail_slope,
        slope_stderr,
        classification: classify(max_b, tail_slope, slope_stderr, tol),
        tolerance: tol,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    TheoremAppliesAndVerified,
    TheoremAppliesNumericallyUnclear,
    HypothesesFail,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremConfig {
    pub grid: usize,
    pub depth: usize,
    pub max_denominator: u64,
    pub tolerance: f64,
    pub estimate: EstimateOptions,
}

impl Default for TheoremConfig {
    fn default() -> Self {
        TheoremConfig {
            grid: 17,
            depth: crate::diffmod::DEFAULT_DEPTH,
            max_denominator: 32,
            tolerance: DEFAULT_TOLERANCE,
            estimate: EstimateOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremReport {
    pub polygon: ConvergencePolygon,
    pub one_slope: bool,
    pub non_robba: NonRobba,
    /// Empty when the hypotheses fail.
    pub reports: Vec<BoundednessReport>,
    pub verdict: Verdict,
}

/// Fits the polygon, tests the hypotheses and, when they hold, checks
/// boundedness at every grid point with `log R` read off the fitted polygon.
pub fn theorem_check(m: &DiffModule, cfg: &TheoremConfig) -> Result<TheoremReport> {
    cfg.estimate.validate()?;
    let profile = NormProfile::build(m, cfg.depth, &cfg.estimate.budget)?;
    let polygon = polygon_from_profile(&profile, m.interval(), cfg.grid, cfg.max_denominator, &cfg.estimate)?;
    let one = one_slope(&polygon);
    let non_robba = is_non_robba(&polygon);
    if !(one && non_robba.holds) {
        return Ok(TheoremReport { polygon, one_slope: one, non_robba, reports: Vec::new(), verdict: Verdict::HypothesesFail });
    }
    let reports: Vec<BoundednessReport> = polygon
        .samples
        .par_iter()
        .map(|s| {
            let v = polygon.eval(&s.rho);
            let log_r = match cfg.estimate.mode {
                Mode::Exact => LogValue::Exact(v),
                Mode::Float => LogValue::Float(rational_to_f64(&v)),
            };
            bounded_from_profile(&profile, &s.rho, &log_r, cfg.tolerance, &cfg.estimate)
        })
        .collect::<Result<_>>()?;
    let verdict = if reports.iter().all(|r| r.classification.is_bounded()) {
        Verdict::TheoremAppliesAndVerified
    } else {
        Verdict::TheoremAppliesNumericallyUnclear
    };
    Ok(TheoremReport { polygon, one_slope: one, non_robba, reports, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{digit_sum, rat, LogInterval, Prime};
    use crate::laurent::parse_rational_function;

    fn scalar(g: &str, lo: i64, hi: i64) -> DiffModule {
        DiffModule::scalar(
            Prime::new(2).unwrap(),
            parse_rational_function(g, "x").unwrap(),
            LogInterval::from_ints(lo, hi).unwrap(),
        )
        .unwrap()
    }

    fn exact(q: Rational) -> LogValue {
        LogValue::Exact(q)
    }

    #[test]
    fn zero_module_plateau() {
        let m = scalar("0", -1, 1);
        let r = bounded_report(&m, &int(0), 64, &exact(int(0)), DEFAULT_TOLERANCE, &EstimateOptions::default()).unwrap();
        assert_eq!(r.b[0], exact(int(0)));
        assert!(r.b[1..].iter().all(LogValue::is_bottom));
        assert_eq!(r.tail_slope, None);
        assert_eq!(r.classification, Classification::BoundedPlateau);
    }

    #[test]
    fn exponential_digit_sums() {
        let m = scalar("1", -2, 2);
        let p = Prime::new(2).unwrap();
        let r = bounded_report(&m, &int(0), 512, &exact(int(-1)), DEFAULT_TOLERANCE, &EstimateOptions::default()).unwrap();
        for (n, b) in r.b.iter().enumerate() {
            assert_eq!(b, &exact(-int(digit_sum(n as u64, p) as i64)), "n = {n}");
        }
        assert_eq!((r.max_b, r.argmax), (0.0, 0));
        assert_eq!(r.classification, Classification::BoundedPlateau);

        let over = bounded_report(&m, &int(0), 512, &exact(rat(-9, 10)), DEFAULT_TOLERANCE, &EstimateOptions::default())
            .unwrap();
        assert_eq!(over.classification, Classification::SuspectedUnbounded);
        let under = bounded_report(&m, &int(0), 512, &exact(rat(-3, 2)), DEFAULT_TOLERANCE, &EstimateOptions::default())
            .unwrap();
        assert_eq!(under.classification, Classification::BoundedDecaying);
    }

    #[test]
    fn float_mode_matches_exact() {
        let m = scalar("1/(2*x)", -1, 1);
        let e = bounded_report(&m, &rat(1, 3), 128, &exact(rat(-5, 3)), 0.02, &EstimateOptions::default()).unwrap();
        let f = bounded_report(&m, &rat(1, 3), 128, &LogValue::Float(-5.0 / 3.0), 0.02, &EstimateOptions::float()).unwrap();
        for (a, b) in e.b.iter().zip(&f.b) {
            assert!((a.to_f64() - b.to_f64()).abs() < 1e-9);
        }
        assert_eq!(e.classification, f.classification);
    }

    #[test]
    fn rejects_radius_above_rho() {
        let m = scalar("1", -2, 2);
        assert!(bounded_report(&m, &int(0), 64, &exact(rat(1, 2)), 0.02, &EstimateOptions::default()).is_err());
        assert!(bounded_report(&m, &int(3), 64, &exact(int(0)), 0.02, &EstimateOptions::default()).is_err());
    }

    #[test]
    fn classification_rules() {
        assert_eq!(classify(0.0, Some(-0.5), 0.0, 0.02), Classification::BoundedDecaying);
        assert_eq!(classify(0.0, Some(0.01), 0.0, 0.02), Classification::BoundedPlateau);
        assert_eq!(classify(0.0, Some(0.1), 0.0, 0.02), Classification::SuspectedUnbounded);
        assert_eq!(classify(0.0, Some(0.0), 0.5, 0.02), Classification::Inconclusive);
        assert_eq!(classify(1e5, Some(0.0), 0.0, 0.02), Classification::Inconclusive);
    }

    #[test]
    fn theorem_pipeline() {
        let cfg = TheoremConfig { grid: 5, ..TheoremConfig::default() };
        let exp = theorem_check(&scalar("1", 0, 2), &cfg).unwrap();
        assert_eq!(exp.verdict, Verdict::TheoremAppliesAndVerified);
        assert_eq!(exp.reports.len(), 5);
        let euler = theorem_check(&scalar("1/(2*x)", -1, 1), &cfg).unwrap();
        assert_eq!(euler.verdict, Verdict::TheoremAppliesAndVerified);
        let zero = theorem_check(&scalar("0", -1, 1), &cfg).unwrap();
        assert_eq!(zero.verdict, Verdict::HypothesesFail);
        assert!(zero.reports.is_empty());
        let two_slopes = theorem_check(&scalar("1", -2, 2), &cfg).unwrap();
        assert_eq!(two_slopes.verdict, Verdict::HypothesesFail);
        assert!(!two_slopes.one_slope);
    }
}
