//! Generic radius of convergence, convergence polygons and the predicates
//! built on them.
//!
//! With `b_n = log_p ||G_n/n!||_r` the radius is `log R = min(ρ, liminf -b_n/n)`.
//! The liminf is read off a tail window `[N/2, N]` in two ways: the minimum
//! of `-b_n/n` (tail-min) and minus the least-squares slope of `b_n` against
//! `n` (tail-slope). Their gap is reported as the estimate's discrepancy.

mod frobenius;
mod polygon;
mod snap;

pub use frobenius::{frobenius_radius_check, FrobeniusPoint, FrobeniusReport};
pub use polygon::{is_non_robba, one_slope, polygon_estimate, ConvergencePolygon, NonRobba, Sample, Segment, CONCAVITY_TOLERANCE};
pub(crate) use polygon::polygon_from_profile;
pub use snap::{snap_f64, snap_rational};

use serde::Serialize;

use crate::arith::{fixed, int, rational_to_f64, LogMagnitude, LogValue, Rational};
use crate::diffmod::{Budget, DiffModule, NormProfile, Normalization};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    #[default]
    TailMin,
    TailSlope,
}

/// Exact rationals or doubles for reported log-values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    #[default]
    Exact,
    Float,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateOptions {
    pub method: Method,
    pub mode: Mode,
    pub normalization: Normalization,
    /// First index of the tail window; `None` means `N/2`.
    pub tail_start: Option<usize>,
    pub budget: Budget,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        EstimateOptions {
            method: Method::TailMin,
            mode: Mode::Exact,
            normalization: Normalization::Factorial,
            tail_start: None,
            budget: Budget::default(),
        }
    }
}

impl EstimateOptions {
    pub fn float() -> Self {
        EstimateOptions { mode: Mode::Float, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.mode == Mode::Exact && self.method == Method::TailSlope {
            return Err(Error::InvalidInput("exact mode reports tail-min results only; use float mode for tail-slope".into()));
        }
        Ok(())
    }

    fn window(&self, depth: usize) -> (usize, usize) {
        let start = self.tail_start.unwrap_or(depth / 2).clamp(1, depth);
        (start, depth)
    }
}

pub const MIN_DEPTH: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusEstimate {
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub rho: Rational,
    pub depth: usize,
    pub method: Method,
    pub mode: Mode,
    pub normalization: Normalization,
    /// `log_p R` from the selected method, capped at `ρ`.
    pub log_r: LogValue,
    pub tail_min: LogValue,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub tail_slope: f64,
    /// `|tail_min - tail_slope|` after capping.
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub discrepancy: f64,
    /// The `min(ρ, ·)` cap binds for the selected method.
    pub capped: bool,
}

impl RadiusEstimate {
    pub fn log_r_f64(&self) -> f64 {
        self.log_r.to_f64()
    }
}

/// Least-squares line through `(x, y)` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope.
    pub slope_stderr: f64,
}

pub(crate) fn least_squares(points: &[(f64, f64)]) -> Option<LineFit> {
    let n = points.len() as f64;
    if points.len() < 2 {
        return None;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = points.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let slope_stderr = if points.len() > 2 { (sse / (n - 2.0) / sxx).sqrt() } else { 0.0 };
    Some(LineFit { slope, intercept, slope_stderr })
}

/// Radius estimate at `rho` from a precomputed norm profile.
pub fn estimate_from_profile(profile: &NormProfile, rho: &Rational, opts: &EstimateOptions) -> Result<RadiusEstimate> {
    opts.validate()?;
    let depth = profile.depth();
    if depth < MIN_DEPTH {
        return Err(Error::InvalidParameter(format!("depth must be at least {MIN_DEPTH}, got {depth}")));
    }
    let (start, end) = opts.window(depth);
    let rho_f = rational_to_f64(rho);

    let mut tail: Vec<(f64, f64)> = Vec::with_capacity(end - start + 1);
    let tail_min: LogValue = match opts.mode {
        Mode::Exact => {
            let mut best: Option<Rational> = None;
            for n in start..=end {
                if let LogMagnitude::Finite(b) = profile.entry(n, rho, opts.normalization) {
                    tail.push((n as f64, rational_to_f64(&b)));
                    let cand = -b / int(n as i64);
                    if best.as_ref().is_none_or(|m| &cand < m) {
                        best = Some(cand);
                    }
                }
            }
            LogValue::Exact(match best {
                Some(m) if &m < rho => m,
                _ => rho.clone(),
            })
        }
        Mode::Float => {
            let mut best = f64::INFINITY;
            for n in start..=end {
                let b = profile.entry_f64(n, rho_f, opts.normalization);
                if b.is_finite() {
                    tail.push((n as f64, b));
                    best = best.min(-b / n as f64);
                }
            }
            LogValue::Float(best.min(rho_f))
        }
    };
    let slope_raw = least_squares(&tail).map(|f| -f.slope).unwrap_or(f64::INFINITY);
    let tail_slope = slope_raw.min(rho_f);
    let discrepancy = (tail_min.to_f64() - tail_slope).abs();

    let (log_r, capped) = match opts.method {
        Method::TailMin => {
            let capped = match &tail_min {
                LogValue::Exact(q) => q == rho,
                other => other.to_f64() >= rho_f,
            };
            (tail_min.clone(), capped)
        }
        Method::TailSlope => (LogValue::Float(tail_slope), slope_raw >= rho_f),
    };
    Ok(RadiusEstimate {
        rho: rho.clone(),
        depth,
        method: opts.method,
        mode: opts.mode,
        normalization: opts.normalization,
        log_r,
        tail_min,
        tail_slope: fixed(tail_slope),
        discrepancy: fixed(discrepancy),
        capped,
    })
}

/// Estimates `log_p R(M, r)` at `r = p^ρ` from the first `depth` terms.
pub fn radius_estimate(m: &DiffModule, rho: &Rational, depth: usize, opts: &EstimateOptions) -> Result<RadiusEstimate> {
    opts.validate()?;
    if !m.interval().contains(rho) {
        return Err(m.interval().domain_error(rho));
    }
    if depth < MIN_DEPTH {
        return Err(Error::InvalidParameter(format!("depth must be at least {MIN_DEPTH}, got {depth}")));
    }
    let profile = NormProfile::build(m, depth, &opts.budget)?;
    estimate_from_profile(&profile, rho, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{LogInterval, Prime};
    use crate::laurent::parse_rational_function;

    fn scalar(p: u64, g: &str, lo: i64, hi: i64) -> DiffModule {
        DiffModule::scalar(
            Prime::new(p).unwrap(),
            parse_rational_function(g, "x").unwrap(),
            LogInterval::from_ints(lo, hi).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn zero_module_is_capped() {
        let m = scalar(2, "0", -2, 2);
        for rho in [int(-1), int(0), int(1)] {
            let e = radius_estimate(&m, &rho, 64, &EstimateOptions::default()).unwrap();
            assert_eq!(e.log_r, LogValue::Exact(rho.clone()));
            assert!(e.capped);
            assert_eq!(e.discrepancy, 0.0);
        }
    }

    #[test]
    fn exponential_radius_is_pi() {
        let m = scalar(2, "1", -2, 2);
        let e = radius_estimate(&m, &int(0), 256, &EstimateOptions::default()).unwrap();
        assert!((e.log_r_f64() + 1.0).abs() <= 0.05, "{e:?}");
        assert!((e.tail_slope + 1.0).abs() <= 0.05, "{e:?}");
        assert!(e.discrepancy <= 0.05);
        assert!(!e.capped);
        // the minimum sits at n = 256 where s_2(n) = 1
        assert_eq!(e.log_r, LogValue::Exact(crate::arith::rat(-255, 256)));
    }

    #[test]
    fn euler_radius() {
        let m = scalar(2, "1/(2*x)", -2, 2);
        let e = radius_estimate(&m, &int(0), 256, &EstimateOptions::default()).unwrap();
        assert!((e.log_r_f64() + 2.0).abs() <= 0.05, "{e:?}");
        let f = radius_estimate(&m, &int(0), 256, &EstimateOptions { method: Method::TailSlope, ..EstimateOptions::float() })
            .unwrap();
        assert!((f.log_r_f64() + 2.0).abs() <= 0.05, "{f:?}");
    }

    #[test]
    fn plain_normalization_drops_the_factorial() {
        let m = scalar(2, "1", -2, 2);
        let opts = EstimateOptions { normalization: Normalization::Plain, ..EstimateOptions::default() };
        // ||G_n|| = 1 for all n, so the unnormalized radius is capped at r
        let e = radius_estimate(&m, &int(-1), 64, &opts).unwrap();
        assert_eq!(e.log_r, LogValue::Exact(int(-1)));
        assert!(e.capped);
    }

    #[test]
    fn rejects_bad_requests() {
        let m = scalar(2, "1", -2, 2);
        let exact_slope = EstimateOptions { method: Method::TailSlope, ..EstimateOptions::default() };
        assert!(radius_estimate(&m, &int(0), 64, &exact_slope).is_err());
        assert!(matches!(radius_estimate(&m, &int(2), 64, &EstimateOptions::default()), Err(Error::Domain { .. })));
        assert!(radius_estimate(&m, &int(0), 8, &EstimateOptions::default()).is_err());
    }

    #[test]
    fn least_squares_line() {
        let pts: Vec<(f64, f64)> = (0..10).map(|i| (i as f64, 3.0 - 0.5 * i as f64)).collect();
        let fit = least_squares(&pts).unwrap();
        assert!((fit.slope + 0.5).abs() < 1e-12 && (fit.intercept - 3.0).abs() < 1e-12);
        assert!(fit.slope_stderr < 1e-9);
        assert!(least_squares(&pts[..1]).is_none());
    }
}
