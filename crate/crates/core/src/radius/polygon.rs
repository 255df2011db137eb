//! Fitting the convergence polygon `ρ ↦ log R(M, p^ρ)` from sampled radii.
//!
//! The fit takes the least concave majorant of the samples, drops "bridge"
//! edges that only join two segments across one grid step, snaps slopes and
//! intercepts to small-denominator rationals and returns the exact lower
//! envelope of the resulting lines over the interval.

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{fixed, rational_to_f64, round_significant, LogInterval, Rational};
use crate::diffmod::{DiffModule, NormProfile};
use crate::error::{Error, Result};

use super::snap::{snap_f64, snap_rational};
use super::{estimate_from_profile, EstimateOptions, RadiusEstimate, MIN_DEPTH};

/// Raw samples may sit below their concave majorant by at most this much
/// before a warning is attached.
pub const CONCAVITY_TOLERANCE: f64 = 0.05;

pub type Sample = RadiusEstimate;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Segment {
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub from: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub to: Rational,
    /// `β`, the exponent in `R = |α| r^β`.
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub slope: Rational,
    /// `log_p |α|`.
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub intercept: Rational,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub raw_slope: f64,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub raw_intercept: f64,
}

impl Segment {
    pub fn eval(&self, rho: &Rational) -> Rational {
        &self.slope * rho + &self.intercept
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergencePolygon {
    pub interval: LogInterval,
    pub segments: Vec<Segment>,
    pub samples: Vec<Sample>,
    /// Largest distance of a raw sample below the concave majorant.
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub concavity_defect: f64,
    /// Largest distance between a raw sample and the fitted polygon.
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub max_deviation: f64,
    pub warnings: Vec<String>,
}

impl ConvergencePolygon {
    /// Value of the fitted polygon at `rho`; the outer segments extend
    /// linearly past the interval.
    pub fn eval(&self, rho: &Rational) -> Rational {
        self.segments.iter().map(|s| s.eval(rho)).min().expect("polygon has a segment")
    }

    pub fn breakpoints(&self) -> Vec<Rational> {
        self.segments.iter().skip(1).map(|s| s.from.clone()).collect()
    }
}

/// Result of the non-Robba test: `log R(ρ) < ρ` throughout the interval.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonRobba {
    pub holds: bool,
    /// `min (ρ - log R(ρ))` over the closed interval.
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub margin: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub at: Rational,
}

/// Decides the non-Robba predicate exactly on the fitted polygon.
///
/// `ρ - log R` is linear on each segment, so it is positive on the open
/// segment iff it is nonnegative at both ends and not zero at both.
pub fn is_non_robba(poly: &ConvergencePolygon) -> NonRobba {
    let mut holds = true;
    let mut best: Option<(Rational, Rational)> = None;
    for s in &poly.segments {
        let m_from = &s.from - s.eval(&s.from);
        let m_to = &s.to - s.eval(&s.to);
        let zero = Rational::from_integer(0.into());
        if m_from < zero || m_to < zero || (m_from == zero && m_to == zero) {
            holds = false;
        }
        for (m, at) in [(m_from, &s.from), (m_to, &s.to)] {
            if best.as_ref().is_none_or(|(b, _)| &m < b) {
                best = Some((m, at.clone()));
            }
        }
    }
    let (margin, at) = best.expect("polygon has a segment");
    NonRobba { holds, margin, at }
}

pub fn one_slope(poly: &ConvergencePolygon) -> bool {
    poly.segments.len() == 1
}

/// Samples `grid` equispaced interior points of the module's interval and
/// fits the convergence polygon.
pub fn polygon_estimate(
    m: &DiffModule,
    grid: usize,
    depth: usize,
    max_denominator: u64,
    opts: &EstimateOptions,
) -> Result<ConvergencePolygon> {
    check_polygon_args(grid, depth, max_denominator)?;
    opts.validate()?;
    let profile = NormProfile::build(m, depth, &opts.budget)?;
    polygon_from_profile(&profile, m.interval(), grid, max_denominator, opts)
}

fn check_polygon_args(grid: usize, depth: usize, max_denominator: u64) -> Result<()> {
    if grid < 3 {
        return Err(Error::InvalidParameter(format!("grid needs at least 3 points, got {grid}")));
    }
    if depth < MIN_DEPTH {
        return Err(Error::InvalidParameter(format!("depth must be at least {MIN_DEPTH}, got {depth}")));
    }
    if max_denominator == 0 {
        return Err(Error::InvalidParameter("max denominator must be positive".into()));
    }
    Ok(())
}

pub(crate) fn polygon_from_profile(
    profile: &NormProfile,
    interval: &LogInterval,
    grid: usize,
    max_denominator: u64,
    opts: &EstimateOptions,
) -> Result<ConvergencePolygon> {
    check_polygon_args(grid, profile.depth(), max_denominator)?;
    let samples: Vec<Sample> = interval
        .grid(grid)
        .par_iter()
        .map(|rho| estimate_from_profile(profile, rho, opts))
        .collect::<Result<_>>()?;
    Ok(fit_polygon(interval, samples, max_denominator))
}

struct Group {
    first: usize,
    last: usize,
    raw_slope: f64,
    slope: Rational,
}

fn fit_polygon(interval: &LogInterval, samples: Vec<Sample>, max_den: u64) -> ConvergencePolygon {
    let xs: Vec<f64> = samples.iter().map(|s| rational_to_f64(&s.rho)).collect();
    let ys: Vec<f64> = samples.iter().map(|s| s.log_r.to_f64()).collect();
    let hull = upper_hull(&xs, &ys);

    let edges: Vec<(usize, usize)> = hull.windows(2).map(|w| (w[0], w[1])).collect();
    let slope_of = |(a, b): (usize, usize)| (ys[b] - ys[a]) / (xs[b] - xs[a]);
    let mut keep = vec![true; edges.len()];
    for e in 1..edges.len().saturating_sub(1) {
        let (a, b) = edges[e];
        if b - a != 1 {
            continue;
        }
        let (l, r) = (edges[e - 1], edges[e + 1]);
        let (sl, sr) = (slope_of(l), slope_of(r));
        if sl == sr {
            continue;
        }
        // intersection of the neighbouring lines through their vertices
        let x = (ys[r.0] - sr * xs[r.0] - ys[l.1] + sl * xs[l.1]) / (sl - sr);
        if xs[a] <= x && x <= xs[b] {
            keep[e] = false;
        }
    }

    let mut groups: Vec<Group> = Vec::new();
    for (e, &(a, b)) in edges.iter().enumerate() {
        if !keep[e] {
            continue;
        }
        let raw = slope_of((a, b));
        let slope = snap_f64(raw, max_den);
        match groups.last_mut() {
            Some(g) if g.slope == slope && g.last == a => {
                g.last = b;
                g.raw_slope = (ys[b] - ys[g.first]) / (xs[b] - xs[g.first]);
            }
            _ => groups.push(Group { first: a, last: b, raw_slope: raw, slope }),
        }
    }

    let lines: Vec<Segment> = groups
        .iter()
        .map(|g| {
            let members = &samples[g.first..=g.last];
            let raw_offsets: Vec<f64> =
                members.iter().map(|s| s.log_r.to_f64() - rational_to_f64(&g.slope) * rational_to_f64(&s.rho)).collect();
            let raw_intercept = median_f64(raw_offsets);
            let exact: Option<Vec<Rational>> =
                members.iter().map(|s| s.log_r.exact().map(|v| v - &g.slope * &s.rho)).collect();
            let intercept = match exact {
                Some(v) => median_rational(v),
                None => round_significant(raw_intercept, 12),
            };
            Segment {
                from: interval.lo().clone(),
                to: interval.hi().clone(),
                slope: g.slope.clone(),
                intercept: snap_rational(&intercept, max_den),
                raw_slope: fixed(g.raw_slope),
                raw_intercept: fixed(raw_intercept),
            }
        })
        .collect();
    let segments = lower_envelope(lines, interval);

    let concavity_defect = hull_gap(&hull, &xs, &ys);
    let mut poly = ConvergencePolygon {
        interval: interval.clone(),
        segments,
        samples,
        concavity_defect: fixed(concavity_defect),
        max_deviation: 0.0,
        warnings: Vec::new(),
    };
    let deviation = xs
        .iter()
        .zip(&ys)
        .zip(&poly.samples)
        .map(|((_, y), s)| (y - rational_to_f64(&poly.eval(&s.rho))).abs())
        .fold(0.0, f64::max);
    poly.max_deviation = fixed(deviation);
    if concavity_defect > CONCAVITY_TOLERANCE {
        poly.warnings.push(format!("raw samples are not concave: defect {concavity_defect:.4}"));
    }
    if deviation > CONCAVITY_TOLERANCE {
        poly.warnings.push(format!("fitted polygon deviates from the samples by {deviation:.4}"));
    }
    poly
}

/// Indices of the vertices of the upper concave hull; `xs` is increasing.
fn upper_hull(xs: &[f64], ys: &[f64]) -> Vec<usize> {
    let scale = ys.iter().fold(1.0f64, |m, y| m.max(y.abs()));
    let eps = 1e-12 * scale;
    let mut h: Vec<usize> = Vec::new();
    for i in 0..xs.len() {
        while h.len() >= 2 {
            let (a, b) = (h[h.len() - 2], h[h.len() - 1]);
            let cross = (xs[b] - xs[a]) * (ys[i] - ys[a]) - (ys[b] - ys[a]) * (xs[i] - xs[a]);
            if cross >= -eps {
                h.pop();
            } else {
                break;
            }
        }
        h.push(i);
    }
    h
}

fn hull_gap(hull: &[usize], xs: &[f64], ys: &[f64]) -> f64 {
    let mut gap = 0.0f64;
    for w in hull.windows(2) {
        let (a, b) = (w[0], w[1]);
        for i in a..=b {
            let t = (xs[i] - xs[a]) / (xs[b] - xs[a]);
            gap = gap.max(ys[a] + t * (ys[b] - ys[a]) - ys[i]);
        }
    }
    gap
}

/// Lower envelope of lines with strictly decreasing slopes, clipped to the
/// closed interval. Breakpoints are exact.
fn lower_envelope(lines: Vec<Segment>, interval: &LogInterval) -> Vec<Segment> {
    let cross = |a: &Segment, b: &Segment| (&b.intercept - &a.intercept) / (&a.slope - &b.slope);
    let mut stack: Vec<Segment> = Vec::new();
    for line in lines {
        if let Some(top) = stack.last() {
            if top.slope == line.slope {
                if line.intercept < top.intercept {
                    stack.pop();
                } else {
                    continue;
                }
            }
        }
        while stack.len() >= 2 {
            let n = stack.len();
            if cross(&stack[n - 2], &line) <= cross(&stack[n - 2], &stack[n - 1]) {
                stack.pop();
            } else {
                break;
            }
        }
        stack.push(line);
    }
    let (lo, hi) = (interval.lo(), interval.hi());
    let mut out: Vec<Segment> = Vec::new();
    for i in 0..stack.len() {
        let from = if i == 0 { lo.clone() } else { cross(&stack[i - 1], &stack[i]).max(lo.clone()) };
        let to = if i + 1 == stack.len() { hi.clone() } else { cross(&stack[i], &stack[i + 1]).min(hi.clone()) };
        if from < to {
            out.push(Segment { from, to, ..stack[i].clone() });
        }
    }
    if out.is_empty() {
        // every breakpoint lies outside the interval: keep the line active at its midpoint
        let mid = interval.midpoint();
        let best = stack.into_iter().min_by(|a, b| a.eval(&mid).cmp(&b.eval(&mid))).expect("at least one line");
        out.push(Segment { from: lo.clone(), to: hi.clone(), ..best });
    }
    out
}

fn median_f64(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

fn median_rational(mut v: Vec<Rational>) -> Rational {
    v.sort();
    let n = v.len();
    if n % 2 == 1 {
        v.swap_remove(n / 2)
    } else {
        (&v[n / 2 - 1] + &v[n / 2]) / Rational::from_integer(2.into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat, Prime};
    use crate::laurent::parse_rational_function;

    fn scalar(p: u64, g: &str, lo: Rational, hi: Rational) -> DiffModule {
        DiffModule::scalar(
            Prime::new(p).unwrap(),
            parse_rational_function(g, "x").unwrap(),
            LogInterval::new(lo, hi).unwrap(),
        )
        .unwrap()
    }

    fn fit(m: &DiffModule, grid: usize) -> ConvergencePolygon {
        polygon_estimate(m, grid, 256, 32, &EstimateOptions::default()).unwrap()
    }

    #[test]
    fn zero_module_is_the_diagonal() {
        let poly = fit(&scalar(2, "0", int(-2), int(2)), 9);
        assert_eq!(poly.segments.len(), 1);
        assert_eq!((poly.segments[0].slope.clone(), poly.segments[0].intercept.clone()), (int(1), int(0)));
        let nr = is_non_robba(&poly);
        assert!(!nr.holds);
        assert_eq!(nr.margin, int(0));
        assert!(poly.warnings.is_empty());
    }

    #[test]
    fn exponential_is_flat_above_pi() {
        let poly = fit(&scalar(2, "1", int(0), int(2)), 9);
        assert!(one_slope(&poly));
        assert_eq!((poly.segments[0].slope.clone(), poly.segments[0].intercept.clone()), (int(0), int(-1)));
        let nr = is_non_robba(&poly);
        assert!(nr.holds);
        assert_eq!((nr.margin, nr.at), (int(1), int(0)));
    }

    #[test]
    fn exponential_breakpoint() {
        let poly = fit(&scalar(2, "1", int(-2), int(2)), 17);
        assert_eq!(poly.segments.len(), 2, "{:?}", poly.segments);
        assert_eq!(poly.segments[0].slope, int(1));
        assert_eq!(poly.segments[1].slope, int(0));
        assert_eq!(poly.breakpoints(), vec![int(-1)]);
        assert!(!one_slope(&poly));
        assert!(!is_non_robba(&poly).holds);
    }

    #[test]
    fn euler_slope_one() {
        let poly = fit(&scalar(2, "1/(2*x)", int(-1), int(1)), 9);
        assert!(one_slope(&poly));
        assert_eq!((poly.segments[0].slope.clone(), poly.segments[0].intercept.clone()), (int(1), int(-2)));
        let nr = is_non_robba(&poly);
        assert!(nr.holds);
        assert_eq!(nr.margin, int(2));
    }

    #[test]
    fn envelope_clips_to_interval() {
        let line = |s: i64, c: Rational| Segment {
            from: int(0),
            to: int(0),
            slope: int(s),
            intercept: c,
            raw_slope: 0.0,
            raw_intercept: 0.0,
        };
        let iv = LogInterval::from_ints(0, 4).unwrap();
        // y = x and y = 1: breakpoint at 1; y = -x + 10 never active on [0, 4]
        let env = lower_envelope(vec![line(1, int(0)), line(0, int(1)), line(-1, int(10))], &iv);
        assert_eq!(env.len(), 2);
        assert_eq!((env[0].to.clone(), env[1].from.clone()), (int(1), int(1)));
        let env = lower_envelope(vec![line(1, int(-10)), line(0, int(1))], &iv);
        assert_eq!(env.len(), 1);
        assert_eq!(env[0].slope, int(1));
        assert_eq!(median_rational(vec![int(3), int(1), rat(1, 2), int(2)]), rat(3, 2));
    }

    #[test]
    fn rejects_small_grids() {
        let m = scalar(2, "1", int(0), int(2));
        assert!(polygon_estimate(&m, 2, 256, 32, &EstimateOptions::default()).is_err());
        assert!(polygon_estimate(&m, 5, 256, 0, &EstimateOptions::default()).is_err());
    }
}
