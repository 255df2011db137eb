//! Newton polygons of polynomials over `Q` with respect to `v_p`.

use num_bigint::BigInt;

use crate::arith::{Prime, Rational};

use super::poly::{Coefficient, LaurentPoly};

/// One edge of the lower convex hull of `{(n, v_p(a_n))}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonEdge {
    /// Slope of the edge. Over an algebraically closed valued field the
    /// polynomial has exactly `multiplicity` roots of log-magnitude `slope`.
    pub slope: Rational,
    pub multiplicity: u64,
}

/// Lower convex hull of a point set sorted by abscissa.
pub(crate) fn lower_hull(points: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut hull: Vec<(i64, i64)> = Vec::with_capacity(points.len());
    for &pt in points {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop b unless it lies strictly below the chord a–pt
            let cross = (b.0 - a.0) as i128 * (pt.1 - a.1) as i128 - (b.1 - a.1) as i128 * (pt.0 - a.0) as i128;
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    hull
}

/// Edges of the Newton polygon, ordered by increasing slope.
///
/// A factor `x^k` (roots at zero) contributes nothing; a constant has no edges.
pub fn newton_edges<C: Coefficient>(f: &LaurentPoly<C>, p: Prime) -> Vec<NewtonEdge> {
    let pts = f.valuation_points(p);
    let hull = lower_hull(&pts);
    hull.windows(2)
        .map(|w| {
            let (dx, dy) = (w[1].0 - w[0].0, w[1].1 - w[0].1);
            NewtonEdge {
                slope: Rational::new(BigInt::from(dy), BigInt::from(dx)),
                multiplicity: dx as u64,
            }
        })
        .collect()
}

/// Log-magnitudes `log_p |α|` of the nonzero roots of `f`, with multiplicity.
pub fn root_log_magnitudes<C: Coefficient>(f: &LaurentPoly<C>, p: Prime) -> Vec<Rational> {
    newton_edges(f, p)
        .into_iter()
        .flat_map(|e| std::iter::repeat_n(e.slope, e.multiplicity as usize))
        .collect()
}

/// Distinct root log-magnitudes, increasing.
pub fn distinct_root_log_magnitudes<C: Coefficient>(f: &LaurentPoly<C>, p: Prime) -> Vec<Rational> {
    newton_edges(f, p).into_iter().map(|e| e.slope).collect()
}
