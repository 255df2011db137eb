//! Laurent polynomials and rational functions over `Q` with Gauss norms.
//!
//! For `f = Σ a_n x^n` the Gauss norm at `r = p^ρ` is
//! `log_p |f|_r = max_n (-v_p(a_n) + n·ρ)`, which is also `log_p |f(t_r)|`
//! at a generic point of absolute value `r`. It is multiplicative, so a
//! quotient's norm is the difference of the norms of its parts.

mod newton;
mod parse;
mod poly;
mod ratfunc;

pub(crate) use newton::lower_hull;
pub use newton::{distinct_root_log_magnitudes, newton_edges, root_log_magnitudes, NewtonEdge};
pub use parse::parse_rational_function;
pub use poly::{Coefficient, IntLaurent, LaurentPoly};
pub use ratfunc::{checked_div, interval_max_principle_check, RationalFunction};

use crate::arith::{LogMagnitude, Prime, Rational};
use crate::error::Result;

/// Gauss norm of a rational function at log-radius `rho`.
pub fn gauss_norm(f: &RationalFunction, rho: &Rational, p: Prime) -> Result<LogMagnitude> {
    f.gauss_norm(rho, p)
}
