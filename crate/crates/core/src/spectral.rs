//! Cyclic-vector reduction to a scalar operator `∂^μ + q_1 ∂^{μ-1} + … + q_μ`,
//! maximal root norms and the small-radius formula.
//!
//! Vectors are rows. For `v` the sequence `w_0 = v`, `w_{k+1} = w_k' + w_k·G`
//! gives `W` with rows `w_0, …, w_{μ-1}` and `W[G] = A_Δ`, so `H = W⁻¹`
//! satisfies `G = H[A_Δ]`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{format_rational, int, LogInterval, LogMagnitude, Prime, Rational};
use crate::diffmod::{companion_matrix, companion_of, gauge_residual, DiffModule};
use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, RationalFunction};
use crate::matrix::{Matrix, RationalFunctionMatrix};

/// The monic operator `∂^μ + q_1 ∂^{μ-1} + … + q_μ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalarOperator {
    pub p: Prime,
    #[serde(serialize_with = "ser_functions")]
    pub q: Vec<RationalFunction>,
    pub interval: LogInterval,
}

fn ser_functions<S: serde::Serializer>(q: &[RationalFunction], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(q.iter().map(|f| f.to_string_with("x")))
}

impl ScalarOperator {
    pub fn new(p: Prime, q: Vec<RationalFunction>, interval: LogInterval) -> Result<Self> {
        if q.is_empty() {
            return Err(Error::InvalidParameter("operator order must be at least 1".into()));
        }
        Ok(ScalarOperator { p, q, interval })
    }

    pub fn order(&self) -> usize {
        self.q.len()
    }

    pub fn companion(&self) -> RationalFunctionMatrix {
        companion_matrix(&self.q)
    }

    /// The companion system on `interval`.
    pub fn companion_module(&self, interval: LogInterval) -> Result<DiffModule> {
        companion_of(self.p, &self.q, interval)
    }

    fn check_pole_free(&self, rho: &Rational) -> Result<()> {
        if self.q.iter().any(|f| f.pole_log_magnitudes(self.p).contains(rho)) {
            return Err(Error::Domain { rho: format_rational(rho), domain: "the pole-free radii of the operator".into() });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CyclicReduction {
    pub operator: ScalarOperator,
    /// Change of basis with `G = H[A_Δ]`.
    pub h: RationalFunctionMatrix,
    #[serde(serialize_with = "ser_functions")]
    pub vector: Vec<RationalFunction>,
    /// Open subintervals of `I` avoiding the log-magnitudes of zeros and
    /// poles of `det H` and of poles of `H` and the `q_i`.
    pub valid_subintervals: Vec<LogInterval>,
    pub attempts: usize,
}

impl CyclicReduction {
    /// `H·A_Δ + ∂H - G·H`, which is zero for a correct reduction.
    pub fn residual(&self, g: &RationalFunctionMatrix) -> RationalFunctionMatrix {
        gauge_residual(&self.operator.companion(), &self.h, g)
    }

    /// The widest valid subinterval.
    pub fn widest_subinterval(&self) -> Option<&LogInterval> {
        self.valid_subintervals.iter().max_by(|a, b| a.width().cmp(&b.width()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CyclicOptions {
    pub seed: u64,
    /// Number of random candidates tried after the deterministic ones.
    pub random_attempts: usize,
}

impl Default for CyclicOptions {
    fn default() -> Self {
        CyclicOptions { seed: 0, random_attempts: 64 }
    }
}

fn poly_fn(terms: &[(i64, i64)]) -> RationalFunction {
    RationalFunction::from_poly(LaurentPoly::from_terms(terms.iter().map(|&(e, c)| (e, int(c)))))
}

/// Deterministic candidates: `e_i`, then `e_1 + x^k e_j`.
fn deterministic_candidates(mu: usize) -> Vec<Vec<RationalFunction>> {
    let unit = |i: usize| (0..mu).map(|j| if i == j { RationalFunction::one() } else { RationalFunction::zero() }).collect();
    let mut out: Vec<Vec<RationalFunction>> = (0..mu).map(unit).collect();
    for k in 0..=3 {
        for j in 1..mu {
            let mut v: Vec<RationalFunction> = unit(0);
            v[j] = poly_fn(&[(k, 1)]);
            out.push(v);
        }
    }
    out
}

fn random_candidate(mu: usize, rng: &mut ChaCha8Rng) -> Vec<RationalFunction> {
    (0..mu)
        .map(|_| {
            let terms: Vec<(i64, i64)> = (0..=2).map(|e| (e, rng.gen_range(-3..=3))).collect();
            poly_fn(&terms)
        })
        .collect()
}

/// Rows `w_0, …, w_μ` of the derivative sequence of the row vector `v`.
fn derivative_rows(g: &RationalFunctionMatrix, v: &[RationalFunction]) -> Vec<Vec<RationalFunction>> {
    let mu = g.size();
    let mut rows = vec![v.to_vec()];
    for _ in 0..mu {
        let w = rows.last().expect("nonempty");
        let next = (0..mu)
            .map(|j| {
                let mut acc = w[j].derivative();
                for (k, wk) in w.iter().enumerate() {
                    acc = &acc + &(wk * &g[(k, j)]);
                }
                acc
            })
            .collect();
        rows.push(next);
    }
    rows
}

/// Finds a cyclic vector and the operator it satisfies.
pub fn cyclic_vector(m: &DiffModule, opts: &CyclicOptions) -> Result<CyclicReduction> {
    let g = m.matrix();
    let mu = g.size();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let fixed = deterministic_candidates(mu);
    let total = fixed.len() + opts.random_attempts;
    for attempt in 0..total {
        let v = if attempt < fixed.len() { fixed[attempt].clone() } else { random_candidate(mu, &mut rng) };
        let mut rows = derivative_rows(g, &v);
        let w_mu = rows.pop().expect("μ+1 rows");
        let w = Matrix::from_rows(rows)?;
        if w.det().is_zero() {
            continue;
        }
        let h = w.inverse()?;
        // w_μ = c·W with c = (-q_μ, …, -q_1)
        let c: Vec<RationalFunction> = (0..mu)
            .map(|j| {
                let mut acc = RationalFunction::zero();
                for (k, wk) in w_mu.iter().enumerate() {
                    acc = &acc + &(wk * &h[(k, j)]);
                }
                acc
            })
            .collect();
        let q: Vec<RationalFunction> = c.iter().rev().map(|f| -f).collect();
        let operator = ScalarOperator::new(m.p(), q, m.interval().clone())?;
        let valid_subintervals = valid_subintervals(m.interval(), &cut_points(m.p(), &operator, &h));
        return Ok(CyclicReduction { operator, h, vector: v, valid_subintervals, attempts: attempt + 1 });
    }
    Err(Error::CyclicSearchFailed { attempts: total, seed: opts.seed })
}

fn cut_points(p: Prime, op: &ScalarOperator, h: &RationalFunctionMatrix) -> Vec<Rational> {
    let det = h.det();
    let mut cuts: Vec<Rational> = det.zero_log_magnitudes(p);
    cuts.extend(det.pole_log_magnitudes(p));
    cuts.extend(h.pole_log_magnitudes(p));
    for f in &op.q {
        cuts.extend(f.pole_log_magnitudes(p));
    }
    cuts.sort();
    cuts.dedup();
    cuts
}

/// `I` minus finitely many points, as open subintervals.
fn valid_subintervals(interval: &LogInterval, cuts: &[Rational]) -> Vec<LogInterval> {
    let mut ends = vec![interval.lo().clone()];
    ends.extend(cuts.iter().filter(|c| interval.contains(c)).cloned());
    ends.push(interval.hi().clone());
    ends.windows(2).filter_map(|w| LogInterval::new(w[0].clone(), w[1].clone()).ok()).collect()
}

/// `log λ(ρ) = max_i log|q_i|_ρ / i`, the largest root log-magnitude of
/// `λ^μ + q_1 λ^{μ-1} + … + q_μ` at a generic point of `|x| = p^ρ`.
pub fn max_root_norm(op: &ScalarOperator, rho: &Rational) -> Result<LogMagnitude> {
    op.check_pole_free(rho)?;
    let mut best = LogMagnitude::Bottom;
    for (i, f) in op.q.iter().enumerate() {
        best = best.max_with(f.gauss_norm(rho, op.p)?.root(i as u64 + 1));
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct YoungRadius {
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub rho: Rational,
    pub log_lambda: LogMagnitude,
    /// `log π - log λ`; absent when every `q_i` vanishes.
    #[serde(serialize_with = "crate::report::ser_opt_rational")]
    pub log_r: Option<Rational>,
    /// `log R < ρ + log π`, the small-radius regime.
    pub applicable: bool,
}

/// `R = |π| / λ(r)`, valid in the small-radius regime `R < |π| r`.
pub fn young_radius(op: &ScalarOperator, rho: &Rational) -> Result<YoungRadius> {
    let log_lambda = max_root_norm(op, rho)?;
    let log_pi = op.p.log_pi();
    let log_r = log_lambda.finite().map(|l| &log_pi - l);
    let applicable = log_r.as_ref().is_some_and(|r| r < &(rho + &log_pi));
    Ok(YoungRadius { rho: rho.clone(), log_lambda, log_r, applicable })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::laurent::parse_rational_function;

    fn f(s: &str) -> RationalFunction {
        parse_rational_function(s, "x").unwrap()
    }

    fn p2() -> Prime {
        Prime::new(2).unwrap()
    }

    fn iv(lo: i64, hi: i64) -> LogInterval {
        LogInterval::from_ints(lo, hi).unwrap()
    }

    #[test]
    fn rank_one() {
        let m = DiffModule::scalar(p2(), f("x + 1/x"), iv(1, 2)).unwrap();
        let red = cyclic_vector(&m, &CyclicOptions::default()).unwrap();
        assert_eq!(red.operator.q, vec![f("-x - 1/x")]);
        assert_eq!(red.h, Matrix::identity(1));
        assert!(red.residual(m.matrix()).is_zero());
        assert_eq!(red.attempts, 1);
    }

    #[test]
    fn companion_is_its_own_reduction() {
        let q = vec![f("1/(3+x)"), f("x^2"), f("-7/2")];
        let m = companion_of(p2(), &q, iv(1, 2)).unwrap();
        let red = cyclic_vector(&m, &CyclicOptions::default()).unwrap();
        assert_eq!(red.operator.q, q);
        assert_eq!(red.h, Matrix::identity(3));
    }

    #[test]
    fn diagonal_needs_a_mixed_vector() {
        let g = Matrix::diagonal(vec![f("0"), f("1/x")]);
        let m = DiffModule::new(p2(), g, iv(-1, 1)).unwrap();
        let red = cyclic_vector(&m, &CyclicOptions::default()).unwrap();
        assert!(red.attempts > 2);
        assert!(red.residual(m.matrix()).is_zero());
        assert!(!red.valid_subintervals.is_empty());
    }

    #[test]
    fn search_order_and_failure() {
        // for G = 0 and μ = 3 every deterministic candidate has a vanishing second derivative
        let m = DiffModule::new(p2(), Matrix::zeros(3), iv(-1, 1)).unwrap();
        let err = cyclic_vector(&m, &CyclicOptions { seed: 7, random_attempts: 0 }).unwrap_err();
        assert_eq!(err, Error::CyclicSearchFailed { attempts: 11, seed: 7 });
        let red = cyclic_vector(&m, &CyclicOptions { seed: 7, random_attempts: 8 }).unwrap();
        assert!(red.attempts > 11);
        assert!(red.operator.q.iter().all(|q| q.is_zero()));
        assert!(red.residual(m.matrix()).is_zero());
        let again = cyclic_vector(&m, &CyclicOptions { seed: 7, random_attempts: 8 }).unwrap();
        assert_eq!(again.vector, red.vector);
    }

    #[test]
    fn subintervals_avoid_cuts() {
        let parts = valid_subintervals(&iv(-2, 2), &[int(-3), int(0), rat(1, 2), int(2)]);
        let ends: Vec<_> = parts.iter().map(|i| (i.lo().clone(), i.hi().clone())).collect();
        assert_eq!(ends, vec![(int(-2), int(0)), (int(0), rat(1, 2)), (rat(1, 2), int(2))]);
    }

    #[test]
    fn root_norms() {
        let op = |q: &[&str]| ScalarOperator::new(p2(), q.iter().map(|s| f(s)).collect(), iv(-1, 1)).unwrap();
        assert_eq!(max_root_norm(&op(&["0", "0"]), &int(0)).unwrap(), LogMagnitude::Bottom);
        assert_eq!(max_root_norm(&op(&["-4"]), &int(0)).unwrap(), LogMagnitude::Finite(int(-2)));
        assert_eq!(max_root_norm(&op(&["-3", "2"]), &int(0)).unwrap(), LogMagnitude::Finite(int(0)));
        assert_eq!(max_root_norm(&op(&["0", "-1/16"]), &int(0)).unwrap(), LogMagnitude::Finite(int(2)));
        let with_pole = ScalarOperator::new(p2(), vec![f("1/(x-2)")], iv(-2, 0)).unwrap();
        assert!(matches!(max_root_norm(&with_pole, &int(-1)), Err(Error::Domain { .. })));
    }

    #[test]
    fn young_regime() {
        let op = |a: &str| ScalarOperator::new(p2(), vec![f(a)], iv(-1, 1)).unwrap();
        let y = young_radius(&op("-1/4"), &int(0)).unwrap();
        assert_eq!(y.log_r, Some(int(-3)));
        assert!(y.applicable);
        let y = young_radius(&op("-1"), &int(0)).unwrap();
        assert_eq!(y.log_r, Some(int(-1)));
        assert!(!y.applicable);
        let zero = ScalarOperator::new(p2(), vec![f("0"), f("0")], iv(-1, 1)).unwrap();
        let y = young_radius(&zero, &int(0)).unwrap();
        assert_eq!((y.log_r, y.applicable), (None, false));
        let comp = ScalarOperator::new(p2(), vec![f("0"), f("-1/16")], iv(-1, 1)).unwrap();
        assert_eq!(young_radius(&comp, &int(0)).unwrap().log_r, Some(int(-3)));
    }
}
