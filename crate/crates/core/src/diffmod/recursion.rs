//! The Taylor recursion `G_0 = I`, `G_{n+1} = ∂G_n + G_n·G` and the norms
//! `log_p ||G_n/n!||_r` of the generic solution matrix.
//!
//! With a common denominator `G = P/Q` (integer coefficients) every term is
//! `G_n = P_n/Q^n` where
//!
//! ```text
//! P_{n+1} = Q·∂P_n - n·∂Q·P_n + P_n·P
//! ```
//!
//! so each step is a handful of integer polynomial products.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{factorial_valuation, int, rational_to_f64, valuation_int, LogMagnitude, LogValue, Prime, Rational};
use crate::error::{Error, Result};
use crate::laurent::{lower_hull, IntLaurent, LaurentPoly, RationalFunction};
use crate::matrix::{Matrix, RationalFunctionMatrix};

use super::DiffModule;

pub const DEFAULT_DEPTH: usize = 256;

/// Resource guard for the recursion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_depth: usize,
    /// Upper bound on the total coefficient size of one `P_n`, in bits.
    pub max_bits: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_depth: 8192, max_bits: 1 << 33 }
    }
}

impl Budget {
    fn check_depth(&self, n: usize) -> Result<()> {
        if n > self.max_depth {
            return Err(Error::BudgetExceeded(format!("depth {n} exceeds the limit {}", self.max_depth)));
        }
        Ok(())
    }
}

/// Whether the norm sequence divides by `n!`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// `||G_n/n!||_r`, the coefficients of the generic solution matrix.
    #[default]
    Factorial,
    /// `||G_n||_r` without the factorial.
    Plain,
}

/// Splits `G` as `P/Q` with `Q` a common denominator; both have integer coefficients.
fn integral_form(g: &RationalFunctionMatrix) -> (IntLaurent, Matrix<IntLaurent>) {
    let mut q = LaurentPoly::<Rational>::one();
    for f in g.entries() {
        let d = f.den();
        let common = q.gcd(d);
        q = &q * &d.exact_div(&common).expect("gcd divides");
    }
    let numerators = g.map(|f| {
        let cofactor = q.exact_div(f.den()).expect("common denominator");
        f.num() * &cofactor
    });
    let lcm = numerators
        .entries()
        .chain(std::iter::once(&q))
        .flat_map(|f| f.terms().map(|(_, c)| c.denom().clone()).collect::<Vec<_>>())
        .fold(BigInt::one(), |acc, d| acc.lcm(&d));
    let scale = Rational::from_integer(lcm);
    let to_int = |f: &LaurentPoly<Rational>| f.scale(&scale).map_coeffs(|c| c.to_integer());
    (to_int(&q), numerators.map(to_int))
}

/// Streaming evaluation of `P_n`.
#[derive(Debug, Clone)]
pub struct TaylorRecursion {
    q: IntLaurent,
    dq: IntLaurent,
    p: Matrix<IntLaurent>,
    current: Matrix<IntLaurent>,
    n: usize,
}

impl TaylorRecursion {
    pub fn new(m: &DiffModule) -> Self {
        let (q, p) = integral_form(m.matrix());
        let dq = q.derivative();
        TaylorRecursion { q, dq, current: Matrix::identity(p.size()), p, n: 0 }
    }

    pub fn denominator(&self) -> &IntLaurent {
        &self.q
    }

    pub fn numerator(&self) -> &Matrix<IntLaurent> {
        &self.p
    }

    pub fn index(&self) -> usize {
        self.n
    }

    /// `P_n` for the current index `n`.
    pub fn current(&self) -> &Matrix<IntLaurent> {
        &self.current
    }

    pub fn current_bits(&self) -> u64 {
        self.current.entries().map(|f| f.bits()).sum()
    }

    /// Advances from `P_n` to `P_{n+1}`.
    pub fn step(&mut self) {
        let mu = self.p.size();
        let n = BigInt::from(self.n as u64);
        let cur = &self.current;
        let (q, dq, p) = (&self.q, &self.dq, &self.p);
        let entries: Vec<IntLaurent> = (0..mu * mu)
            .into_par_iter()
            .map(|idx| {
                let (i, j) = (idx / mu, idx % mu);
                let pij = &cur[(i, j)];
                let mut acc = q * &pij.derivative();
                if !n.is_zero() && !pij.is_zero() && !dq.is_zero() {
                    acc = &acc - &(dq * pij).scale(&n);
                }
                for k in 0..mu {
                    if !cur[(i, k)].is_zero() && !p[(k, j)].is_zero() {
                        acc = &acc + &(&cur[(i, k)] * &p[(k, j)]);
                    }
                }
                acc
            })
            .collect();
        let mut it = entries.into_iter();
        self.current = Matrix::from_fn(mu, |_, _| it.next().unwrap());
        self.n += 1;
    }

    /// Divides `P_n` by the gcd of all its coefficients and returns that
    /// gcd. The recursion is linear in `P_n`, so later terms scale with it.
    fn strip_content(&mut self) -> Option<BigInt> {
        let mut g = BigInt::zero();
        for f in self.current.entries() {
            for (_, c) in f.terms() {
                g = g.gcd(c);
                if g.is_one() {
                    return None;
                }
            }
        }
        if g.is_zero() {
            return None;
        }
        let g = g.abs();
        self.current = self.current.map(|f| f.map_coeffs(|c| c / &g));
        Some(g)
    }
}

/// `Q` and the retained terms `P_0, …, P_N` with `G_n = P_n/Q^n`.
#[derive(Debug, Clone)]
pub struct RecursionState {
    q: IntLaurent,
    p: Matrix<IntLaurent>,
    terms: Vec<Matrix<IntLaurent>>,
}

impl RecursionState {
    pub fn denominator(&self) -> &IntLaurent {
        &self.q
    }

    pub fn numerator(&self) -> &Matrix<IntLaurent> {
        &self.p
    }

    /// Index of the last retained term.
    pub fn depth(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn p_n(&self, n: usize) -> &Matrix<IntLaurent> {
        &self.terms[n]
    }

    /// `G_n = P_n/Q^n` as a matrix of rational functions.
    pub fn g_n(&self, n: usize) -> RationalFunctionMatrix {
        let qn = self.q.pow(n as u32).to_rational();
        self.terms[n].map(|f| RationalFunction::new(f.to_rational(), qn.clone()).expect("Q is nonzero"))
    }
}

/// Runs the recursion to depth `n_max`, retaining every `P_n`.
pub fn gn_sequence(m: &DiffModule, n_max: usize) -> Result<RecursionState> {
    gn_sequence_with(m, n_max, &Budget::default())
}

pub fn gn_sequence_with(m: &DiffModule, n_max: usize, budget: &Budget) -> Result<RecursionState> {
    budget.check_depth(n_max)?;
    let mut rec = TaylorRecursion::new(m);
    let mut terms = vec![rec.current().clone()];
    let mut total = 0u64;
    while rec.index() < n_max {
        rec.step();
        total += rec.current_bits();
        if total > budget.max_bits {
            return Err(Error::BudgetExceeded(format!(
                "retained terms exceed {} bits at n = {}",
                budget.max_bits,
                rec.index()
            )));
        }
        terms.push(rec.current().clone());
    }
    Ok(RecursionState { q: rec.q, p: rec.p, terms })
}

/// Vertices of the lower hull of `{(e, v_p(a_e))}` over all entries; enough
/// to evaluate `max_ij log_p |(P_n)_ij|_r` at any `ρ`.
fn valuation_hull(m: &Matrix<IntLaurent>, p: Prime) -> Vec<(i64, i64)> {
    let per_entry: Vec<Vec<(i64, i64)>> = m.entries().collect::<Vec<_>>().par_iter().map(|f| f.valuation_points(p)).collect();
    let mut best: BTreeMap<i64, i64> = BTreeMap::new();
    for (e, v) in per_entry.into_iter().flatten() {
        best.entry(e).and_modify(|w| *w = (*w).min(v)).or_insert(v);
    }
    let pts: Vec<(i64, i64)> = best.into_iter().collect();
    lower_hull(&pts)
}

fn hull_max_exact(hull: &[(i64, i64)], rho: &Rational) -> Option<Rational> {
    hull.iter().map(|&(e, v)| int(e) * rho - int(v)).max()
}

fn hull_max_f64(hull: &[(i64, i64)], rho: f64) -> Option<f64> {
    hull.iter().map(|&(e, v)| e as f64 * rho - v as f64).max_by(|a, b| a.total_cmp(b))
}

/// ρ-independent summary of `P_0, …, P_N`: for each `n` the valuation hull
/// of `P_n` and `v_p` of any content divided out along the way.
#[derive(Debug, Clone)]
pub struct NormProfile {
    p: Prime,
    q_hull: Vec<(i64, i64)>,
    hulls: Vec<Vec<(i64, i64)>>,
    content_valuation: Vec<i64>,
}

impl NormProfile {
    pub fn build(m: &DiffModule, n_max: usize, budget: &Budget) -> Result<Self> {
        budget.check_depth(n_max)?;
        let p = m.p();
        let mut rec = TaylorRecursion::new(m);
        let q_hull = valuation_hull(&Matrix::from_fn(1, |_, _| rec.denominator().clone()), p);
        let mut hulls = Vec::with_capacity(n_max + 1);
        let mut content_valuation = Vec::with_capacity(n_max + 1);
        let mut acc = 0i64;
        hulls.push(valuation_hull(rec.current(), p));
        content_valuation.push(0);
        while rec.index() < n_max {
            rec.step();
            if let Some(c) = rec.strip_content() {
                acc += valuation_int(&c, p).unwrap_or(0) as i64;
            }
            let bits = rec.current_bits();
            if bits > budget.max_bits {
                return Err(Error::BudgetExceeded(format!(
                    "P_{} needs {bits} bits, limit {}",
                    rec.index(),
                    budget.max_bits
                )));
            }
            hulls.push(valuation_hull(rec.current(), p));
            content_valuation.push(acc);
        }
        Ok(NormProfile { p, q_hull, hulls, content_valuation })
    }

    pub fn from_state(state: &RecursionState, p: Prime) -> Self {
        NormProfile {
            p,
            q_hull: valuation_hull(&Matrix::from_fn(1, |_, _| state.q.clone()), p),
            hulls: state.terms.iter().map(|t| valuation_hull(t, p)).collect(),
            content_valuation: vec![0; state.terms.len()],
        }
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn depth(&self) -> usize {
        self.hulls.len() - 1
    }

    fn log_factorial_correction(&self, n: usize, normalization: Normalization) -> i64 {
        match normalization {
            Normalization::Factorial => factorial_valuation(n as u64, self.p) as i64,
            Normalization::Plain => 0,
        }
    }

    /// `log_p ||G_n/n!||_r` (or `||G_n||_r`), exactly.
    pub fn entry(&self, n: usize, rho: &Rational, normalization: Normalization) -> LogMagnitude {
        let Some(top) = hull_max_exact(&self.hulls[n], rho) else {
            return LogMagnitude::Bottom;
        };
        let q = hull_max_exact(&self.q_hull, rho).expect("Q is nonzero");
        let shift = self.log_factorial_correction(n, normalization) - self.content_valuation[n];
        LogMagnitude::Finite(top - q * int(n as i64) + int(shift))
    }

    /// Same as [`NormProfile::entry`] in double precision; `-∞` for a zero matrix.
    pub fn entry_f64(&self, n: usize, rho: f64, normalization: Normalization) -> f64 {
        let Some(top) = hull_max_f64(&self.hulls[n], rho) else {
            return f64::NEG_INFINITY;
        };
        let q = hull_max_f64(&self.q_hull, rho).expect("Q is nonzero");
        let shift = self.log_factorial_correction(n, normalization) - self.content_valuation[n];
        top - q * n as f64 + shift as f64
    }

    pub fn sequence(&self, rho: &Rational, normalization: Normalization) -> NormSequence {
        NormSequence {
            rho: rho.clone(),
            entries: (0..=self.depth()).map(|n| self.entry(n, rho, normalization).into()).collect(),
        }
    }

    pub fn sequence_f64(&self, rho: &Rational, normalization: Normalization) -> NormSequence {
        let r = rational_to_f64(rho);
        NormSequence {
            rho: rho.clone(),
            entries: (0..=self.depth())
                .map(|n| match self.entry_f64(n, r, normalization) {
                    x if x == f64::NEG_INFINITY => LogValue::Bottom,
                    x => LogValue::Float(x),
                })
                .collect(),
        }
    }
}

/// `entries[n] = log_p ||G_n/n!||_r` at `rho`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormSequence {
    pub rho: Rational,
    pub entries: Vec<LogValue>,
}

fn check_rho(m: &DiffModule, rho: &Rational) -> Result<()> {
    if !m.interval().closure_contains(rho) {
        return Err(m.interval().domain_error(rho));
    }
    Ok(())
}

/// Exact norm sequence of the generic solution matrix up to `n_max`.
pub fn norm_sequence(m: &DiffModule, rho: &Rational, n_max: usize) -> Result<NormSequence> {
    check_rho(m, rho)?;
    Ok(NormProfile::build(m, n_max, &Budget::default())?.sequence(rho, Normalization::Factorial))
}

/// Float-mode variant of [`norm_sequence`].
pub fn norm_sequence_float(m: &DiffModule, rho: &Rational, n_max: usize) -> Result<NormSequence> {
    check_rho(m, rho)?;
    Ok(NormProfile::build(m, n_max, &Budget::default())?.sequence_f64(rho, Normalization::Factorial))
}
