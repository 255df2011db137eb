//! Differential modules `∂X = GX` on an annulus and their exact transformations.

mod recursion;

pub use recursion::{
    gn_sequence, gn_sequence_with, norm_sequence, norm_sequence_float, Budget, NormProfile, NormSequence,
    Normalization, RecursionState, TaylorRecursion, DEFAULT_DEPTH,
};

use serde::Serialize;

use crate::arith::{int, LogInterval, Prime, Rational};
use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, RationalFunction};
use crate::matrix::{Matrix, RationalFunctionMatrix};

/// A differential module of rank `μ` over the annulus `{ρ ∈ I}`, given by the
/// matrix `G` of `∂ = d/dx` in some basis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiffModule {
    p: Prime,
    matrix: RationalFunctionMatrix,
    interval: LogInterval,
}

impl DiffModule {
    /// Fails when some entry of `matrix` has a pole on the annulus.
    pub fn new(p: Prime, matrix: RationalFunctionMatrix, interval: LogInterval) -> Result<Self> {
        let m = Self::new_unchecked(p, matrix, interval);
        let poles = m.poles_on_interval();
        if !poles.is_empty() {
            let shown: Vec<String> = poles.iter().map(crate::arith::format_rational).collect();
            return Err(Error::InvalidInput(format!(
                "matrix has poles of log-magnitude {} inside {}",
                shown.join(", "),
                m.interval
            )));
        }
        Ok(m)
    }

    /// Skips the pole check; see [`DiffModule::poles_on_interval`].
    pub fn new_unchecked(p: Prime, matrix: RationalFunctionMatrix, interval: LogInterval) -> Self {
        DiffModule { p, matrix, interval }
    }

    /// A rank-one module `∂ - g`.
    pub fn scalar(p: Prime, g: RationalFunction, interval: LogInterval) -> Result<Self> {
        Self::new(p, Matrix::from_fn(1, |_, _| g.clone()), interval)
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn rank(&self) -> usize {
        self.matrix.size()
    }

    pub fn matrix(&self) -> &RationalFunctionMatrix {
        &self.matrix
    }

    pub fn interval(&self) -> &LogInterval {
        &self.interval
    }

    /// Same matrix on another annulus; re-checks poles.
    pub fn with_interval(&self, interval: LogInterval) -> Result<Self> {
        Self::new(self.p, self.matrix.clone(), interval)
    }

    /// Log-magnitudes of poles of `G` that fall inside the open interval.
    pub fn poles_on_interval(&self) -> Vec<Rational> {
        self.matrix.pole_log_magnitudes(self.p).into_iter().filter(|m| self.interval.contains(m)).collect()
    }

    pub fn is_pole_free(&self) -> bool {
        self.poles_on_interval().is_empty()
    }

    /// Direct sum `M ⊕ N` (block-diagonal matrix).
    pub fn direct_sum(&self, other: &DiffModule) -> Result<Self> {
        if self.p != other.p || self.interval != other.interval {
            return Err(Error::InvalidInput("direct sum needs the same prime and interval".into()));
        }
        let (a, b) = (self.rank(), other.rank());
        let m = Matrix::from_fn(a + b, |i, j| match (i < a, j < a) {
            (true, true) => self.matrix[(i, j)].clone(),
            (false, false) => other.matrix[(i - a, j - a)].clone(),
            _ => RationalFunction::zero(),
        });
        Ok(Self::new_unchecked(self.p, m, self.interval.clone()))
    }
}

/// Result of a change of basis; the new matrix may acquire poles.
#[derive(Debug, Clone)]
pub struct GaugeOutcome {
    pub module: DiffModule,
    /// Log-magnitudes of poles of the new matrix inside the interval.
    pub poles_on_interval: Vec<Rational>,
}

impl GaugeOutcome {
    pub fn pole_free(&self) -> bool {
        self.poles_on_interval.is_empty()
    }
}

/// `H[G] = H·G·H⁻¹ + ∂(H)·H⁻¹`, the matrix in the basis `e'_i = Σ_j H_ij e_j`.
pub fn gauge_transform(m: &DiffModule, h: &RationalFunctionMatrix) -> Result<GaugeOutcome> {
    if h.size() != m.rank() {
        return Err(Error::InvalidGauge(format!("gauge has size {}, module has rank {}", h.size(), m.rank())));
    }
    if h.det().is_zero() {
        return Err(Error::InvalidGauge("determinant vanishes identically".into()));
    }
    let h_inv = h.inverse()?;
    let g = &(&(h * m.matrix()) + &h.derivative()) * &h_inv;
    let module = DiffModule::new_unchecked(m.p, g, m.interval.clone());
    let poles_on_interval = module.poles_on_interval();
    Ok(GaugeOutcome { module, poles_on_interval })
}

/// `H·G + ∂H - H[G]·H`, identically zero for a correct gauge pair.
pub fn gauge_residual(
    g: &RationalFunctionMatrix,
    h: &RationalFunctionMatrix,
    transformed: &RationalFunctionMatrix,
) -> RationalFunctionMatrix {
    &(&(h * g) + &h.derivative()) - &(transformed * h)
}

/// `h`-fold pullback along `x ↦ x^p`: one step sends `F(z)` to
/// `p·x^{p-1}·F(x^p)` and the annulus `ρ ∈ I` to `ρ ∈ I/p`.
pub fn frobenius_pullback(n: &DiffModule, h: u32) -> Result<DiffModule> {
    if h == 0 {
        return Err(Error::InvalidParameter("pullback order must be positive".into()));
    }
    let p = n.p;
    let factor = RationalFunction::from_poly(LaurentPoly::monomial(int(p.get() as i64), p.get() as i64 - 1));
    let mut matrix = n.matrix.clone();
    let mut interval = n.interval.clone();
    let inv_p = Rational::new(1.into(), (p.get() as i64).into());
    for _ in 0..h {
        matrix = matrix.compose_power(p.get()).scale(&factor);
        interval = interval.scaled(&inv_p);
    }
    DiffModule::new(p, matrix, interval)
}

/// The module `∂X = A_Δ X` of the operator `∂^μ + q_1 ∂^{μ-1} + … + q_μ`:
/// ones on the superdiagonal and last row `(-q_μ, …, -q_1)`.
pub fn companion_of(p: Prime, q: &[RationalFunction], interval: LogInterval) -> Result<DiffModule> {
    let mu = q.len();
    if mu == 0 {
        return Err(Error::InvalidParameter("operator order must be at least 1".into()));
    }
    DiffModule::new(p, companion_matrix(q), interval)
}

pub fn companion_matrix(q: &[RationalFunction]) -> RationalFunctionMatrix {
    let mu = q.len();
    Matrix::from_fn(mu, |i, j| {
        if i + 1 == mu {
            -&q[mu - 1 - j]
        } else if j == i + 1 {
            RationalFunction::one()
        } else {
            RationalFunction::zero()
        }
    })
}
