//! Built-in modules with known convergence polygons.

use serde::Serialize;

use crate::arith::{int, parse_rational, valuation, LogInterval, Prime, Rational};
use crate::diffmod::{companion_matrix, frobenius_pullback, DiffModule};
use crate::error::{Error, Result};
use crate::laurent::{parse_rational_function, RationalFunction};
use crate::matrix::{Matrix, RationalFunctionMatrix};

/// Why an expected value can be trusted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Basis {
    /// Immediate from the definitions.
    Trivial,
    /// Follows from an explicit formula for the solutions.
    ClosedForm,
    /// No expected value is recorded.
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Line {
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub slope: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub intercept: Rational,
}

impl Line {
    pub fn new(slope: Rational, intercept: Rational) -> Self {
        Line { slope, intercept }
    }
}

/// `log R(ρ) = min_k (β_k ρ + c_k)`, known below `valid_below` when present.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpectedPolygon {
    pub lines: Vec<Line>,
    #[serde(serialize_with = "crate::report::ser_opt_rational")]
    pub valid_below: Option<Rational>,
}

impl ExpectedPolygon {
    pub fn eval(&self, rho: &Rational) -> Rational {
        self.lines.iter().map(|l| &l.slope * rho + &l.intercept).min().expect("at least one line")
    }

    pub fn covers(&self, rho: &Rational) -> bool {
        self.valid_below.as_ref().is_none_or(|b| rho < b)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub params: Vec<String>,
    pub p: Prime,
    pub matrix: RationalFunctionMatrix,
    pub default_interval: LogInterval,
    pub expected: Option<ExpectedPolygon>,
    pub robba: Option<bool>,
    pub boundedness: String,
    pub basis: Basis,
}

impl CatalogEntry {
    /// The module on `interval`, or on the default interval.
    pub fn module(&self, interval: Option<LogInterval>) -> Result<DiffModule> {
        DiffModule::new(self.p, self.matrix.clone(), interval.unwrap_or_else(|| self.default_interval.clone()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogInfo {
    pub name: &'static str,
    pub params: &'static str,
    pub description: &'static str,
}

pub fn catalog_list() -> Vec<CatalogInfo> {
    vec![
        CatalogInfo { name: "zero", params: "", description: "G = (0); log R = ρ, a Robba module" },
        CatalogInfo {
            name: "exp",
            params: "alpha (nonzero, default 1)",
            description: "G = (α); log R = min(ρ, log π - log|α|)",
        },
        CatalogInfo {
            name: "euler",
            params: "a with |a| > 1 (default 1/p)",
            description: "G = (a/x); log R = ρ + log π - log|a|",
        },
        CatalogInfo {
            name: "companion",
            params: "q_1, …, q_μ (rational functions in x)",
            description: "companion matrix of ∂^μ + q_1 ∂^{μ-1} + … + q_μ",
        },
        CatalogInfo {
            name: "pullback-exp",
            params: "alpha (default 1), h (default 1)",
            description: "h-fold Frobenius pullback of exp(α); log R = min(ρ, (log π - log|α|)/p^h) below (1 - log|α|)/p^h",
        },
    ]
}

fn scalar_matrix(g: RationalFunction) -> RationalFunctionMatrix {
    Matrix::from_fn(1, |_, _| g.clone())
}

fn param(params: &[String], i: usize, default: Rational) -> Result<Rational> {
    match params.get(i) {
        Some(s) => parse_rational(s.trim()),
        None => Ok(default),
    }
}

fn too_many(name: &str, params: &[String], max: usize) -> Result<()> {
    if params.len() > max {
        return Err(Error::InvalidParameter(format!("{name} takes at most {max} parameters, got {}", params.len())));
    }
    Ok(())
}

/// `log_p |a|` for nonzero `a`.
fn log_abs(a: &Rational, p: Prime) -> Rational {
    int(-valuation(a, p).expect("nonzero"))
}

pub fn catalog_get(name: &str, p: Prime, params: &[String]) -> Result<CatalogEntry> {
    let default_interval = LogInterval::from_ints(-2, 2)?;
    let log_pi = p.log_pi();
    let diagonal = Line::new(int(1), int(0));
    let entry = |matrix, default_interval, expected, robba, boundedness: &str, basis| CatalogEntry {
        name: name.to_string(),
        params: params.to_vec(),
        p,
        matrix,
        default_interval,
        expected,
        robba,
        boundedness: boundedness.to_string(),
        basis,
    };
    match name {
        "zero" => {
            too_many(name, params, 0)?;
            Ok(entry(
                scalar_matrix(RationalFunction::zero()),
                default_interval,
                Some(ExpectedPolygon { lines: vec![diagonal], valid_below: None }),
                Some(true),
                "bounded: G_n = 0 for n ≥ 1",
                Basis::Trivial,
            ))
        }
        "exp" => {
            too_many(name, params, 1)?;
            let alpha = param(params, 0, int(1))?;
            if alpha == int(0) {
                return Err(Error::InvalidParameter("exp needs α ≠ 0; use `zero` instead".into()));
            }
            let c = &log_pi - log_abs(&alpha, p);
            Ok(entry(
                scalar_matrix(RationalFunction::constant(alpha)),
                default_interval,
                Some(ExpectedPolygon { lines: vec![diagonal, Line::new(int(0), c)], valid_below: None }),
                Some(false),
                "bounded: b_n = -s_p(n)/(p-1) where log R < ρ",
                Basis::ClosedForm,
            ))
        }
        "euler" => {
            too_many(name, params, 1)?;
            let a = param(params, 0, Rational::new(1.into(), p.as_bigint()))?;
            if a == int(0) || valuation(&a, p).expect("nonzero") >= 0 {
                return Err(Error::InvalidParameter(format!("euler needs |a|_{p} > 1, got a = {a}")));
            }
            let c = &log_pi - log_abs(&a, p);
            let g = RationalFunction::from_poly(crate::laurent::LaurentPoly::monomial(a, -1));
            Ok(entry(
                scalar_matrix(g),
                default_interval,
                Some(ExpectedPolygon { lines: vec![Line::new(int(1), c)], valid_below: None }),
                Some(false),
                "bounded: b_n = -s_p(n)/(p-1)",
                Basis::ClosedForm,
            ))
        }
        "companion" => {
            if params.is_empty() {
                return Err(Error::InvalidParameter("companion needs at least one coefficient q_1".into()));
            }
            let q: Vec<RationalFunction> =
                params.iter().map(|s| parse_rational_function(s, "x")).collect::<Result<_>>()?;
            Ok(entry(companion_matrix(&q), LogInterval::from_ints(-1, 1)?, None, None, "unknown", Basis::Unknown))
        }
        "pullback-exp" => {
            too_many(name, params, 2)?;
            let alpha = param(params, 0, int(1))?;
            if alpha == int(0) {
                return Err(Error::InvalidParameter("pullback-exp needs α ≠ 0".into()));
            }
            let h = param(params, 1, int(1))?;
            let h: u32 = match (h.is_integer(), h.to_integer().try_into()) {
                (true, Ok(h)) if (1..=8).contains(&h) => h,
                _ => return Err(Error::InvalidParameter(format!("h must be an integer in 1..=8, got {h}"))),
            };
            let q = int(p.get() as i64).pow(h as i32);
            let base = DiffModule::scalar(p, RationalFunction::constant(alpha.clone()), default_interval.clone())?;
            let m = frobenius_pullback(&base, h)?;
            let la = log_abs(&alpha, p);
            let expected = ExpectedPolygon {
                lines: vec![diagonal, Line::new(int(0), (&log_pi - &la) / &q)],
                valid_below: Some((int(1) - la) / q),
            };
            Ok(entry(
                m.matrix().clone(),
                m.interval().clone(),
                Some(expected),
                None,
                "bounded where the Frobenius relation applies",
                Basis::ClosedForm,
            ))
        }
        other => Err(Error::UnknownCatalog(other.to_string())),
    }
}
