//! The TOML run configuration.
//!
//! ```toml
//! [module]
//! p = 2
//! variable = "x"
//! matrix = [["0", "1"], ["-1/x^2", "1/x"]]
//! # or a catalog entry instead of a matrix
//! # catalog = "exp"
//! # params = ["1"]
//!
//! [interval]
//! radii = ["1", "4"]        # r1 < r2
//! # log_radii = ["0", "2"]  # ρ1 < ρ2, base p
//!
//! [run]
//! depth = 256
//! grid = 17
//! max_denominator = 32
//! mode = "exact"            # or "float"
//! method = "tail-min"       # or "tail-slope" (float mode only)
//! normalization = "factorial"
//! tolerance = 0.02
//! seed = 0
//! rho = "1/2"
//! log_r = "-1"
//! h = 1
//!
//! [output]
//! json = "report.json"
//! csv = "norms.csv"
//! svg = "polygon.svg"
//! module = "pullback.toml"
//! ```
//!
//! Numbers may be written as TOML integers, floats or strings holding an
//! integer, a fraction `n/d` or a decimal.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::arith::{log_radius, parse_rational, LogInterval, Prime, Rational};
use crate::catalog::catalog_get;
use crate::diffmod::DiffModule;
use crate::error::{Error, Result};
use crate::laurent::parse_rational_function;
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Number {
    pub fn to_rational(&self) -> Result<Rational> {
        match self {
            Number::Int(n) => Ok(Rational::from_integer((*n).into())),
            Number::Float(x) => parse_rational(&x.to_string()),
            Number::Text(s) => parse_rational(s.trim()),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSection {
    pub p: Option<u64>,
    pub variable: Option<String>,
    pub matrix: Option<Vec<Vec<String>>>,
    pub catalog: Option<String>,
    pub params: Option<Vec<String>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalSection {
    pub radii: Option<[Number; 2]>,
    pub log_radii: Option<[Number; 2]>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub depth: Option<usize>,
    pub grid: Option<usize>,
    pub max_denominator: Option<u64>,
    pub mode: Option<String>,
    pub method: Option<String>,
    pub normalization: Option<String>,
    pub tolerance: Option<f64>,
    pub seed: Option<u64>,
    pub rho: Option<Number>,
    pub log_r: Option<Number>,
    pub h: Option<u32>,
    pub max_bits: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub json: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub module: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub module: ModuleSection,
    #[serde(default)]
    pub interval: IntervalSection,
    #[serde(default)]
    pub run: RunSection,
    #[serde(default)]
    pub output: OutputSection,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidInput(format!("config: {}", e.message())))
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn prime(&self) -> Result<Prime> {
        Prime::new(self.module.p.ok_or_else(|| Error::InvalidInput("module.p is required".into()))?)
    }

    pub fn variable(&self) -> &str {
        self.module.variable.as_deref().unwrap_or("x")
    }

    /// The interval from `[interval]`, if given.
    pub fn interval(&self, p: Prime) -> Result<Option<LogInterval>> {
        match (&self.interval.radii, &self.interval.log_radii) {
            (Some(_), Some(_)) => Err(Error::InvalidInput("give either interval.radii or interval.log_radii".into())),
            (Some([r1, r2]), None) => {
                let (r1, r2) = (r1.to_rational()?, r2.to_rational()?);
                if r1 == r2 {
                    return Err(Error::InvalidInput("degenerate interval: r1 = r2".into()));
                }
                Ok(Some(LogInterval::new(log_radius(&r1, p)?, log_radius(&r2, p)?)?))
            }
            (None, Some([a, b])) => Ok(Some(LogInterval::new(a.to_rational()?, b.to_rational()?)?)),
            (None, None) => Ok(None),
        }
    }

    /// The module described by `[module]` and `[interval]`.
    pub fn module(&self) -> Result<DiffModule> {
        let p = self.prime()?;
        let interval = self.interval(p)?;
        match (&self.module.matrix, &self.module.catalog) {
            (Some(_), Some(_)) => Err(Error::InvalidInput("give either module.matrix or module.catalog".into())),
            (Some(rows), None) => {
                let var = self.variable();
                let rows = rows
                    .iter()
                    .map(|r| r.iter().map(|s| parse_rational_function(s, var)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                let interval = interval.ok_or_else(|| Error::InvalidInput("an [interval] is required".into()))?;
                DiffModule::new(p, Matrix::from_rows(rows)?, interval)
            }
            (None, Some(name)) => {
                let params = self.module.params.clone().unwrap_or_default();
                catalog_get(name, p, &params)?.module(interval)
            }
            (None, None) => Err(Error::InvalidInput("module.matrix or module.catalog is required".into())),
        }
    }
}

/// A module definition in the configuration grammar, with exact log-radii.
pub fn module_to_toml(m: &DiffModule, var: &str) -> String {
    #[derive(Serialize)]
    struct Definition {
        module: ModuleSection,
        interval: IntervalSection,
    }
    let def = Definition {
        module: ModuleSection {
            p: Some(m.p().get()),
            variable: Some(var.to_string()),
            matrix: Some(m.matrix().to_strings(var)),
            ..ModuleSection::default()
        },
        interval: IntervalSection {
            log_radii: Some([
                Number::Text(crate::arith::format_rational(m.interval().lo())),
                Number::Text(crate::arith::format_rational(m.interval().hi())),
            ]),
            ..IntervalSection::default()
        },
    };
    toml::to_string(&def).expect("module definitions serialize")
}
