//! The `padic-diffmod` command-line front end.
//!
//! Every command reads a TOML [`RunConfig`] (optional) and command-line
//! overrides, which take precedence. Reports go to standard output unless an
//! output path is configured. Exit codes: 0 success, 1 input or validation
//! error, 2 inconclusive or numerically unclear result, 3 budget exceeded.

pub mod config;
pub mod svg;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{format_rational, rational_to_f64, LogMagnitude, LogValue, Prime, Rational};
use crate::catalog::{catalog_get, catalog_list};
use crate::diagnostics::{bounded_from_profile, theorem_check, Classification, TheoremConfig, Verdict};
use crate::diffmod::{frobenius_pullback, Budget, DiffModule, NormProfile, Normalization, DEFAULT_DEPTH};
use crate::error::{Error, Result};
use crate::radius::{estimate_from_profile, polygon_estimate, ConvergencePolygon, EstimateOptions, Method, Mode};
use crate::report::{to_json, SCHEMA_VERSION};
use crate::spectral::{cyclic_vector, CyclicOptions, CyclicReduction};

pub use config::{module_to_toml, Number, RunConfig};

/// Environment variable selecting the worker thread count.
pub const THREADS_ENV: &str = "PADIC_DIFFMOD_THREADS";

#[derive(Debug, Parser)]
#[command(name = "padic-diffmod", version, about = "Generic radii and convergence polygons of p-adic differential modules")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub overrides: Overrides,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// CSV of n, log_p ||G_n/n!|| at one log-radius
    Norms,
    /// Radius estimates at one log-radius or on the grid
    Radius,
    /// Fitted convergence polygon, with an optional SVG plot
    Polygon,
    /// Boundedness report for the solution matrix on its disk of convergence
    Bounded,
    /// One-slope, non-Robba and boundedness pipeline
    Theorem,
    /// Cyclic vector, scalar operator and gauge
    Cyclic,
    /// Writes the Frobenius pullback as a module definition
    Pullback,
    /// Lists catalog entries, or shows one
    Catalog,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// TOML run configuration
    #[arg(long, short, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub p: Option<u64>,
    /// Catalog entry name, replacing any matrix from the config
    #[arg(long, global = true)]
    pub catalog: Option<String>,
    /// Catalog parameter (repeatable)
    #[arg(long = "param", global = true, allow_hyphen_values = true)]
    pub params: Vec<String>,
    /// Radii r1,r2 of the annulus
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub radii: Option<Vec<String>>,
    /// Log-radii ρ1,ρ2 of the annulus
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub log_radii: Option<Vec<String>>,
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    #[arg(long, global = true)]
    pub max_denominator: Option<u64>,
    /// exact or float
    #[arg(long, global = true)]
    pub mode: Option<String>,
    /// tail-min or tail-slope
    #[arg(long, global = true)]
    pub method: Option<String>,
    /// factorial or plain
    #[arg(long, global = true)]
    pub normalization: Option<String>,
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub rho: Option<String>,
    #[arg(long = "log-r", global = true, allow_hyphen_values = true)]
    pub log_r: Option<String>,
    /// Frobenius pullback order
    #[arg(long, global = true)]
    pub h: Option<u32>,
    /// Bit budget for one term of the recursion
    #[arg(long, global = true)]
    pub max_bits: Option<u64>,
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    #[arg(long, global = true)]
    pub svg: Option<PathBuf>,
    /// Output path for `pullback`
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (overrides PADIC_DIFFMOD_THREADS)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

impl Overrides {
    /// Loads the config file, if any, and applies the flags on top.
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        let text = |s: &String| Number::Text(s.clone());
        let pair = |v: &Vec<String>, what: &str| -> Result<[Number; 2]> {
            match v.as_slice() {
                [a, b] => Ok([text(a), text(b)]),
                _ => Err(Error::InvalidInput(format!("--{what} takes two comma-separated values"))),
            }
        };
        if let Some(p) = self.p {
            cfg.module.p = Some(p);
        }
        if let Some(name) = &self.catalog {
            cfg.module.catalog = Some(name.clone());
            cfg.module.matrix = None;
        }
        if !self.params.is_empty() {
            cfg.module.params = Some(self.params.clone());
        }
        if let Some(v) = &self.radii {
            cfg.interval.radii = Some(pair(v, "radii")?);
            cfg.interval.log_radii = None;
        }
        if let Some(v) = &self.log_radii {
            cfg.interval.log_radii = Some(pair(v, "log-radii")?);
            cfg.interval.radii = None;
        }
        let run = &mut cfg.run;
        macro_rules! set {
            ($($field:ident),*) => { $( if let Some(v) = &self.$field { run.$field = Some(v.clone()); } )* };
        }
        set!(depth, grid, max_denominator, mode, method, normalization, tolerance, seed, h, max_bits);
        if let Some(v) = &self.rho {
            run.rho = Some(text(v));
        }
        if let Some(v) = &self.log_r {
            run.log_r = Some(text(v));
        }
        let out = &mut cfg.output;
        if let Some(v) = &self.json {
            out.json = Some(v.clone());
        }
        if let Some(v) = &self.csv {
            out.csv = Some(v.clone());
        }
        if let Some(v) = &self.svg {
            out.svg = Some(v.clone());
        }
        if let Some(v) = &self.out {
            out.module = Some(v.clone());
        }
        Ok(cfg)
    }
}

/// Numeric settings with defaults filled in.
#[derive(Debug, Clone)]
pub struct Settings {
    pub depth: usize,
    pub grid: usize,
    pub max_denominator: u64,
    pub tolerance: f64,
    pub seed: u64,
    pub h: u32,
    pub rho: Option<Rational>,
    pub log_r: Option<Rational>,
    pub estimate: EstimateOptions,
}

impl Settings {
    pub fn from_config(cfg: &RunConfig) -> Result<Self> {
        let run = &cfg.run;
        let mode = match run.mode.as_deref().unwrap_or("exact") {
            "exact" => Mode::Exact,
            "float" => Mode::Float,
            other => return Err(Error::InvalidInput(format!("unknown mode `{other}` (exact, float)"))),
        };
        let method = match run.method.as_deref().unwrap_or("tail-min") {
            "tail-min" => Method::TailMin,
            "tail-slope" => Method::TailSlope,
            other => return Err(Error::InvalidInput(format!("unknown method `{other}` (tail-min, tail-slope)"))),
        };
        let normalization = match run.normalization.as_deref().unwrap_or("factorial") {
            "factorial" => Normalization::Factorial,
            "plain" => Normalization::Plain,
            other => return Err(Error::InvalidInput(format!("unknown normalization `{other}` (factorial, plain)"))),
        };
        let mut budget = Budget::default();
        if let Some(bits) = run.max_bits {
            budget.max_bits = bits;
        }
        let estimate = EstimateOptions { method, mode, normalization, tail_start: None, budget };
        estimate.validate()?;
        let tolerance = run.tolerance.unwrap_or(crate::diagnostics::DEFAULT_TOLERANCE);
        if !(tolerance.is_finite() && tolerance > 0.0) {
            return Err(Error::InvalidInput(format!("tolerance must be positive, got {tolerance}")));
        }
        Ok(Settings {
            depth: run.depth.unwrap_or(DEFAULT_DEPTH),
            grid: run.grid.unwrap_or(17),
            max_denominator: run.max_denominator.unwrap_or(32),
            tolerance,
            seed: run.seed.unwrap_or(0),
            h: run.h.unwrap_or(1),
            rho: run.rho.as_ref().map(Number::to_rational).transpose()?,
            log_r: run.log_r.as_ref().map(Number::to_rational).transpose()?,
            estimate,
        })
    }

    fn rho_or_midpoint(&self, m: &DiffModule) -> Result<Rational> {
        let rho = self.rho.clone().unwrap_or_else(|| m.interval().midpoint());
        if !m.interval().contains(&rho) {
            return Err(m.interval().domain_error(&rho));
        }
        Ok(rho)
    }

    fn value(&self, q: Rational) -> LogValue {
        match self.estimate.mode {
            Mode::Exact => LogValue::Exact(q),
            Mode::Float => LogValue::Float(rational_to_f64(&q)),
        }
    }
}

/// What a command produced, before it is written out.
struct Outcome {
    exit: i32,
}

impl Outcome {
    fn ok() -> Self {
        Outcome { exit: 0 }
    }

    fn unclear(unclear: bool) -> Self {
        Outcome { exit: if unclear { 2 } else { 0 } }
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Error::InvalidInput(e.to_string())),
                _ => Ok(()),
            }
        }
    }
}

fn emit_json<T: Serialize>(cfg: &RunConfig, command: &str, value: &T) -> Result<()> {
    write_output(cfg.output.json.as_deref(), &to_json(command, value))
}

pub fn polygon_chart(poly: &ConvergencePolygon) -> svg::Chart {
    let (lo, hi) = (poly.interval.lo(), poly.interval.hi());
    let mut xs: Vec<Rational> = vec![lo.clone()];
    xs.extend(poly.breakpoints());
    xs.push(hi.clone());
    let fitted = xs.iter().map(|x| (rational_to_f64(x), rational_to_f64(&poly.eval(x)))).collect();
    let samples = poly.samples.iter().map(|s| (rational_to_f64(&s.rho), s.log_r.to_f64())).collect();
    let (a, b) = (rational_to_f64(lo), rational_to_f64(hi));
    svg::Chart {
        title: "convergence polygon".into(),
        x_label: "ρ = log_p r".into(),
        y_label: "log_p R".into(),
        series: vec![
            svg::Series { label: "log R = ρ".into(), points: vec![(a, a), (b, b)], color: "#888888", dashed: true, markers: false },
            svg::Series { label: "samples".into(), points: samples, color: "#1f77b4", dashed: false, markers: true },
            svg::Series { label: "fitted polygon".into(), points: fitted, color: "#d62728", dashed: false, markers: false },
        ],
    }
}

#[derive(Serialize)]
struct CyclicOutput<'a> {
    #[serde(flatten)]
    reduction: &'a CyclicReduction,
    residual_is_zero: bool,
}

fn run_command(command: Command, cfg: &RunConfig) -> Result<Outcome> {
    if command == Command::Catalog {
        return catalog_command(cfg);
    }
    let s = Settings::from_config(cfg)?;
    let m = cfg.module()?;
    match command {
        Command::Norms => {
            let rho = s.rho_or_midpoint(&m)?;
            let profile = NormProfile::build(&m, s.depth, &s.estimate.budget)?;
            let mut csv = String::from("n,value,exact\n");
            for n in 0..=s.depth {
                let line = match s.estimate.mode {
                    Mode::Exact => match profile.entry(n, &rho, s.estimate.normalization) {
                        LogMagnitude::Bottom => format!("{n},-inf,bottom\n"),
                        LogMagnitude::Finite(v) => format!("{n},{:.12},{}\n", rational_to_f64(&v), format_rational(&v)),
                    },
                    Mode::Float => {
                        let v = profile.entry_f64(n, rational_to_f64(&rho), s.estimate.normalization);
                        if v == f64::NEG_INFINITY { format!("{n},-inf,\n") } else { format!("{n},{v:.12},\n") }
                    }
                };
                csv.push_str(&line);
            }
            write_output(cfg.output.csv.as_deref(), &csv)?;
            Ok(Outcome::ok())
        }
        Command::Radius => {
            let points = match &s.rho {
                Some(_) => vec![s.rho_or_midpoint(&m)?],
                None => m.interval().grid(s.grid),
            };
            let profile = NormProfile::build(&m, s.depth, &s.estimate.budget)?;
            let estimates = points
                .par_iter()
                .map(|rho| estimate_from_profile(&profile, rho, &s.estimate))
                .collect::<Result<Vec<_>>>()?;
            emit_json(cfg, "radius", &estimates)?;
            Ok(Outcome::ok())
        }
        Command::Polygon => {
            let poly = polygon_estimate(&m, s.grid, s.depth, s.max_denominator, &s.estimate)?;
            if let Some(path) = &cfg.output.svg {
                write_output(Some(path), &polygon_chart(&poly).render())?;
            }
            emit_json(cfg, "polygon", &poly)?;
            Ok(Outcome::ok())
        }
        Command::Bounded => {
            let rho = s.rho_or_midpoint(&m)?;
            let profile = NormProfile::build(&m, s.depth, &s.estimate.budget)?;
            let log_r = match &s.log_r {
                Some(q) => s.value(q.clone()),
                None => estimate_from_profile(&profile, &rho, &s.estimate)?.log_r,
            };
            let report = bounded_from_profile(&profile, &rho, &log_r, s.tolerance, &s.estimate)?;
            if let Some(path) = &cfg.output.svg {
                let chart = svg::Chart {
                    title: format!("b_n at ρ = {}", format_rational(&rho)),
                    x_label: "n".into(),
                    y_label: "b_n".into(),
                    series: vec![svg::Series {
                        label: "b_n".into(),
                        points: report.b.iter().enumerate().map(|(n, b)| (n as f64, b.to_f64())).collect(),
                        color: "#1f77b4",
                        dashed: false,
                        markers: false,
                    }],
                };
                write_output(Some(path), &chart.render())?;
            }
            emit_json(cfg, "bounded", &report)?;
            Ok(Outcome::unclear(report.classification == Classification::Inconclusive))
        }
        Command::Theorem => {
            let tc = TheoremConfig {
                grid: s.grid,
                depth: s.depth,
                max_denominator: s.max_denominator,
                tolerance: s.tolerance,
                estimate: s.estimate.clone(),
            };
            let report = theorem_check(&m, &tc)?;
            if let Some(path) = &cfg.output.svg {
                write_output(Some(path), &polygon_chart(&report.polygon).render())?;
            }
            emit_json(cfg, "theorem", &report)?;
            Ok(Outcome::unclear(report.verdict == Verdict::TheoremAppliesNumericallyUnclear))
        }
        Command::Cyclic => {
            let reduction = cyclic_vector(&m, &CyclicOptions { seed: s.seed, ..CyclicOptions::default() })?;
            let residual_is_zero = reduction.residual(m.matrix()).is_zero();
            emit_json(cfg, "cyclic", &CyclicOutput { reduction: &reduction, residual_is_zero })?;
            Ok(Outcome::ok())
        }
        Command::Pullback => {
            let pulled = frobenius_pullback(&m, s.h)?;
            write_output(cfg.output.module.as_deref(), &module_to_toml(&pulled, cfg.variable()))?;
            Ok(Outcome::ok())
        }
        Command::Catalog => unreachable!("handled above"),
    }
}

fn catalog_command(cfg: &RunConfig) -> Result<Outcome> {
    match &cfg.module.catalog {
        Some(name) => {
            let p = match cfg.module.p {
                Some(p) => Prime::new(p)?,
                None => Prime::new(2)?,
            };
            let entry = catalog_get(name, p, &cfg.module.params.clone().unwrap_or_default())?;
            emit_json(cfg, "catalog", &entry)?;
        }
        None => emit_json(cfg, "catalog", &catalog_list())?,
    }
    Ok(Outcome::ok())
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::BudgetExceeded(_) => 3,
        _ => 1,
    }
}

fn report_error(kind: &str, message: &str) {
    let doc = serde_json::json!({
        "schema_version": SCHEMA_VERSION,
        "error": { "kind": kind, "message": message },
    });
    eprintln!("{doc}");
}

fn configure_threads(flag: Option<usize>) -> Result<()> {
    let from_env = std::env::var(THREADS_ENV).ok();
    let threads = match (flag, from_env) {
        (Some(n), _) => n,
        (None, Some(v)) => {
            v.trim().parse().map_err(|_| Error::InvalidInput(format!("{THREADS_ENV} must be a positive integer, got `{v}`")))?
        }
        (None, None) => return Ok(()),
    };
    if threads == 0 {
        return Err(Error::InvalidInput("thread count must be positive".into()));
    }
    // a second initialization in the same process is harmless
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

pub fn run(cli: &Cli) -> i32 {
    let result = configure_threads(cli.overrides.threads)
        .and_then(|_| cli.overrides.resolve())
        .and_then(|cfg| run_command(cli.command, &cfg));
    match result {
        Ok(outcome) => outcome.exit,
        Err(e) => {
            report_error(e.kind(), &e.to_string());
            exit_code(&e)
        }
    }
}

/// Parses the process arguments and runs; returns the exit code.
pub fn main() -> i32 {
    match Cli::try_parse() {
        Ok(cli) => run(&cli),
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            let _ = e.print();
            0
        }
        Err(e) => {
            report_error("usage", e.to_string().trim());
            1
        }
    }
}
