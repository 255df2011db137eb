//! Exact arithmetic for p-adic differential modules on annuli.

pub mod arith;
pub mod catalog;
pub mod cli;
pub mod diagnostics;
pub mod diffmod;
pub mod error;
pub mod laurent;
pub mod matrix;
pub mod radius;
pub mod report;
pub mod spectral;

pub use error::{Error, Result};
