//! Serialization helpers shared by every report type.
//!
//! Rationals are written as strings (`"-255/256"`), doubles are rounded to
//! 12 decimals and non-finite doubles become `null`, so that reports are
//! byte-for-byte reproducible.

use serde::{Serialize, Serializer};

use crate::arith::{fixed, format_rational, Rational};

pub const SCHEMA_VERSION: u32 = 1;

pub(crate) fn ser_rational<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(q))
}

pub(crate) fn ser_opt_rational<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_str(&format_rational(q)),
        None => s.serialize_none(),
    }
}

pub(crate) fn ser_f64<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(fixed(*x))
    } else {
        s.serialize_none()
    }
}

pub(crate) fn ser_opt_f64<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(x) => ser_f64(x, s),
        None => s.serialize_none(),
    }
}

/// A report wrapped with the command name and schema version.
#[derive(Debug, Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub schema_version: u32,
    pub command: &'a str,
    pub result: &'a T,
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(command: &str, result: &T) -> String {
    let env = Envelope { schema_version: SCHEMA_VERSION, command, result };
    let mut out = serde_json::to_string_pretty(&env).expect("reports serialize");
    out.push('\n');
    out
}
