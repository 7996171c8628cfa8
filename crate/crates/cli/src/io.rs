//! Sequence documents and CSV tables.
//!
//! Sequences travel as `{"offset": k, "values": [[re, im], ...]}`. Every float
//! is written with 17 significant digits so that a write/read cycle is exact.

use std::path::Path;

use al_ist::Sequence;
use num_complex::Complex64;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::CliError;

/// `x` with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// An `f64` serialized with 17 significant digits (non-finite values as strings).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exact(pub f64);

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_str(&self.0.to_string());
        }
        RawValue::from_string(fmt_f64(self.0))
            .map_err(serde::ser::Error::custom)?
            .serialize(s)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SequenceIn {
    offset: i64,
    values: Vec<[f64; 2]>,
}

#[derive(Serialize)]
pub struct SequenceOut {
    pub offset: i64,
    pub values: Vec<[Exact; 2]>,
}

impl From<&Sequence> for SequenceOut {
    fn from(q: &Sequence) -> Self {
        Self {
            offset: q.offset(),
            values: q.values().iter().map(|v| [Exact(v.re), Exact(v.im)]).collect(),
        }
    }
}

/// Parses and validates a sequence document.
pub fn parse_sequence(text: &str) -> Result<Sequence, CliError> {
    let doc: SequenceIn = serde_json::from_str(text)
        .map_err(|e| CliError::Validation(format!("malformed sequence document: {e}")))?;
    let values = doc.values.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
    Ok(Sequence::new(doc.offset, values)?)
}

pub fn read_sequence(path: &Path) -> Result<Sequence, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
    parse_sequence(&text)
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("in-memory serialization");
    s.push('\n');
    s
}

pub fn sequence_json(q: &Sequence) -> String {
    to_json(&SequenceOut::from(q))
}

/// CSV with header `n,re,im,budget` followed by any extra columns.
pub struct Table {
    extra: Vec<&'static str>,
    rows: Vec<String>,
}

impl Table {
    pub fn new(extra: &[&'static str]) -> Self {
        Self {
            extra: extra.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, n: i64, v: Complex64, budget: f64, extra: &[String]) {
        let mut row = format!("{n},{},{},{}", fmt_f64(v.re), fmt_f64(v.im), fmt_f64(budget));
        for e in extra {
            row.push(',');
            row.push_str(e);
        }
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = String::from("n,re,im,budget");
        for e in &self.extra {
            out.push(',');
            out.push_str(e);
        }
        out.push('\n');
        for r in &self.rows {
            out.push_str(r);
            out.push('\n');
        }
        out
    }
}
