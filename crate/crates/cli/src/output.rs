use std::fmt::Write as _;

use klab_core::{Error, Estimate, Real};
use serde_json::{json, Value};

use crate::args::Format;

/// Significant digits that round-trip at the working precision.
pub fn digits<R: Real>() -> usize {
    R::DIGITS + 1
}

pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Domain(_)
            | Error::NotSquareFree(_)
            | Error::KindMismatch { .. }
            | Error::MissingCoefficients
            | Error::Parse(_) => 2,
            Error::BelowFloor { .. }
            | Error::InsufficientTerms { .. }
            | Error::IllConditioned { .. }
            | Error::Numerical(_) => 3,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// A command result: canonical JSON, plus a table when the result is one.
pub struct Output {
    pub json: Value,
    pub table: Option<Table>,
}

pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Output {
    pub fn value(json: Value) -> Self {
        Output { json, table: None }
    }

    pub fn table(json: Value, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        Output {
            json,
            table: Some(Table {
                header: header.iter().map(|s| s.to_string()).collect(),
                rows,
            }),
        }
    }

    pub fn render(&self, format: Format) -> CliResult<String> {
        let mut out = String::new();
        match format {
            Format::Json => {
                out = serde_json::to_string_pretty(&self.json).expect("serializable");
                out.push('\n');
            }
            Format::Csv => {
                let t = self.table.as_ref().ok_or_else(|| {
                    CliError::usage("csv output is available for coefficient tables only")
                })?;
                writeln!(out, "{}", t.header.join(",")).unwrap();
                for r in &t.rows {
                    writeln!(out, "{}", r.join(",")).unwrap();
                }
            }
            Format::Plain => match &self.table {
                Some(t) => {
                    writeln!(out, "{}", t.header.join("\t")).unwrap();
                    for r in &t.rows {
                        writeln!(out, "{}", r.join("\t")).unwrap();
                    }
                }
                None => plain(&self.json, "", &mut out),
            },
        }
        Ok(out)
    }
}

fn plain(v: &Value, prefix: &str, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                plain(x, &key, out);
            }
        }
        Value::String(s) => writeln!(out, "{prefix}: {s}").unwrap(),
        other => writeln!(out, "{prefix}: {other}").unwrap(),
    }
}

pub fn real<R: Real>(x: R) -> Value {
    if R::DIGITS <= 16 {
        // Shortest string that parses back to the same double.
        return Value::String(format!("{:e}", x.to_f64()));
    }
    Value::String(x.to_sci_string(digits::<R>()))
}

pub fn estimate<R: Real>(e: &Estimate<R>) -> Value {
    json!({ "value": real(e.value), "error_bound": e.bound })
}
