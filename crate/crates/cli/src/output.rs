use std::path::Path;

use csym_core::C64;
use nalgebra::{Dim, Matrix, RawStorage};
use serde_json::{json, Value};

use crate::error::CliError;

pub fn cx(z: C64) -> Value {
    json!([z.re, z.im])
}

pub fn matrix<R: Dim, C: Dim, S: RawStorage<C64, R, C>>(m: &Matrix<C64, R, C, S>) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| cx(m[(i, j)])).collect()))
            .collect(),
    )
}

pub fn vector(v: &[C64]) -> Value {
    Value::Array(v.iter().copied().map(cx).collect())
}

/// JSON, or `key: value` lines with compact values.
pub fn render(report: &Value, as_json: bool) -> String {
    if as_json {
        return serde_json::to_string_pretty(report).expect("serializable");
    }
    match report {
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| match v {
                Value::String(s) => format!("{k}: {s}"),
                other => format!("{k}: {other}"),
            })
            .collect::<Vec<_>>()
            .join("\n"),
        other => other.to_string(),
    }
}

/// Decimal notation with 15 significant digits.
pub fn sig15(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-300..=300).contains(&mag) {
        return format!("{x:.14e}");
    }
    let decimals = (14 - mag).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Writes `(sweep_param, eigenvalue_index, z)` rows to `path`, or to stdout for `-`.
pub fn write_sweep_csv(path: &Path, rows: &[(f64, usize, f64)]) -> Result<(), CliError> {
    let io = |e: csv::Error| CliError::Usage(format!("cannot write {}: {e}", path.display()));
    let sink: Box<dyn std::io::Write> = if path == Path::new("-") {
        Box::new(std::io::stdout())
    } else {
        Box::new(std::fs::File::create(path).map_err(|e| {
            CliError::Usage(format!("cannot create {}: {e}", path.display()))
        })?)
    };
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["sweep_param", "eigenvalue_index", "z"]).map_err(io)?;
    for &(p, k, z) in rows {
        w.write_record([sig15(p), k.to_string(), sig15(z)]).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}
