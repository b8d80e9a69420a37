//! CSV and JSON rendering. CSV files open with `#` metadata lines and a
//! header row; floats use the shortest representation that round-trips.

use std::io::Write;
use std::path::Path;

use crate::error::CliError;

pub fn float(x: f64) -> String {
    format!("{x:?}")
}

/// Render `# key=value` lines, a header and the rows.
pub fn csv(meta: &[(&str, String)], header: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut text = String::new();
    for (k, v) in meta {
        text.push_str(&format!("# {k}={v}\n"));
    }
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    let body = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    text.push_str(&String::from_utf8(body).map_err(|e| CliError::Io(e.to_string()))?);
    Ok(text)
}

pub fn json<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// One compact JSON document per line.
pub fn json_lines<T: serde::Serialize>(values: &[T]) -> Result<String, CliError> {
    let mut s = String::new();
    for v in values {
        s.push_str(&serde_json::to_string(v)?);
        s.push('\n');
    }
    Ok(s)
}

pub fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}
