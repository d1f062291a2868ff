//! File formats: the CSV matrix format and JSON reports.
//!
//! CSV matrix files are plain comma-separated decimal numbers (UTF-8, `.`
//! decimal separator, no quoting, no thousands separators), optionally with
//! a single header row — a row is a header exactly when at least one field
//! does not parse as a number. The writer renders every real with 17
//! significant digits, which round-trips `f64` exactly.
//!
//! JSON reports use the same 17-significant-digit rendering and carry a
//! [`ReportMeta`] block (tool version, seed, config echo); the timestamp is
//! the single nondeterministic field and lives in its own key so consumers
//! can mask it.

use crate::linalg::{LinalgError, Matrix};
use serde::ser::Serialize;
use serde::Deserialize;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{row}: expected {expected} fields, found {found}")]
    RaggedRow {
        path: PathBuf,
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("{path}:{row}:{col}: cannot parse {field:?} as a finite number")]
    BadField {
        path: PathBuf,
        row: usize,
        col: usize,
        field: String,
    },
    #[error("{path}: no data rows")]
    NoData { path: PathBuf },
    #[error("{path}: expected a single-row or single-column vector, got {rows}x{cols}")]
    NotAVector {
        path: PathBuf,
        rows: usize,
        cols: usize,
    },
    #[error("non-finite value cannot be serialized to JSON")]
    NonFiniteJson,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> IoError + '_ {
    move |source| IoError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Render a real with 17 significant digits (`{:.16e}`); parsing this back
/// recovers the exact `f64`.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn parse_field(field: &str) -> Option<f64> {
    let trimmed = field.trim();
    if trimmed.is_empty() {
        return None;
    }
    match trimmed.parse::<f64>() {
        Ok(v) if v.is_finite() => Some(v),
        _ => None,
    }
}

/// Read a CSV matrix file; the header row, when present, is detected and
/// skipped. Row numbers in errors are 1-based file lines.
pub fn read_matrix_csv(path: &Path) -> Result<Matrix, IoError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut expected: Option<usize> = None;
    let mut first_content_row = true;
    for (line_idx, raw_line) in text.lines().enumerate() {
        let line = raw_line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if first_content_row {
            first_content_row = false;
            let header = fields.iter().any(|f| parse_field(f).is_none());
            expected = Some(fields.len());
            if header {
                continue;
            }
        }
        let expected_len = *expected.get_or_insert(fields.len());
        if fields.len() != expected_len {
            return Err(IoError::RaggedRow {
                path: path.to_path_buf(),
                row: line_idx + 1,
                expected: expected_len,
                found: fields.len(),
            });
        }
        let mut row = Vec::with_capacity(fields.len());
        for (col_idx, field) in fields.iter().enumerate() {
            match parse_field(field) {
                Some(v) => row.push(v),
                None => {
                    return Err(IoError::BadField {
                        path: path.to_path_buf(),
                        row: line_idx + 1,
                        col: col_idx + 1,
                        field: field.trim().to_string(),
                    })
                }
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(IoError::NoData {
            path: path.to_path_buf(),
        });
    }
    Ok(Matrix::from_rows(&rows)?)
}

/// Write a matrix as CSV with 17-significant-digit fields.
pub fn write_matrix_csv(path: &Path, m: &Matrix, header: Option<&[&str]>) -> Result<(), IoError> {
    let mut out = String::new();
    if let Some(names) = header {
        out.push_str(&names.join(","));
        out.push('\n');
    }
    for i in 0..m.rows() {
        let row = m.row(i);
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            let _ = write!(out, "{v:.16e}");
        }
        out.push('\n');
    }
    fs::write(path, out).map_err(io_err(path))
}

/// Read a vector: a one-column (or one-row) CSV matrix, flattened.
pub fn read_vector_csv(path: &Path) -> Result<Vec<f64>, IoError> {
    let m = read_matrix_csv(path)?;
    if m.cols() == 1 {
        Ok(m.column(0))
    } else if m.rows() == 1 {
        Ok(m.row(0).to_vec())
    } else {
        Err(IoError::NotAVector {
            path: path.to_path_buf(),
            rows: m.rows(),
            cols: m.cols(),
        })
    }
}

/// Write a vector as a single-column CSV.
pub fn write_vector_csv(path: &Path, v: &[f64], header: Option<&str>) -> Result<(), IoError> {
    let mut out = String::new();
    if let Some(name) = header {
        out.push_str(name);
        out.push('\n');
    }
    for x in v {
        let _ = writeln!(out, "{x:.16e}");
    }
    fs::write(path, out).map_err(io_err(path))
}

/// Pretty JSON formatter that renders every `f64` with 17 significant
/// digits and refuses non-finite values.
struct SigDigits17 {
    indent: usize,
    has_value: bool,
}

impl SigDigits17 {
    fn new() -> Self {
        Self {
            indent: 0,
            has_value: false,
        }
    }

    fn newline<W: ?Sized + std::io::Write>(&self, w: &mut W) -> std::io::Result<()> {
        w.write_all(b"\n")?;
        for _ in 0..self.indent {
            w.write_all(b"  ")?;
        }
        Ok(())
    }
}

impl serde_json::ser::Formatter for SigDigits17 {
    fn write_f64<W: ?Sized + std::io::Write>(&mut self, w: &mut W, value: f64) -> std::io::Result<()> {
        if !value.is_finite() {
            return Err(std::io::Error::new(
                std::io::ErrorKind::InvalidData,
                "non-finite value in JSON report",
            ));
        }
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + std::io::Write>(&mut self, w: &mut W, value: f32) -> std::io::Result<()> {
        self.write_f64(w, value as f64)
    }

    fn begin_array<W: ?Sized + std::io::Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.indent += 1;
        self.has_value = false;
        w.write_all(b"[")
    }

    fn end_array<W: ?Sized + std::io::Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.indent -= 1;
        if self.has_value {
            self.newline(w)?;
        }
        w.write_all(b"]")
    }

    fn begin_array_value<W: ?Sized + std::io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> std::io::Result<()> {
        if !first {
            w.write_all(b",")?;
        }
        self.newline(w)
    }

    fn end_array_value<W: ?Sized + std::io::Write>(&mut self, _w: &mut W) -> std::io::Result<()> {
        self.has_value = true;
        Ok(())
    }

    fn begin_object<W: ?Sized + std::io::Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.indent += 1;
        self.has_value = false;
        w.write_all(b"{")
    }

    fn end_object<W: ?Sized + std::io::Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.indent -= 1;
        if self.has_value {
            self.newline(w)?;
        }
        w.write_all(b"}")
    }

    fn begin_object_key<W: ?Sized + std::io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> std::io::Result<()> {
        if !first {
            w.write_all(b",")?;
        }
        self.newline(w)
    }

    fn begin_object_value<W: ?Sized + std::io::Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        w.write_all(b": ")
    }

    fn end_object_value<W: ?Sized + std::io::Write>(&mut self, _w: &mut W) -> std::io::Result<()> {
        self.has_value = true;
        Ok(())
    }
}

/// Serialize to the crate's canonical JSON text (stable field order from
/// struct declaration order, 17-significant-digit reals, two-space indent).
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String, IoError> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigDigits17::new());
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

/// Write a JSON report to `path`.
pub fn write_report_json<T: Serialize>(path: &Path, value: &T) -> Result<(), IoError> {
    let text = to_json_string(value)?;
    let mut f = fs::File::create(path).map_err(io_err(path))?;
    f.write_all(text.as_bytes()).map_err(io_err(path))?;
    Ok(())
}

/// Self-description block carried by every emitted report: config echo plus
/// seed and version are enough to reproduce the artifact exactly. The
/// timestamp is the one nondeterministic field.
#[derive(Debug, Clone, serde::Serialize, Deserialize)]
pub struct ReportMeta {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: Option<u64>,
    pub timestamp_ms: u64,
}

impl ReportMeta {
    pub fn new(command: &str, seed: Option<u64>) -> Self {
        let timestamp_ms = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_millis() as u64)
            .unwrap_or(0);
        Self {
            tool: "sparsekit".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            seed,
            timestamp_ms,
        }
    }
}
