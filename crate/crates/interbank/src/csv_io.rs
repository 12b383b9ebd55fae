//! CSV emission and round-trip parsing.
//!
//! All numeric output uses 17 significant digits (`{:.16e}`), which
//! round-trips every finite `f64` exactly; files use LF line endings and a
//! fixed column order so identical runs produce byte-identical bytes.
//! Counts are written as plain integers and flags as `0`/`1`; cells with no
//! defined value (e.g. a reference column with no reference) are empty.
//!
//! The reader (`parse_csv`) maps each data cell to `Option<f64>` — `None`
//! for empty cells — and is the round-trip half of the "zero data loss"
//! contract: parsing what the writer produced and re-rendering it yields
//! the same parsed values again.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CsvError {
    #[error("empty document: no header line")]
    Empty,
    #[error("line {line_no}: expected {expected} cells, got {got}")]
    Ragged {
        line_no: usize,
        expected: usize,
        got: usize,
    },
    #[error("line {line_no}: cannot parse '{token}' as a number")]
    BadNumber { line_no: usize, token: String },
}

/// A parsed CSV document: header names plus numeric rows (`None` = empty cell).
#[derive(Debug, Clone, PartialEq)]
pub struct CsvData {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl CsvData {
    /// Index of a named column.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// All values of a named column (empty cells skipped).
    pub fn column_values(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.column(name)?;
        Some(self.rows.iter().filter_map(|r| r[idx]).collect())
    }
}

/// One float at full precision: 17 significant digits round-trip any
/// finite double exactly.
pub fn float_cell(value: f64) -> String {
    debug_assert!(value.is_finite(), "refusing to serialize {value}");
    format!("{value:.16e}")
}

/// A count as a plain integer.
pub fn int_cell(value: u64) -> String {
    value.to_string()
}

/// A flag as `1`/`0`.
pub fn bool_cell(value: bool) -> String {
    if value { "1" } else { "0" }.to_string()
}

/// Renders header + rows with LF endings. Every row must match the header
/// width.
pub fn render_csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        debug_assert_eq!(row.len(), header.len(), "row width mismatch");
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Parses a CSV document produced by [`render_csv`] (or compatible):
/// first line is the header, every other line must have the same cell
/// count, cells are floats or empty.
pub fn parse_csv(text: &str) -> Result<CsvData, CsvError> {
    let mut lines = text.lines().enumerate();
    let (_, header_line) = lines.next().ok_or(CsvError::Empty)?;
    if header_line.trim().is_empty() {
        return Err(CsvError::Empty);
    }
    let header: Vec<String> = header_line.split(',').map(|s| s.to_string()).collect();
    let width = header.len();
    let mut rows = Vec::new();
    for (idx, line) in lines {
        if line.is_empty() {
            continue; // trailing newline artifacts
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != width {
            return Err(CsvError::Ragged {
                line_no: idx + 1,
                expected: width,
                got: cells.len(),
            });
        }
        let mut row = Vec::with_capacity(width);
        for cell in cells {
            if cell.is_empty() {
                row.push(None);
            } else {
                let value = cell.parse::<f64>().map_err(|_| CsvError::BadNumber {
                    line_no: idx + 1,
                    token: cell.to_string(),
                })?;
                row.push(Some(value));
            }
        }
        rows.push(row);
    }
    Ok(CsvData { header, rows })
}

// ───────────────────────────── tests ─────────────────────────────
