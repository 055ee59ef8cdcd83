//! Deterministic output plumbing: 17-significant-digit floats, aligned
//! tables, CSV with '.' decimals, ',' separators and LF endings, and
//! destination resolution against the DKV_OUT_DIR environment variable.

use std::env;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

/// Folds -0.0 into 0.0 so renderings never show a signed zero.
fn unsign_zero(v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v
    }
}

/// 17 significant digits; parses back to the exact same value.
pub fn sig17(v: f64) -> String {
    format!("{:.16e}", unsign_zero(v))
}

/// Fixed-point rendering for table cells holding O(1) quantities.
pub fn fixed(v: f64) -> String {
    format!("{:.10}", unsign_zero(v))
}

/// Scientific rendering for table cells holding residuals.
pub fn sci(v: f64) -> String {
    format!("{:.3e}", unsign_zero(v))
}

/// Column-aligned plain-text table.
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        assert_eq!(cells.len(), self.header.len(), "table row width mismatch");
        self.rows.push(cells);
    }

    pub fn render(&self) -> String {
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.len()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let line = |cells: &[String]| -> String {
            let mut out = String::new();
            for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
                if i > 0 {
                    out.push_str("  ");
                }
                out.push_str(cell);
                out.extend(std::iter::repeat_n(' ', w - cell.len()));
            }
            out.trim_end().to_string()
        };
        let mut out = line(&self.header);
        out.push('\n');
        let dashes: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
        out.push_str(&line(&dashes));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&line(row));
            out.push('\n');
        }
        out
    }
}

/// CSV from a header and pre-rendered rows.
pub fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Relative output paths land in DKV_OUT_DIR when the variable is set.
pub fn resolve_out(path: &Path) -> PathBuf {
    if path.is_relative() {
        if let Some(dir) = env::var_os("DKV_OUT_DIR") {
            return PathBuf::from(dir).join(path);
        }
    }
    path.to_path_buf()
}

/// Writes to the resolved path, or to stdout when no path is given.
pub fn write_output(out: &Option<PathBuf>, content: &str) -> io::Result<()> {
    match out {
        Some(path) => fs::write(resolve_out(path), content),
        None => io::stdout().write_all(content.as_bytes()),
    }
}
