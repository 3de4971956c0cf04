//! Deterministic CSV output for the benchmark harness.
//!
//! Header first, `\n` line endings, floats with 6 decimal places, integers
//! as-is. Two runs with identical configuration produce byte-identical
//! files.

use crate::error::Result;
use std::fmt::Write as _;
use std::path::Path;

/// A single CSV cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

/// Renders header plus rows.
pub fn format_csv(header: &[&str], rows: &[Vec<Cell>]) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            match cell {
                Cell::Int(v) => {
                    let _ = write!(out, "{v}");
                }
                Cell::Float(v) => {
                    let _ = write!(out, "{v:.6}");
                }
            }
        }
        out.push('\n');
    }
    out
}

/// Writes header plus rows to a file.
pub fn write_csv(header: &[&str], rows: &[Vec<Cell>], path: &Path) -> Result<()> {
    std::fs::write(path, format_csv(header, rows))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_only_for_empty_sweep() {
        let text = format_csv(&["a", "b"], &[]);
        assert_eq!(text, "a,b\n");
    }

    #[test]
    fn formats_ints_and_floats() {
        let rows = vec![
            vec![Cell::from(0usize), Cell::from(1.5), Cell::from(-2.0)],
            vec![Cell::from(1usize), Cell::from(10.0 / 3.0), Cell::from(0.0)],
        ];
        let text = format_csv(&["m", "x", "y"], &rows);
        assert_eq!(text, "m,x,y\n0,1.500000,-2.000000\n1,3.333333,0.000000\n");
    }

    #[test]
    fn row_count_matches_sweep_length() {
        let rows: Vec<Vec<Cell>> = (0..7).map(|i| vec![Cell::from(i as usize)]).collect();
        let text = format_csv(&["i"], &rows);
        assert_eq!(text.lines().count(), 8);
    }
}
