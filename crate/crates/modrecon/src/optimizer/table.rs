//! Coefficient lookup table: UTF-8 text, one record per line.
//!
//! ```text
//! kernel=<kind[:params]> T=<int> N=<int> M=<int> Kpass=<int> e=<float> c=<float,...>
//! ```
//!
//! Floats are printed with 17 significant digits so records round-trip
//! bit-for-bit. Lines starting with `#` are comments. Records are keyed by
//! (kernel, T, N, M, Kpass); saving replaces by key and keeps insertion
//! order, so repeated generation runs produce identical files.

use crate::error::{Error, Result};
use std::fmt::Write as _;
use std::path::Path;

/// One solved coefficient set.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffRecord {
    /// Kernel identifier, e.g. `sh`, `linear`, `hold:2`, `cubic:-0.5`.
    pub kernel_id: String,
    pub period: usize,
    pub len: usize,
    pub modules: usize,
    pub passband_max_bin: usize,
    pub residual_error: f64,
    pub coeffs: Vec<f64>,
}

impl CoeffRecord {
    pub fn key(&self) -> CoeffKey {
        CoeffKey {
            kernel_id: self.kernel_id.clone(),
            period: self.period,
            len: self.len,
            modules: self.modules,
            passband_max_bin: self.passband_max_bin,
        }
    }
}

/// Lookup key for a record.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoeffKey {
    pub kernel_id: String,
    pub period: usize,
    pub len: usize,
    pub modules: usize,
    pub passband_max_bin: usize,
}

impl std::fmt::Display for CoeffKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "kernel={} T={} N={} M={} Kpass={}",
            self.kernel_id, self.period, self.len, self.modules, self.passband_max_bin
        )
    }
}

/// An ordered collection of records with replace-by-key semantics.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CoeffTable {
    records: Vec<CoeffRecord>,
}

impl CoeffTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn records(&self) -> &[CoeffRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Replaces the record with the same key in place, or appends.
    pub fn upsert(&mut self, record: CoeffRecord) {
        let key = record.key();
        if let Some(slot) = self.records.iter_mut().find(|r| r.key() == key) {
            *slot = record;
        } else {
            self.records.push(record);
        }
    }

    pub fn find(&self, key: &CoeffKey) -> Result<&CoeffRecord> {
        self.records
            .iter()
            .find(|r| &r.key() == key)
            .ok_or_else(|| Error::KeyNotFound(key.to_string()))
    }
}

impl FromIterator<CoeffRecord> for CoeffTable {
    fn from_iter<I: IntoIterator<Item = CoeffRecord>>(iter: I) -> Self {
        let mut table = CoeffTable::new();
        for r in iter {
            table.upsert(r);
        }
        table
    }
}

/// 17 significant digits: enough to reproduce any f64 bit-for-bit.
fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Serializes a table to the line format.
pub fn format_coeff_table(table: &CoeffTable) -> String {
    let mut out = String::from("# modrecon coefficient table\n");
    for r in table.records() {
        let _ = write!(
            out,
            "kernel={} T={} N={} M={} Kpass={} e={} c=",
            r.kernel_id,
            r.period,
            r.len,
            r.modules,
            r.passband_max_bin,
            format_f64(r.residual_error)
        );
        for (i, c) in r.coeffs.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&format_f64(*c));
        }
        out.push('\n');
    }
    out
}

fn field<'a>(token: &'a str, name: &str, line_no: usize) -> Result<&'a str> {
    token
        .strip_prefix(name)
        .ok_or_else(|| Error::MalformedTable {
            line: line_no,
            reason: format!("expected field `{name}...`, found `{token}`"),
        })
}

fn parse_usize(s: &str, what: &str, line_no: usize) -> Result<usize> {
    s.parse().map_err(|_| Error::MalformedTable {
        line: line_no,
        reason: format!("bad {what} value `{s}`"),
    })
}

fn parse_f64(s: &str, what: &str, line_no: usize) -> Result<f64> {
    let v: f64 = s.parse().map_err(|_| Error::MalformedTable {
        line: line_no,
        reason: format!("bad {what} value `{s}`"),
    })?;
    if !v.is_finite() {
        return Err(Error::MalformedTable {
            line: line_no,
            reason: format!("non-finite {what} value `{s}`"),
        });
    }
    Ok(v)
}

/// Parses table text. Unknown or duplicate keys keep last-wins semantics via
/// [`CoeffTable::upsert`].
pub fn parse_coeff_table(text: &str) -> Result<CoeffTable> {
    let mut table = CoeffTable::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let mut next = |name: &str| -> Result<&str> {
            let token = tokens.next().ok_or_else(|| Error::MalformedTable {
                line: line_no,
                reason: format!("missing field `{name}`"),
            })?;
            field(token, name, line_no)
        };
        let kernel_id = next("kernel=")?.to_string();
        if kernel_id.is_empty() {
            return Err(Error::MalformedTable {
                line: line_no,
                reason: "empty kernel id".into(),
            });
        }
        let period = parse_usize(next("T=")?, "T", line_no)?;
        let len = parse_usize(next("N=")?, "N", line_no)?;
        let modules = parse_usize(next("M=")?, "M", line_no)?;
        let passband_max_bin = parse_usize(next("Kpass=")?, "Kpass", line_no)?;
        let residual_error = parse_f64(next("e=")?, "e", line_no)?;
        let coeff_text = next("c=")?;
        let coeffs: Vec<f64> = if coeff_text.is_empty() {
            Vec::new()
        } else {
            coeff_text
                .split(',')
                .map(|s| parse_f64(s, "coefficient", line_no))
                .collect::<Result<_>>()?
        };
        if tokens.next().is_some() {
            return Err(Error::MalformedTable {
                line: line_no,
                reason: "trailing fields".into(),
            });
        }
        if coeffs.len() != modules {
            return Err(Error::MalformedTable {
                line: line_no,
                reason: format!("M={} but {} coefficients", modules, coeffs.len()),
            });
        }
        table.upsert(CoeffRecord {
            kernel_id,
            period,
            len,
            modules,
            passband_max_bin,
            residual_error,
            coeffs,
        });
    }
    Ok(table)
}

/// Writes the table to disk in the line format.
pub fn save_coeff_table(table: &CoeffTable, path: &Path) -> Result<()> {
    std::fs::write(path, format_coeff_table(table))?;
    Ok(())
}

/// Reads and parses a table file.
pub fn load_coeff_table(path: &Path) -> Result<CoeffTable> {
    let text = std::fs::read_to_string(path)?;
    parse_coeff_table(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(kernel: &str, modules: usize) -> CoeffRecord {
        CoeffRecord {
            kernel_id: kernel.to_string(),
            period: 10,
            len: 1000,
            modules,
            passband_max_bin: 49,
            residual_error: 1.2345678901234567e-13,
            coeffs: (0..modules)
                .map(|i| 1.0 / (i as f64 + 3.0) + 0.1234567890123456)
                .collect(),
        }
    }

    #[test]
    fn roundtrip_is_bit_exact() {
        let table: CoeffTable = vec![record("sh", 5), record("cubic:-0.5", 3)]
            .into_iter()
            .collect();
        let text = format_coeff_table(&table);
        let back = parse_coeff_table(&text).unwrap();
        assert_eq!(table, back);
        // A second serialization is byte-identical.
        assert_eq!(text, format_coeff_table(&back));
    }

    #[test]
    fn file_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("coeffs.tbl");
        let table: CoeffTable = vec![record("linear", 2)].into_iter().collect();
        save_coeff_table(&table, &path).unwrap();
        let back = load_coeff_table(&path).unwrap();
        assert_eq!(table, back);
    }

    #[test]
    fn upsert_replaces_by_key() {
        let mut table = CoeffTable::new();
        table.upsert(record("sh", 5));
        table.upsert(record("hold:2", 4));
        let mut changed = record("sh", 5);
        changed.residual_error = 7.0;
        table.upsert(changed.clone());
        assert_eq!(table.len(), 2);
        assert_eq!(table.records()[0], changed);
        assert_eq!(table.records()[1].kernel_id, "hold:2");
    }

    #[test]
    fn lookup_miss_is_key_not_found() {
        let table: CoeffTable = vec![record("sh", 5)].into_iter().collect();
        let mut key = record("sh", 5).key();
        key.modules = 4;
        assert!(matches!(table.find(&key), Err(Error::KeyNotFound(_))));
        key.modules = 5;
        assert!(table.find(&key).is_ok());
    }

    #[test]
    fn deterministic_enumeration_order() {
        let mut table = CoeffTable::new();
        for kernel in ["sh", "linear"] {
            for m in 1..=5 {
                table.upsert(record(kernel, m));
            }
        }
        assert_eq!(table.len(), 10);
        let ids: Vec<(String, usize)> = table
            .records()
            .iter()
            .map(|r| (r.kernel_id.clone(), r.modules))
            .collect();
        let expected: Vec<(String, usize)> = ["sh", "linear"]
            .iter()
            .flat_map(|k| (1..=5).map(move |m| (k.to_string(), m)))
            .collect();
        assert_eq!(ids, expected);
    }

    #[test]
    fn comments_and_blanks_are_skipped() {
        let text =
            "# heading\n\n  # indented comment\nkernel=sh T=2 N=8 M=1 Kpass=1 e=0e0 c=5e-1\n";
        let table = parse_coeff_table(text).unwrap();
        assert_eq!(table.len(), 1);
        assert_eq!(table.records()[0].coeffs, vec![0.5]);
    }

    #[test]
    fn malformed_lines_are_rejected() {
        for bad in [
            "kernel=sh T=2 N=8 M=1 Kpass=1 e=0e0",            // missing c=
            "kernel=sh T=x N=8 M=1 Kpass=1 e=0e0 c=5e-1",     // bad int
            "kernel=sh T=2 N=8 M=2 Kpass=1 e=0e0 c=5e-1",     // count mismatch
            "kernel=sh T=2 N=8 M=1 Kpass=1 e=0e0 c=nope",     // bad float
            "kernel=sh T=2 N=8 M=1 Kpass=1 e=inf c=5e-1",     // non-finite
            "T=2 kernel=sh N=8 M=1 Kpass=1 e=0e0 c=5e-1",     // wrong order
            "kernel=sh T=2 N=8 M=1 Kpass=1 e=0e0 c=5e-1 x=1", // trailing
        ] {
            assert!(
                matches!(parse_coeff_table(bad), Err(Error::MalformedTable { .. })),
                "{bad}"
            );
        }
    }

    #[test]
    fn empty_coefficient_list() {
        let text = "kernel=sh T=2 N=8 M=0 Kpass=1 e=1e-1 c=\n";
        let table = parse_coeff_table(text).unwrap();
        assert!(table.records()[0].coeffs.is_empty());
    }
}
