//! Plain CSV reading and writing for numeric tables.
//!
//! Files are LF-terminated, comma-separated, unquoted. Lines starting with `#`
//! carry provenance and are ignored by the reader.

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

/// Round-trip float formatting: 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn fmt_bool(v: bool) -> &'static str {
    if v {
        "true"
    } else {
        "false"
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CsvTable {
    pub comments: Vec<String>,
    pub header: Vec<String>,
    /// `(1-based line number, fields)`.
    pub rows: Vec<(usize, Vec<String>)>,
}

impl CsvTable {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }
}

pub fn render_csv(comments: &[String], header: &[String], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    for c in comments {
        out.push_str("# ");
        out.push_str(c);
        out.push('\n');
    }
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn write_csv(
    path: &Path,
    comments: &[String],
    header: &[String],
    rows: &[Vec<String>],
) -> Result<()> {
    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    file.write_all(render_csv(comments, header, rows).as_bytes())?;
    file.flush()?;
    Ok(())
}

pub fn parse_csv(text: &str) -> Result<CsvTable> {
    let mut table = CsvTable::default();
    let mut header_seen = false;
    for (idx, raw) in text.split('\n').enumerate() {
        let line_no = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if let Some(comment) = line.strip_prefix('#') {
            table.comments.push(comment.trim().to_string());
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<String> = line.split(',').map(|f| f.trim().to_string()).collect();
        if !header_seen {
            table.header = fields;
            header_seen = true;
            continue;
        }
        if fields.len() != table.header.len() {
            return Err(Error::Parse {
                line: line_no,
                message: format!(
                    "expected {} fields, found {}",
                    table.header.len(),
                    fields.len()
                ),
            });
        }
        table.rows.push((line_no, fields));
    }
    if !header_seen {
        return Err(Error::Parse {
            line: 1,
            message: "missing header".into(),
        });
    }
    Ok(table)
}

pub fn read_csv(path: &Path) -> Result<CsvTable> {
    parse_csv(&std::fs::read_to_string(path)?)
}

pub fn parse_f64(field: &str, line: usize) -> Result<f64> {
    let v: f64 = field.parse().map_err(|_| Error::Parse {
        line,
        message: format!("not a number: {field:?}"),
    })?;
    if !v.is_finite() {
        return Err(Error::Parse {
            line,
            message: format!("non-finite value {field:?}"),
        });
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for v in [0.1, -1.0 / 3.0, 1e-300, 123456.789, 0.0] {
            let s = fmt_f64(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn parse_reports_line_numbers() {
        let text = "# seed=1\nx1,x2\n1,2\n3\n";
        match parse_csv(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
        let ok = parse_csv("# a\nx1,f\n1,2\n").unwrap();
        assert_eq!(ok.comments, vec!["a"]);
        assert_eq!(ok.rows, vec![(3, vec!["1".to_string(), "2".to_string()])]);
        assert!(parse_f64("nan", 3).is_err());
        assert!(parse_f64("abc", 3).is_err());
    }
}
