//! Whitespace-separated matrix files: a line holding `n`, then one line per
//! object with its label followed by `n` distances.

use std::fmt::Write as _;

use crate::cost::DistanceMatrix;
use crate::error::{Error, Result};

pub fn parse_matrix(text: &str) -> Result<DistanceMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (first, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty matrix file".into(),
    })?;
    let n: usize = header.parse().map_err(|_| Error::Parse {
        line: first,
        msg: format!("expected object count, found {header:?}"),
    })?;
    let mut labels = Vec::with_capacity(n);
    let mut entries = Vec::with_capacity(n * n);
    for row in 0..n {
        let (line, text) = lines.next().ok_or(Error::Parse {
            line: first + row + 1,
            msg: format!("expected {n} rows, found {row}"),
        })?;
        let mut fields = text.split_whitespace();
        let label = fields.next().expect("non-empty line");
        labels.push(label.to_string());
        let mut count = 0;
        for f in fields {
            let v: f64 = f.parse().map_err(|_| Error::Parse {
                line,
                msg: format!("bad number {f:?}"),
            })?;
            entries.push(v);
            count += 1;
        }
        if count != n {
            return Err(Error::Parse {
                line,
                msg: format!("row {label:?} has {count} values, expected {n}"),
            });
        }
    }
    if let Some((line, _)) = lines.next() {
        return Err(Error::Parse {
            line,
            msg: "trailing content after matrix".into(),
        });
    }
    DistanceMatrix::new(labels, entries)
}

/// Values are written in shortest round-trip form, so parsing the output
/// reproduces the matrix exactly.
pub fn write_matrix(m: &DistanceMatrix) -> Result<String> {
    let n = m.n();
    let mut out = format!("{n}\n");
    for (i, label) in m.labels().iter().enumerate() {
        if label.chars().any(char::is_whitespace) {
            return Err(Error::InvalidLabels(format!("label {label:?} contains whitespace")));
        }
        out.push_str(label);
        for j in 0..n {
            write!(out, " {}", m.get(i, j)).unwrap();
        }
        out.push('\n');
    }
    Ok(out)
}
