//! Weighted quartet topology files.
//!
//! ```text
//! labels u v w x y
//! u v | w x
//! u w | v y 2.5
//! ```
//!
//! The `labels` line comes first. Each following line names one topology as
//! two pairs separated by `|`, with an optional weight (default 1). Blank
//! lines and `#` comments are ignored.

use crate::cost::{WeightMode, WeightedQuartetList};
use crate::error::{Error, Result};
use crate::quartet::Topology;

pub fn parse_weights(text: &str) -> Result<WeightedQuartetList> {
    let mut labels: Option<Vec<String>> = None;
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let Some(names) = &labels else {
            if tokens[0] != "labels" {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "expected `labels ...` before any topology".into(),
                });
            }
            labels = Some(tokens[1..].iter().map(|s| s.to_string()).collect());
            continue;
        };
        if !(tokens.len() == 5 || tokens.len() == 6) || tokens[2] != "|" {
            return Err(Error::Parse {
                line: line_no,
                msg: "expected `a b | c d [weight]`".into(),
            });
        }
        let id = |name: &str| {
            names.iter().position(|l| l == name).ok_or_else(|| Error::Parse {
                line: line_no,
                msg: format!("unknown label {name:?}"),
            })
        };
        let (a, b, c, d) = (id(tokens[0])?, id(tokens[1])?, id(tokens[3])?, id(tokens[4])?);
        let topology = Topology::from_pairs(a, b, c, d).map_err(|e| Error::Parse {
            line: line_no,
            msg: e.to_string(),
        })?;
        let weight = match tokens.get(5) {
            Some(w) => w.parse::<f64>().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("bad weight {w:?}"),
            })?,
            None => 1.0,
        };
        entries.push((topology, weight));
    }
    let labels = labels.ok_or(Error::Parse {
        line: 1,
        msg: "missing `labels` line".into(),
    })?;
    WeightedQuartetList::new(labels, entries)
}

/// `Unit` when every weight is 1, otherwise `Weighted`.
pub fn weight_mode_for(list: &WeightedQuartetList) -> WeightMode {
    if list.entries().iter().all(|&(_, w)| w == 1.0) {
        WeightMode::Unit
    } else {
        WeightMode::Weighted
    }
}

/// Heuristic used by the CLI to tell weight files from matrix files.
pub fn looks_like_weights(text: &str) -> bool {
    text.lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .is_some_and(|l| l.split_whitespace().next() == Some("labels"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quartet::Pairing;

    #[test]
    fn parses_topologies_and_weights() {
        let text = "# demo\nlabels u v w x y\nu v | w x\ny u | x w 2.5\n";
        let w = parse_weights(text).unwrap();
        assert_eq!(w.n(), 5);
        assert_eq!(w.entries().len(), 2);
        assert_eq!(w.entries()[0].0.pairing, Pairing::AbCd);
        // {u,w,x,y}: uy|wx -> partner of u is y (4th) -> ad|bc
        assert_eq!(w.entries()[1].0.pairing, Pairing::AdBc);
        assert_eq!(w.entries()[1].1, 2.5);
        assert_eq!(weight_mode_for(&w), WeightMode::Weighted);
        assert!(looks_like_weights(text));
        assert!(!looks_like_weights("5\nu 0 1 1 1 1\n"));
    }

    #[test]
    fn errors_name_the_line() {
        assert!(matches!(parse_weights("u v | w x\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            parse_weights("labels a b c d\na b c d\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_weights("labels a b c d\na b | c z\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_weights("labels a b c d\na a | c d\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_weights("labels a b c d\na b | c d\nb a | d c\n"),
            Err(Error::DuplicateTopology(_))
        ));
    }
}
