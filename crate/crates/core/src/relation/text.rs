//! Line-oriented text form.
//!
//! ```text
//! # n=6 reflexive
//! A~F
//! A>B
//! ```
//!
//! `x>y` marks a pair that holds in one direction only, `x~y` a pair that
//! holds in both directions (written once, smaller label first). The header
//! carries the universe size and whether the whole diagonal is present; a
//! partial diagonal is written as `x~x` lines.

use std::fmt::Write as _;

use super::{AlternativeId, BinaryRelation};
use crate::error::{Error, Result};

impl BinaryRelation {
    pub fn to_text(&self) -> String {
        let n = self.n();
        let reflexive = (0..n).all(|x| self.holds(x, x));
        let mut out = format!("# n={n}{}\n", if reflexive { " reflexive" } else { "" });
        let label = |i: usize| AlternativeId::from_index(i).label();
        if !reflexive {
            for x in (0..n).filter(|&x| self.holds(x, x)) {
                let _ = writeln!(out, "{}~{}", label(x), label(x));
            }
        }
        for x in 0..n {
            for y in (x + 1)..n {
                if self.holds(x, y) && self.holds(y, x) {
                    let _ = writeln!(out, "{}~{}", label(x), label(y));
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                if x != y && self.holds(x, y) && !self.holds(y, x) {
                    let _ = writeln!(out, "{}>{}", label(x), label(y));
                }
            }
        }
        out
    }

    /// Parse the text form. Without a header the universe is the smallest one
    /// covering every label used and the diagonal is left empty.
    pub fn from_text(text: &str) -> Result<BinaryRelation> {
        let mut n: Option<usize> = None;
        let mut reflexive = false;
        let mut pairs = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(header) = line.strip_prefix('#') {
                for token in header.split_whitespace() {
                    if let Some(v) = token.strip_prefix("n=") {
                        let parsed = v.parse::<usize>().map_err(|_| Error::Parse {
                            line: line_no,
                            message: format!("bad universe size {v:?}"),
                        })?;
                        n = Some(parsed);
                    } else if token == "reflexive" {
                        reflexive = true;
                    }
                }
                continue;
            }
            let (sep, symmetric) = if line.contains('~') { ('~', true) } else { ('>', false) };
            let (a, b) = line.split_once(sep).ok_or_else(|| Error::Parse {
                line: line_no,
                message: format!("expected `x>y` or `x~y`, got {line:?}"),
            })?;
            let parse = |s: &str| {
                AlternativeId::from_label(s).map_err(|e| Error::Parse { line: line_no, message: e.to_string() })
            };
            let (x, y) = (parse(a)?.index(), parse(b)?.index());
            pairs.push((x, y));
            if symmetric {
                pairs.push((y, x));
            }
        }
        let n = match n {
            Some(n) => n,
            None => pairs.iter().map(|&(x, y)| x.max(y) + 1).max().ok_or(Error::EmptyInput)?,
        };
        let r = BinaryRelation::from_pairs(n, pairs)?;
        Ok(if reflexive { r.reflexive_closure() } else { r })
    }
}
