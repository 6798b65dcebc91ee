//! CSV form: `subject,menu,choice[,order]` with semicolon-joined letter
//! labels. A blank choice is a deferral.

use std::path::Path;

use super::{Dataset, Menu, Observation};
use crate::error::{Error, Result};
use crate::relation::{AltSet, AlternativeId};

fn parse_labels(field: &str, line: usize) -> Result<Vec<AlternativeId>> {
    let field = field.trim();
    if field.is_empty() {
        return Ok(Vec::new());
    }
    field
        .split(';')
        .map(|s| AlternativeId::from_label(s).map_err(|e| Error::Parse { line, message: e.to_string() }))
        .collect()
}

fn join_labels(ids: impl Iterator<Item = AlternativeId>) -> String {
    ids.map(|x| x.label().to_string()).collect::<Vec<_>>().join(";")
}

/// One dataset per subject, in order of first appearance; rows keep their
/// order within a subject. The universe is the smallest one covering every
/// label in the file.
pub fn parse_csv(text: &str, forced: bool) -> Result<Vec<Dataset>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    let names: Vec<&str> = headers.iter().collect();
    let has_order = match names.as_slice() {
        ["subject", "menu", "choice"] => false,
        ["subject", "menu", "choice", "order"] => true,
        _ => {
            return Err(Error::Parse {
                line: 1,
                message: format!("expected header `subject,menu,choice[,order]`, got `{}`", names.join(",")),
            })
        }
    };

    struct Row {
        line: usize,
        subject: String,
        menu: Menu,
        choice: AltSet,
    }

    let mut rows = Vec::new();
    let mut span = 0usize;
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let expected = if has_order { 4 } else { 3 };
        if record.len() != expected {
            return Err(Error::Parse { line, message: format!("expected {expected} fields, got {}", record.len()) });
        }
        let subject = record[0].to_string();
        if subject.is_empty() {
            return Err(Error::Parse { line, message: "empty subject id".into() });
        }
        let members: AltSet = parse_labels(&record[1], line)?.into_iter().collect();
        if members.is_empty() {
            return Err(Error::Parse { line, message: "empty menu".into() });
        }
        let choice_ids = parse_labels(&record[2], line)?;
        let choice: AltSet = choice_ids.iter().copied().collect();
        if !choice.is_subset(members) {
            return Err(Error::Parse { line, message: format!("choice {choice} is not in menu {members}") });
        }
        let menu = match has_order.then(|| record[3].trim().to_string()).filter(|s| !s.is_empty()) {
            Some(order) => {
                let order = parse_labels(&order, line)?;
                let order_set: AltSet = order.iter().copied().collect();
                if order_set != members || order.len() != members.len() {
                    return Err(Error::Parse { line, message: "order is not a permutation of the menu".into() });
                }
                Menu::with_order(order).map_err(|e| Error::Parse { line, message: e.to_string() })?
            }
            None => Menu::new(members)?,
        };
        span = span.max(members.span());
        rows.push(Row { line, subject, menu, choice });
    }

    let mut subjects: Vec<(String, Vec<(usize, Observation)>)> = Vec::new();
    for row in rows {
        let obs = Observation { menu: row.menu, choice: row.choice };
        match subjects.iter_mut().find(|(s, _)| *s == row.subject) {
            Some((_, list)) => list.push((row.line, obs)),
            None => subjects.push((row.subject, vec![(row.line, obs)])),
        }
    }

    subjects
        .into_iter()
        .map(|(subject, list)| {
            let lines: Vec<usize> = list.iter().map(|(l, _)| *l).collect();
            let observations = list.into_iter().map(|(_, o)| o).collect();
            Dataset::new(subject.clone(), span.max(1), forced, observations).map_err(|e| match e {
                Error::Parse { line, message } => Error::Parse {
                    line: lines.get(line.wrapping_sub(1)).copied().unwrap_or(0),
                    message: format!("subject {subject}: {message}"),
                },
                other => other,
            })
        })
        .collect()
}

pub fn parse_csv_path(path: impl AsRef<Path>, forced: bool) -> Result<Vec<Dataset>> {
    let text = std::fs::read_to_string(path)?;
    parse_csv(&text, forced)
}

/// Canonical CSV: the `order` column is written only when some menu carries
/// an explicit list order.
pub fn write_csv(datasets: &[Dataset]) -> String {
    let with_order = datasets.iter().flat_map(|d| d.observations()).any(|o| o.menu.has_explicit_order());
    let mut out = String::from(if with_order { "subject,menu,choice,order\n" } else { "subject,menu,choice\n" });
    for d in datasets {
        for o in d.observations() {
            out.push_str(&d.subject_id);
            out.push(',');
            out.push_str(&join_labels(o.menu.members().iter()));
            out.push(',');
            out.push_str(&join_labels(o.choice.iter()));
            if with_order {
                out.push(',');
                if o.menu.has_explicit_order() {
                    out.push_str(&join_labels(o.menu.list_order().iter().copied()));
                }
            }
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_rows() {
        let ds = parse_csv("subject,menu,choice\ns1,A;B,A\ns1,A;C,\n", false).unwrap();
        assert_eq!(ds.len(), 1);
        let d = &ds[0];
        assert_eq!(d.n(), 3);
        assert_eq!(d.observations()[0].choice.to_string(), "{A}");
        assert!(d.observations()[1].is_deferral());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_csv("subject,menu,choice\ns1,A;B,A\ns1,A;B,C\n", false).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
        let dup = parse_csv("subject,menu,choice\ns1,A;B,A\ns1,B;A,B\n", false).unwrap_err();
        assert!(matches!(dup, Error::Parse { line: 3, .. }), "{dup:?}");
        let forced = parse_csv("subject,menu,choice\ns1,A;B,\n", true).unwrap_err();
        assert!(matches!(forced, Error::Parse { line: 2, .. }), "{forced:?}");
        assert!(parse_csv("who,menu,choice\n", false).is_err());
        assert!(parse_csv("subject,menu,choice\ns1,A;B\n", false).is_err());
    }

    #[test]
    fn order_column() {
        let ds = parse_csv("subject,menu,choice,order\ns1,A;B;C,B,C;B;A\ns1,A;B,A,\n", false).unwrap();
        let o = &ds[0].observations()[0];
        assert_eq!(o.menu.position(AlternativeId::from_label("C").unwrap()), Some(1));
        assert!(!ds[0].observations()[1].menu.has_explicit_order());
        assert!(parse_csv("subject,menu,choice,order\ns1,A;B,A,A;C\n", false).is_err());
        let text = write_csv(&ds);
        assert_eq!(text, "subject,menu,choice,order\ns1,A;B;C,B,C;B;A\ns1,A;B,A,\n");
    }

    fn arb_rows() -> impl Strategy<Value = Vec<(u8, u8, u8)>> {
        // (subject, menu bits, choice bits) over 5 alternatives
        proptest::collection::vec((0u8..3, 1u8..32, 0u8..32), 1..30)
    }

    proptest! {
        #[test]
        fn write_then_parse_is_identity(rows in arb_rows()) {
            let mut text = String::from("subject,menu,choice\n");
            let mut seen = std::collections::HashSet::new();
            for (s, m, c) in rows {
                if !seen.insert((s, m)) {
                    continue;
                }
                let menu = AltSet::from_bits(m);
                let choice = AltSet::from_bits(c & m);
                text.push_str(&format!("s{s},{},{}\n", join_labels(menu.iter()), join_labels(choice.iter())));
            }
            let parsed = parse_csv(&text, false).unwrap();
            let written = write_csv(&parsed);
            let reparsed = parse_csv(&written, false).unwrap();
            prop_assert_eq!(&parsed, &reparsed);
            prop_assert_eq!(write_csv(&reparsed), written);
        }
    }
}
