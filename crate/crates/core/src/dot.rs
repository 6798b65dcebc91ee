//! Graphviz rendering of preference relations.
//!
//! Indifference classes become clusters; arrows point from preferred to
//! dominated classes and form the transitive reduction of the strict part.
//! Nodes, clusters and edges are emitted in ascending label order, so equal
//! relations give byte-identical output.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::relation::{AltSet, AlternativeId, BinaryRelation, RelationClass};

/// Indifference classes of a preorder, ordered by their smallest member.
fn classes(w: &BinaryRelation) -> Vec<AltSet> {
    let mut out: Vec<AltSet> = Vec::new();
    for x in 0..w.n() {
        if out.iter().any(|c| c.contains(AlternativeId::from_index(x))) {
            continue;
        }
        out.push(w.row(x).intersection(w.column(x)));
    }
    out
}

fn rep(class: AltSet) -> AlternativeId {
    class.iter().next().expect("classes are nonempty")
}

/// DOT digraph of a preorder or strict partial order.
pub fn to_dot(r: &BinaryRelation, name: &str) -> Result<String> {
    let w = if RelationClass::Preorder.contains(r) {
        *r
    } else if RelationClass::StrictPartialOrder.contains(r) {
        r.reflexive_closure()
    } else {
        return Err(Error::NotAdmissible("preorder or strict partial order"));
    };
    let classes = classes(&w);
    let above = |a: AltSet, b: AltSet| w.holds(rep(a).index(), rep(b).index()) && !w.holds(rep(b).index(), rep(a).index());

    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{}\" {{", name.replace('"', "'"));
    out.push_str("  compound=true;\n  node [shape=circle];\n");
    let mut cluster_of = vec![None; classes.len()];
    let mut next_cluster = 0;
    for (k, c) in classes.iter().enumerate() {
        if c.len() > 1 {
            let _ = writeln!(out, "  subgraph cluster_{next_cluster} {{");
            out.push_str("    style=rounded;\n");
            for x in c.iter() {
                let _ = writeln!(out, "    {x};");
            }
            out.push_str("  }\n");
            cluster_of[k] = Some(next_cluster);
            next_cluster += 1;
        } else {
            let _ = writeln!(out, "  {};", rep(*c));
        }
    }
    for (i, &a) in classes.iter().enumerate() {
        for (j, &b) in classes.iter().enumerate() {
            if !above(a, b) {
                continue;
            }
            let covered = classes.iter().any(|&c| above(a, c) && above(c, b));
            if covered {
                continue;
            }
            let mut attrs = Vec::new();
            if let Some(k) = cluster_of[i] {
                attrs.push(format!("ltail=cluster_{k}"));
            }
            if let Some(k) = cluster_of[j] {
                attrs.push(format!("lhead=cluster_{k}"));
            }
            let attrs = if attrs.is_empty() { String::new() } else { format!(" [{}]", attrs.join(", ")) };
            let _ = writeln!(out, "  {} -> {}{attrs};", rep(a), rep(b));
        }
    }
    out.push_str("}\n");
    Ok(out)
}

/// Structure read back from [`to_dot`] output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DotGraph {
    /// Indifference classes, singletons included, by smallest member.
    pub classes: Vec<AltSet>,
    /// Arrows between classes, preferred first.
    pub edges: Vec<(AltSet, AltSet)>,
}

impl DotGraph {
    pub fn n(&self) -> usize {
        self.classes.iter().map(|c| c.span()).max().unwrap_or(0)
    }

    /// The preorder whose graph this is: indifference within classes plus the
    /// transitive closure of the arrows.
    pub fn to_preorder(&self) -> Result<BinaryRelation> {
        let n = self.n();
        let mut r = BinaryRelation::identity(n)?;
        for c in &self.classes {
            for x in c.iter() {
                for y in c.iter() {
                    r.insert(x.index(), y.index());
                }
            }
        }
        for &(a, b) in &self.edges {
            for x in a.iter() {
                for y in b.iter() {
                    r.insert(x.index(), y.index());
                }
            }
        }
        Ok(r.transitive_closure())
    }
}

fn malformed(line: usize, message: &str) -> Error {
    Error::Parse { line, message: message.to_string() }
}

/// Parses the subset of DOT written by [`to_dot`].
pub fn parse_dot(text: &str) -> Result<DotGraph> {
    let mut clusters: Vec<AltSet> = Vec::new();
    let mut singles: Vec<AltSet> = Vec::new();
    let mut raw_edges: Vec<(AlternativeId, AlternativeId)> = Vec::new();
    let mut in_cluster = false;
    let mut opened = false;
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let t = line.trim();
        if t.is_empty() || t.starts_with("//") {
            continue;
        }
        if t.starts_with("digraph") && t.ends_with('{') {
            opened = true;
        } else if t.starts_with("subgraph cluster_") && t.ends_with('{') {
            in_cluster = true;
            clusters.push(AltSet::EMPTY);
        } else if t == "}" {
            in_cluster = false;
        } else if t.contains("->") {
            let body = t.split('[').next().unwrap_or(t).trim().trim_end_matches(';');
            let (a, b) = body.split_once("->").ok_or_else(|| malformed(line_no, "bad edge"))?;
            let a = AlternativeId::from_label(a.trim()).map_err(|e| malformed(line_no, &e.to_string()))?;
            let b = AlternativeId::from_label(b.trim()).map_err(|e| malformed(line_no, &e.to_string()))?;
            raw_edges.push((a, b));
        } else if t.contains('=') {
            continue;
        } else if let Some(label) = t.strip_suffix(';') {
            let x = AlternativeId::from_label(label).map_err(|e| malformed(line_no, &e.to_string()))?;
            if in_cluster {
                clusters.last_mut().expect("inside a cluster").insert(x);
            } else {
                singles.push(AltSet::singleton(x));
            }
        } else {
            return Err(malformed(line_no, "unrecognised statement"));
        }
    }
    if !opened {
        return Err(malformed(1, "missing digraph header"));
    }
    let mut classes: Vec<AltSet> = clusters.into_iter().chain(singles).collect();
    classes.sort_by_key(|c| rep(*c));
    let class_of = |x: AlternativeId| classes.iter().copied().find(|c| c.contains(x));
    let edges = raw_edges
        .into_iter()
        .map(|(a, b)| match (class_of(a), class_of(b)) {
            (Some(a), Some(b)) => Ok((a, b)),
            _ => Err(malformed(0, "edge to an undeclared node")),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DotGraph { classes, edges })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_chain() {
        let r = BinaryRelation::from_pairs(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let dot = to_dot(&r, "chain").unwrap();
        assert_eq!(dot.matches("->").count(), 2);
        assert!(dot.contains("  A -> B;\n") && dot.contains("  B -> C;\n"));
        assert_eq!(parse_dot(&dot).unwrap().to_preorder().unwrap(), r.reflexive_closure());
    }

    #[test]
    fn total_indifference() {
        let dot = to_dot(&BinaryRelation::full(3).unwrap(), "all").unwrap();
        assert!(!dot.contains("->"));
        assert_eq!(dot.matches("subgraph").count(), 1);
        let g = parse_dot(&dot).unwrap();
        assert_eq!(g.classes, vec![AltSet::full(3)]);
    }

    #[test]
    fn rejects_cycles() {
        let r = BinaryRelation::from_pairs(2, [(0, 1), (1, 0)]).unwrap();
        assert!(to_dot(&r, "x").is_err());
    }

    #[test]
    fn every_small_preorder_round_trips() {
        for r in crate::relation::catalog(RelationClass::Preorder, 4).unwrap() {
            let dot = to_dot(r, "p").unwrap();
            assert_eq!(parse_dot(&dot).unwrap().to_preorder().unwrap(), *r, "{dot}");
        }
    }
}
