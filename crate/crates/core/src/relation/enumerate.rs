//! Exhaustive enumeration of relation classes by one-point extension.
//!
//! A transitive relation on `0..=k` is determined by its restriction to
//! `0..k` together with the up-set `U = {y : k R y}` and the down-set
//! `D = {y : y R k}` of the new point. The extension is transitive iff `U` is
//! up-closed, `D` is down-closed and every `y ∈ D` relates to every `z ∈ U`.
//! Only those `(U, D)` pairs are expanded, so no non-transitive candidate is
//! ever built.

use std::sync::OnceLock;

use super::{BinaryRelation, RelationClass, MAX_ALTERNATIVES};
use crate::error::{Error, Result};

#[derive(Clone, Copy)]
struct Shape {
    reflexive: bool,
    complete: bool,
}

/// Every relation of `class` on `n` alternatives, exactly once, sorted by
/// canonical (row-major lexicographic) order.
pub fn enumerate(class: RelationClass, n: usize) -> Result<Vec<BinaryRelation>> {
    if n == 0 || n > MAX_ALTERNATIVES {
        return Err(Error::UniverseSize(n));
    }
    let (shape, incomplete_only) = match class {
        RelationClass::Preorder => (Shape { reflexive: true, complete: false }, false),
        RelationClass::IncompletePreorder => (Shape { reflexive: true, complete: false }, true),
        RelationClass::WeakOrder => (Shape { reflexive: true, complete: true }, false),
        RelationClass::StrictPartialOrder => (Shape { reflexive: false, complete: false }, false),
        RelationClass::LinearOrder => (Shape { reflexive: false, complete: true }, false),
    };
    let mut out = Vec::new();
    let start = BinaryRelation::from_rows(n, [0; MAX_ALTERNATIVES]);
    extend(start, 0, n, shape, &mut out);
    if incomplete_only {
        out.retain(|r| !r.properties().complete);
    }
    out.sort_unstable_by_key(|r| r.canonical_key());
    Ok(out)
}

fn extend(r: BinaryRelation, k: usize, n: usize, shape: Shape, out: &mut Vec<BinaryRelation>) {
    if k == n {
        out.push(r);
        return;
    }
    let subsets = 1u16 << k;
    let prefix = (subsets - 1) as u8;
    let cols: Vec<u8> = (0..k).map(|y| r.column(y).bits()).collect();

    let up_closed: Vec<u8> = (0..subsets)
        .map(|s| s as u8)
        .filter(|&u| members(u).all(|y| r.rows[y] & prefix & !u == 0))
        .collect();
    let down_closed: Vec<u8> = (0..subsets)
        .map(|s| s as u8)
        .filter(|&d| members(d).all(|y| cols[y] & !d == 0))
        .collect();

    for &d in &down_closed {
        // every z in U must be above every y in D
        let meet = members(d).fold(prefix, |acc, y| acc & r.rows[y]);
        for &u in &up_closed {
            if u & !meet != 0 {
                continue;
            }
            if shape.complete && (u | d) != prefix {
                continue;
            }
            let mut next = r;
            next.rows[k] = u | if shape.reflexive { 1 << k } else { 0 };
            for y in members(d) {
                next.rows[y] |= 1 << k;
            }
            extend(next, k + 1, n, shape, out);
        }
    }
}

fn members(bits: u8) -> impl Iterator<Item = usize> {
    (0..8).filter(move |i| bits & (1 << i) != 0)
}

type Slot = OnceLock<Vec<BinaryRelation>>;

fn slots() -> &'static [[Slot; MAX_ALTERNATIVES]; 6] {
    static SLOTS: OnceLock<[[Slot; MAX_ALTERNATIVES]; 6]> = OnceLock::new();
    SLOTS.get_or_init(|| std::array::from_fn(|_| std::array::from_fn(|_| OnceLock::new())))
}

fn class_slot(class: RelationClass) -> usize {
    match class {
        RelationClass::WeakOrder => 0,
        RelationClass::StrictPartialOrder => 1,
        RelationClass::IncompletePreorder => 2,
        RelationClass::Preorder => 3,
        RelationClass::LinearOrder => 4,
    }
}

/// Process-wide cached enumeration of `class` on `n` alternatives.
pub fn catalog(class: RelationClass, n: usize) -> Result<&'static [BinaryRelation]> {
    if n == 0 || n > MAX_ALTERNATIVES {
        return Err(Error::UniverseSize(n));
    }
    let slot = &slots()[class_slot(class)][n - 1];
    Ok(slot.get_or_init(|| enumerate(class, n).expect("universe size checked")).as_slice())
}

/// Strict partial orders with at least one incomparable pair, cached.
pub fn incomplete_strict_catalog(n: usize) -> Result<&'static [BinaryRelation]> {
    if n == 0 || n > MAX_ALTERNATIVES {
        return Err(Error::UniverseSize(n));
    }
    let slot = &slots()[5][n - 1];
    Ok(slot
        .get_or_init(|| {
            let all = catalog(RelationClass::StrictPartialOrder, n).expect("universe size checked");
            all.iter().filter(|r| !r.properties().complete).copied().collect()
        })
        .as_slice())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Filter all 2^(n²) matrices by the class definition.
    fn brute_force(class: RelationClass, n: usize) -> Vec<BinaryRelation> {
        let cells = n * n;
        let mut out = Vec::new();
        for mask in 0u64..(1u64 << cells) {
            let pairs = (0..cells).filter(|b| mask & (1 << b) != 0).map(|b| (b / n, b % n));
            let r = BinaryRelation::from_pairs(n, pairs).unwrap();
            if class.contains(&r) {
                out.push(r);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn small_counts() {
        let expect = [
            (RelationClass::WeakOrder, 13),
            (RelationClass::StrictPartialOrder, 19),
            (RelationClass::Preorder, 29),
            (RelationClass::IncompletePreorder, 16),
            (RelationClass::LinearOrder, 6),
        ];
        for (class, count) in expect {
            assert_eq!(enumerate(class, 3).unwrap().len(), count, "{class:?}");
        }
        assert_eq!(enumerate(RelationClass::WeakOrder, 1).unwrap().len(), 1);
    }

    #[test]
    fn matches_brute_force_up_to_four() {
        for n in 1..=4 {
            for class in RelationClass::ALL {
                assert_eq!(enumerate(class, n).unwrap(), brute_force(class, n), "{class:?} n={n}");
            }
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(enumerate(RelationClass::Preorder, 0).is_err());
        assert!(enumerate(RelationClass::Preorder, 8).is_err());
    }

    #[test]
    fn deterministic_and_sorted() {
        let a = enumerate(RelationClass::Preorder, 4).unwrap();
        let b = enumerate(RelationClass::Preorder, 4).unwrap();
        assert_eq!(a, b);
        assert!(a.windows(2).all(|w| w[0].canonical_key() < w[1].canonical_key()));
    }

    #[test]
    fn incomplete_strict_excludes_linear_orders() {
        let n = 4;
        let all = catalog(RelationClass::StrictPartialOrder, n).unwrap().len();
        let lin = catalog(RelationClass::LinearOrder, n).unwrap().len();
        assert_eq!(incomplete_strict_catalog(n).unwrap().len(), all - lin);
    }
}
