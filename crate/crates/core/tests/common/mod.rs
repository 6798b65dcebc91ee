//! Independent oracles and fixtures shared by the integration tests.
//!
//! The oracles never call the library's relation algebra: classes come from
//! filtering every n×n boolean matrix with hand-written property loops, and
//! predictions are computed by direct double loops.

#![allow(dead_code)]

use std::path::PathBuf;

use revpref::dataset::{parse_csv_path, Dataset};
use revpref::models::ModelKind;
use revpref::relation::{AltSet, BinaryRelation};

/// Row-major matrix: bit `x * n + y` set when `x R y`.
pub type Matrix = u64;

fn get(m: Matrix, n: usize, x: usize, y: usize) -> bool {
    m >> (x * n + y) & 1 == 1
}

fn reflexive(m: Matrix, n: usize) -> bool {
    (0..n).all(|x| get(m, n, x, x))
}

fn irreflexive(m: Matrix, n: usize) -> bool {
    (0..n).all(|x| !get(m, n, x, x))
}

fn transitive(m: Matrix, n: usize) -> bool {
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if get(m, n, x, y) && get(m, n, y, z) && !get(m, n, x, z) {
                    return false;
                }
            }
        }
    }
    true
}

fn has_incomparable_pair(m: Matrix, n: usize) -> bool {
    (0..n).any(|x| (0..n).any(|y| x != y && !get(m, n, x, y) && !get(m, n, y, x)))
}

/// Admissible matrices of a model, found by filtering all `2^(n²)` matrices.
pub fn oracle_class(kind: ModelKind, n: usize) -> Vec<Matrix> {
    assert!(n <= 4, "oracle is exhaustive");
    (0..1u64 << (n * n))
        .filter(|&m| match kind {
            ModelKind::RationalChoice => reflexive(m, n) && transitive(m, n) && !has_incomparable_pair(m, n),
            ModelKind::UndominatedChoice => {
                irreflexive(m, n)
                    && transitive(m, n)
                    && (0..n).all(|x| (0..n).all(|y| !(get(m, n, x, y) && get(m, n, y, x))))
                    && has_incomparable_pair(m, n)
            }
            ModelKind::DominantChoice => reflexive(m, n) && transitive(m, n) && has_incomparable_pair(m, n),
        })
        .collect()
}

/// Predicted chosen set as a bitmask.
pub fn oracle_choice(m: Matrix, n: usize, menu: u8, kind: ModelKind) -> u8 {
    let members: Vec<usize> = (0..n).filter(|&x| menu >> x & 1 == 1).collect();
    let mut out = 0u8;
    for &x in &members {
        let keep = match kind {
            ModelKind::UndominatedChoice => members.iter().all(|&y| !(get(m, n, y, x) && !get(m, n, x, y))),
            _ => members.iter().all(|&y| get(m, n, x, y)),
        };
        if keep {
            out |= 1 << x;
        }
    }
    out
}

pub fn to_relation(m: Matrix, n: usize) -> BinaryRelation {
    let pairs = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).filter(|&(x, y)| get(m, n, x, y));
    BinaryRelation::from_pairs(n, pairs).unwrap()
}

/// Brute-force distance score and the sorted set of minimizers.
pub fn oracle_score(d: &Dataset, kind: ModelKind, class: &[Matrix]) -> (u32, Vec<BinaryRelation>) {
    let n = d.n();
    let mut best = u32::MAX;
    let mut arg = Vec::new();
    for &m in class {
        let dist = d
            .observations()
            .iter()
            .filter(|o| oracle_choice(m, n, o.menu.members().bits(), kind) != o.choice.bits())
            .count() as u32;
        if dist < best {
            best = dist;
            arg.clear();
        }
        if dist == best {
            arg.push(to_relation(m, n));
        }
    }
    arg.sort();
    (best, arg)
}

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures").join(name)
}

pub fn load_fixture(name: &str, forced: bool) -> Dataset {
    let mut ds = parse_csv_path(fixture_path(name), forced).unwrap();
    assert_eq!(ds.len(), 1);
    ds.remove(0)
}

pub const A: usize = 0;
pub const B: usize = 1;
pub const C: usize = 2;
pub const D: usize = 3;
pub const E: usize = 4;
pub const F: usize = 5;

pub fn set(labels: &str) -> AltSet {
    labels.chars().map(|c| revpref::relation::AlternativeId::from_label(&c.to_string()).unwrap()).collect()
}

/// The dominant-choice subject: A and F indifferent at the top; B over C over
/// D; E over D; E incomparable to B and C.
pub fn dominant_subject_relation() -> BinaryRelation {
    let mut pairs = vec![(A, F), (F, A), (B, C), (C, D), (B, D), (E, D)];
    for top in [A, F] {
        for x in [B, C, D, E] {
            pairs.push((top, x));
        }
    }
    BinaryRelation::from_pairs(6, pairs).unwrap().reflexive_closure()
}

/// The undominated-choice subject's strict preference: E over A and F, both
/// over D; B over C.
pub fn undominated_subject_relation() -> BinaryRelation {
    BinaryRelation::from_pairs(6, [(E, A), (E, F), (A, D), (F, D), (E, D), (B, C)]).unwrap()
}

/// Deterministic generator for sampling inside tests.
pub fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}
