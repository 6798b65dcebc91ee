//! Exact minimum-distance search over an enumerated relation class.
//!
//! Each relation's predicted choice on every menu is laid out as one byte per
//! menu (the chosen subset as a bitmask, `0` for deferral), padded to a
//! multiple of [`SEGMENT`]. A subject's observed choices use the same layout,
//! so the distance to a relation is the number of differing bytes. The scan
//! compares one segment at a time and abandons a relation as soon as its
//! running count exceeds the subject's best so far. Minimizers are kept in
//! canonical relation order.

use std::collections::HashMap;

use crate::dataset::{Dataset, MenuCollection};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::relation::{AltSet, BinaryRelation};

const SEGMENT: usize = 16;
const CHUNK: usize = 2048;
const SUBJECT_BLOCK: usize = 32;
/// Tables larger than this are rebuilt chunk by chunk instead of stored.
const MATERIALIZE_LIMIT: usize = 256 << 20;

/// How a relation turns a menu into a predicted choice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChoiceRule {
    /// Greatest elements: `x ≿ y` for every `y` in the menu. May be empty.
    Greatest,
    /// Elements not strictly dominated by another menu member.
    Maximal,
}

impl ChoiceRule {
    #[inline]
    pub fn apply(self, r: &BinaryRelation, menu: AltSet) -> AltSet {
        match self {
            ChoiceRule::Greatest => r.greatest_unchecked(menu),
            ChoiceRule::Maximal => r.strict_part().maximal_unchecked(menu),
        }
    }
}

/// Best score of one subject.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubjectScore {
    pub score: u32,
    pub optimal_count: usize,
    /// Indices of minimizing relations, ascending; empty unless collected.
    pub optimal: Vec<u32>,
}

#[derive(Clone)]
struct Running {
    best: u32,
    count: usize,
    optimal: Vec<u32>,
}

impl Running {
    fn new() -> Self {
        Running { best: u32::MAX, count: 0, optimal: Vec::new() }
    }

    #[inline]
    fn offer(&mut self, index: u32, distance: u32, collect: bool) {
        if distance < self.best {
            self.best = distance;
            self.count = 0;
            self.optimal.clear();
        }
        if distance == self.best {
            self.count += 1;
            if collect {
                self.optimal.push(index);
            }
        }
    }

    /// `self` covers relations preceding those of `later`.
    fn merge(mut self, later: Running) -> Running {
        if later.best < self.best {
            return later;
        }
        if later.best == self.best {
            self.count += later.count;
            self.optimal.extend(later.optimal);
        }
        self
    }

    fn finish(self) -> SubjectScore {
        SubjectScore { score: self.best, optimal_count: self.count, optimal: self.optimal }
    }
}

#[inline(always)]
fn segment_mismatches(a: &[u8], b: &[u8]) -> u32 {
    let a: &[u8; SEGMENT] = a.try_into().expect("segment");
    let b: &[u8; SEGMENT] = b.try_into().expect("segment");
    let mut n = 0u8;
    for i in 0..SEGMENT {
        n += u8::from(a[i] != b[i]);
    }
    u32::from(n)
}

/// Number of differing bytes, or some value above `bound` once the running
/// count exceeds it.
#[inline]
fn bounded_distance(row: &[u8], observed: &[u8], bound: u32) -> u32 {
    let mut total = 0u32;
    for (a, b) in row.chunks_exact(SEGMENT).zip(observed.chunks_exact(SEGMENT)) {
        total += segment_mismatches(a, b);
        if total > bound {
            return total;
        }
    }
    total
}

/// Predicted outcomes of a list of relations on a fixed list of menus.
pub struct PredictionTable<'r> {
    relations: &'r [BinaryRelation],
    rule: ChoiceRule,
    menus: Vec<AltSet>,
    index_of: HashMap<u8, usize>,
    stride: usize,
    outcomes: Option<Vec<u8>>,
}

impl<'r> PredictionTable<'r> {
    pub fn new(relations: &'r [BinaryRelation], rule: ChoiceRule, menus: &MenuCollection) -> Self {
        let menus: Vec<AltSet> = menus.menus().iter().map(|m| m.members()).collect();
        let stride = menus.len().div_ceil(SEGMENT).max(1) * SEGMENT;
        let index_of = menus.iter().enumerate().map(|(i, m)| (m.bits(), i)).collect();
        let mut table = PredictionTable { relations, rule, menus, index_of, stride, outcomes: None };
        if relations.len().saturating_mul(stride) <= MATERIALIZE_LIMIT {
            let mut all = vec![0u8; relations.len() * stride];
            for (i, row) in all.chunks_exact_mut(stride).enumerate() {
                table.fill_row(&relations[i], row);
            }
            table.outcomes = Some(all);
        }
        table
    }

    pub fn relations(&self) -> &'r [BinaryRelation] {
        self.relations
    }

    pub fn menus(&self) -> &[AltSet] {
        &self.menus
    }

    fn fill_row(&self, r: &BinaryRelation, row: &mut [u8]) {
        let r = match self.rule {
            ChoiceRule::Greatest => *r,
            ChoiceRule::Maximal => r.strict_part(),
        };
        for (slot, &menu) in row.iter_mut().zip(&self.menus) {
            *slot = match self.rule {
                ChoiceRule::Greatest => r.greatest_unchecked(menu),
                ChoiceRule::Maximal => r.maximal_unchecked(menu),
            }
            .bits();
        }
    }

    fn chunk_count(&self) -> usize {
        self.relations.len().div_ceil(CHUNK)
    }

    fn chunk<'b>(&'b self, c: usize, buf: &'b mut Vec<u8>) -> &'b [u8] {
        let start = c * CHUNK;
        let end = (start + CHUNK).min(self.relations.len());
        match &self.outcomes {
            Some(all) => &all[start * self.stride..end * self.stride],
            None => {
                buf.clear();
                buf.resize((end - start) * self.stride, 0);
                for (i, row) in buf.chunks_exact_mut(self.stride).enumerate() {
                    self.fill_row(&self.relations[start + i], row);
                }
                buf
            }
        }
    }

    /// Observed choices of `d` in table layout. Every menu of the table must
    /// be observed exactly once.
    pub fn observed(&self, d: &Dataset) -> Result<Vec<u8>> {
        if d.len() != self.menus.len() {
            return Err(Error::Internal(format!(
                "dataset has {} observations, table has {} menus",
                d.len(),
                self.menus.len()
            )));
        }
        let mut v = vec![0u8; self.stride];
        for o in d.observations() {
            let i = *self.index_of.get(&o.menu.members().bits()).ok_or_else(|| {
                Error::Internal(format!("menu {} is not part of the prediction table", o.menu.members()))
            })?;
            v[i] = o.choice.bits();
        }
        Ok(v)
    }

    fn scan_chunk(&self, c: usize, outcomes: &[u8], observed: &[u8], state: &mut Running, collect: bool) {
        let base = (c * CHUNK) as u32;
        for (j, row) in outcomes.chunks_exact(self.stride).enumerate() {
            let d = bounded_distance(row, observed, state.best);
            if d <= state.best {
                state.offer(base + j as u32, d, collect);
            }
        }
    }

    /// Exact minimum for one subject; parallel over relation chunks.
    pub fn score_one(&self, observed: &[u8], collect: bool, exec: Execution) -> SubjectScore {
        debug_assert_eq!(observed.len(), self.stride);
        let partials = exec.map_range(self.chunk_count(), |c| {
            let mut buf = Vec::new();
            let outcomes = self.chunk(c, &mut buf);
            let mut state = Running::new();
            self.scan_chunk(c, outcomes, observed, &mut state, collect);
            state
        });
        partials.into_iter().fold(Running::new(), Running::merge).finish()
    }

    /// Exact minima for many subjects; parallel over blocks of subjects.
    pub fn score_many(&self, observed: &[Vec<u8>], collect: bool, exec: Execution) -> Vec<SubjectScore> {
        let blocks: Vec<&[Vec<u8>]> = observed.chunks(SUBJECT_BLOCK).collect();
        exec.map_slice(&blocks, |block| {
            let mut states = vec![Running::new(); block.len()];
            let mut buf = Vec::new();
            for c in 0..self.chunk_count() {
                let outcomes = self.chunk(c, &mut buf);
                for (state, obs) in states.iter_mut().zip(block.iter()) {
                    self.scan_chunk(c, outcomes, obs, state, collect);
                }
            }
            states.into_iter().map(Running::finish).collect::<Vec<_>>()
        })
        .into_iter()
        .flatten()
        .collect()
    }
}
