//! Telling revealed indifference apart from revealed indecisiveness.
//!
//! Two behavioural criteria are implemented. Under dominant choice, indifferent
//! alternatives are always chosen or rejected together, while incomparable
//! ones are never chosen in each other's presence. Under undominated choice
//! the data only constrain the strict part, so indifference is read off a
//! weak-preference interpretation of the recovered strict partial order:
//! pairs always chosen or rejected together are candidates for indifference,
//! and choice reversals reveal indecisiveness.

use serde::Serialize;

use crate::dataset::Dataset;
use crate::error::Result;
use crate::models::{distance_score, ModelKind};
use crate::relation::{AlternativeId, BinaryRelation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairStatus {
    /// `x` is strictly better than `y`.
    StrictPreferred,
    /// `y` is strictly better than `x`.
    StrictDispreferred,
    Indifferent,
    Indecisive,
    /// The two alternatives never appear in the same menu.
    Unobserved,
}

impl PairStatus {
    /// Status of the same pair read as `(y, x)`.
    pub fn mirrored(self) -> PairStatus {
        match self {
            PairStatus::StrictPreferred => PairStatus::StrictDispreferred,
            PairStatus::StrictDispreferred => PairStatus::StrictPreferred,
            other => other,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PairStatus::StrictPreferred => "strict-preferred",
            PairStatus::StrictDispreferred => "strict-dispreferred",
            PairStatus::Indifferent => "indifferent",
            PairStatus::Indecisive => "indecisive",
            PairStatus::Unobserved => "unobserved",
        }
    }
}

/// Which rule produced a classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    EliazOk,
    DominantChoice,
    /// Read off a relation rather than off choice patterns.
    FromRelation,
}

impl Criterion {
    pub fn name(self) -> &'static str {
        match self {
            Criterion::EliazOk => "eliaz-ok",
            Criterion::DominantChoice => "dominant-choice",
            Criterion::FromRelation => "from-relation",
        }
    }
}

/// How a pair behaves across the menus containing both of its members.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PairPattern {
    pub co_occurrences: u32,
    /// Both chosen.
    pub joint: u32,
    /// `x` chosen, `y` rejected.
    pub x_only: u32,
    /// `y` chosen, `x` rejected.
    pub y_only: u32,
    /// Both rejected.
    pub neither: u32,
}

impl PairPattern {
    pub fn of(d: &Dataset, x: usize, y: usize) -> PairPattern {
        Self::over(d, x, y, |_| true)
    }

    fn over(d: &Dataset, x: usize, y: usize, keep: impl Fn(usize) -> bool) -> PairPattern {
        let (ax, ay) = (AlternativeId::from_index(x), AlternativeId::from_index(y));
        let mut p = PairPattern::default();
        for (i, o) in d.observations().iter().enumerate() {
            let m = o.menu.members();
            if !keep(i) || !m.contains(ax) || !m.contains(ay) {
                continue;
            }
            p.co_occurrences += 1;
            match (o.choice.contains(ax), o.choice.contains(ay)) {
                (true, true) => p.joint += 1,
                (true, false) => p.x_only += 1,
                (false, true) => p.y_only += 1,
                (false, false) => p.neither += 1,
            }
        }
        p
    }

    /// Chosen or rejected together in every shared menu, jointly chosen at
    /// least once.
    pub fn together(&self) -> bool {
        self.joint > 0 && self.x_only == 0 && self.y_only == 0
    }

    /// Neither is ever chosen while the other is on the menu.
    pub fn never_chosen_together(&self) -> bool {
        self.co_occurrences > 0 && self.joint == 0 && self.x_only == 0 && self.y_only == 0
    }

    /// One is chosen over the other somewhere, and the latter is chosen in the
    /// presence of the former elsewhere.
    pub fn reversal(&self) -> bool {
        (self.x_only > 0 && self.y_only + self.joint > 0) || (self.y_only > 0 && self.x_only + self.joint > 0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PairClassification {
    pub x: AlternativeId,
    pub y: AlternativeId,
    pub status: PairStatus,
    pub criterion: Criterion,
    /// Raw behaviour over the whole dataset.
    pub pattern: PairPattern,
}

impl PairClassification {
    pub fn mirrored(&self) -> PairClassification {
        PairClassification {
            x: self.y,
            y: self.x,
            status: self.status.mirrored(),
            criterion: self.criterion,
            pattern: PairPattern { x_only: self.pattern.y_only, y_only: self.pattern.x_only, ..self.pattern },
        }
    }
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |x| (x + 1..n).map(move |y| (x, y)))
}

fn status_in(r: &BinaryRelation, x: usize, y: usize) -> PairStatus {
    match (r.holds(x, y), r.holds(y, x)) {
        (true, true) => PairStatus::Indifferent,
        (true, false) => PairStatus::StrictPreferred,
        (false, true) => PairStatus::StrictDispreferred,
        (false, false) => PairStatus::Indecisive,
    }
}

/// Partition of all unordered pairs by the parts of a relation. The diagonal
/// is added before reading the relation.
pub fn classify_from_relation(r: &BinaryRelation) -> Vec<PairClassification> {
    let r = r.reflexive_closure();
    pairs(r.n())
        .map(|(x, y)| PairClassification {
            x: AlternativeId::from_index(x),
            y: AlternativeId::from_index(y),
            status: status_in(&r, x, y),
            criterion: Criterion::FromRelation,
            pattern: PairPattern::default(),
        })
        .collect()
}

/// Dominant-choice criterion. Pairs whose pattern fits none of the rules
/// are classified against the first optimal dominant-choice relation.
pub fn separate_dominant(d: &Dataset) -> Result<Vec<PairClassification>> {
    let needs_fallback = pairs(d.n()).any(|(x, y)| dominant_pattern_status(&PairPattern::of(d, x, y)).is_none());
    let fallback = if needs_fallback {
        Some(distance_score(d, ModelKind::DominantChoice)?.optimal_relations[0])
    } else {
        None
    };
    Ok(separate_dominant_with(d, fallback.as_ref()))
}

/// As [`separate_dominant`] with a caller-supplied fallback relation. Without
/// one, inconsistent pairs are reported as indecisive from the relation-free
/// reading.
pub fn separate_dominant_with(d: &Dataset, fallback: Option<&BinaryRelation>) -> Vec<PairClassification> {
    pairs(d.n())
        .map(|(x, y)| {
            let pattern = PairPattern::of(d, x, y);
            let (status, criterion) = match dominant_pattern_status(&pattern) {
                Some(s) => (s, Criterion::DominantChoice),
                None => match fallback {
                    Some(r) => (status_in(&r.reflexive_closure(), x, y), Criterion::FromRelation),
                    None => (PairStatus::Indecisive, Criterion::FromRelation),
                },
            };
            PairClassification { x: AlternativeId::from_index(x), y: AlternativeId::from_index(y), status, criterion, pattern }
        })
        .collect()
}

fn dominant_pattern_status(p: &PairPattern) -> Option<PairStatus> {
    if p.co_occurrences == 0 {
        Some(PairStatus::Unobserved)
    } else if p.together() {
        Some(PairStatus::Indifferent)
    } else if p.never_chosen_together() {
        Some(PairStatus::Indecisive)
    } else if p.joint == 0 && p.x_only > 0 && p.y_only == 0 {
        Some(PairStatus::StrictPreferred)
    } else if p.joint == 0 && p.y_only > 0 && p.x_only == 0 {
        Some(PairStatus::StrictDispreferred)
    } else {
        None
    }
}

/// Outcome of the Eliaz–Ok separation for one subject.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EliazOkReport {
    pub pairs: Vec<PairClassification>,
    /// The weak-preference interpretation of the recovered relation.
    #[serde(skip)]
    pub preorder: BinaryRelation,
    pub regular: bool,
    /// The classification separates indifference from indecisiveness only
    /// when the interpretation is regular.
    pub separating: bool,
    /// Observations the recovered relation does not explain, excluded from
    /// the behavioural tests.
    pub unexplained: Vec<usize>,
}

/// Eliaz–Ok criterion applied to the observations explained by the
/// recovered strict partial order `r`.
///
/// Two alternatives incomparable under `r`, with the same alternatives above
/// and below them, always chosen or rejected together and jointly chosen at
/// least once are read as indifferent; the weak-preference interpretation is
/// `r` plus the diagonal plus those indifferences. Remaining incomparable
/// pairs are indecisive — by the reversal criterion when the explained data
/// show a reversal, otherwise from the relation alone.
pub fn separate_eliaz_ok(d: &Dataset, r: &BinaryRelation) -> Result<EliazOkReport> {
    if d.n() != r.n() {
        return Err(crate::Error::UniverseMismatch { dataset: d.n(), relation: r.n() });
    }
    let strict = r.strict_part();
    let unexplained: Vec<usize> = d
        .observations()
        .iter()
        .enumerate()
        .filter(|(_, o)| strict.maximal_unchecked(o.menu.members()) != o.choice)
        .map(|(i, _)| i)
        .collect();
    let explained = |i: usize| unexplained.binary_search(&i).is_err();

    let n = d.n();
    let same_neighbourhood = |x: usize, y: usize| {
        let others = !(1u8 << x | 1u8 << y);
        strict.row(x).bits() & others == strict.row(y).bits() & others
            && strict.column(x).bits() & others == strict.column(y).bits() & others
    };
    let mut weak = strict.reflexive_closure();
    for (x, y) in pairs(n) {
        let incomparable = !strict.holds(x, y) && !strict.holds(y, x);
        if incomparable && same_neighbourhood(x, y) && PairPattern::over(d, x, y, explained).together() {
            weak.insert(x, y);
            weak.insert(y, x);
        }
    }
    let weak = weak.transitive_closure();
    let regular = weak.is_regular()?;

    let classes = pairs(n)
        .map(|(x, y)| {
            let pattern = PairPattern::of(d, x, y);
            let (status, criterion) = match status_in(&weak, x, y) {
                PairStatus::Indecisive if pattern.co_occurrences == 0 => (PairStatus::Unobserved, Criterion::EliazOk),
                PairStatus::Indecisive if PairPattern::over(d, x, y, explained).reversal() => {
                    (PairStatus::Indecisive, Criterion::EliazOk)
                }
                PairStatus::Indecisive => (PairStatus::Indecisive, Criterion::FromRelation),
                other => (other, Criterion::EliazOk),
            };
            PairClassification { x: AlternativeId::from_index(x), y: AlternativeId::from_index(y), status, criterion, pattern }
        })
        .collect();
    Ok(EliazOkReport { pairs: classes, preorder: weak, regular, separating: regular, unexplained })
}

/// Whether a pair list contains at least one indifferent pair.
pub fn has_indifference(pairs: &[PairClassification]) -> bool {
    pairs.iter().any(|p| p.status == PairStatus::Indifferent)
}
