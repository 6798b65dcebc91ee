//! The three deterministic choice models, forward prediction and
//! model-based Houtman–Maks distance scoring.
//!
//! A model's distance score for a dataset is the smallest number of
//! observations whose choice differs from the prediction of some admissible
//! instance. A mismatch counts once per menu however many items differ.

pub mod engine;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::dataset::{active_subdataset, Dataset, MenuCollection, Observation};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::relation::{catalog, incomplete_strict_catalog, AltSet, BinaryRelation, RelationClass};

pub use engine::{ChoiceRule, PredictionTable, SubjectScore};

/// Serialized by its short code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ModelKind {
    /// Greatest elements of a weak order.
    #[serde(rename = "rc")]
    RationalChoice,
    /// Undominated elements of an incomplete strict partial order.
    #[serde(rename = "uc")]
    UndominatedChoice,
    /// Greatest elements of an incomplete preorder; defers when there are none.
    #[serde(rename = "dc")]
    DominantChoice,
}

impl ModelKind {
    pub const ALL: [ModelKind; 3] = [ModelKind::RationalChoice, ModelKind::UndominatedChoice, ModelKind::DominantChoice];

    pub fn code(self) -> &'static str {
        match self {
            ModelKind::RationalChoice => "rc",
            ModelKind::UndominatedChoice => "uc",
            ModelKind::DominantChoice => "dc",
        }
    }

    pub fn from_code(code: &str) -> Result<Self> {
        ModelKind::ALL
            .into_iter()
            .find(|k| k.code() == code.trim().to_ascii_lowercase())
            .ok_or_else(|| Error::Parse { line: 0, message: format!("unknown model {code:?} (expected rc, uc or dc)") })
    }

    pub fn rule(self) -> ChoiceRule {
        match self {
            ModelKind::UndominatedChoice => ChoiceRule::Maximal,
            _ => ChoiceRule::Greatest,
        }
    }

    /// Admissible relations on `n` alternatives, in canonical order.
    pub fn admissible(self, n: usize) -> Result<&'static [BinaryRelation]> {
        match self {
            ModelKind::RationalChoice => catalog(RelationClass::WeakOrder, n),
            ModelKind::UndominatedChoice => incomplete_strict_catalog(n),
            ModelKind::DominantChoice => catalog(RelationClass::IncompletePreorder, n),
        }
    }

    pub fn is_admissible(self, r: &BinaryRelation) -> bool {
        match self {
            ModelKind::RationalChoice => RelationClass::WeakOrder.contains(r),
            ModelKind::UndominatedChoice => {
                RelationClass::StrictPartialOrder.contains(r) && !RelationClass::LinearOrder.contains(r)
            }
            ModelKind::DominantChoice => RelationClass::IncompletePreorder.contains(r),
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// A model bound to one admissible relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModelInstance {
    kind: ModelKind,
    relation: BinaryRelation,
}

impl ModelInstance {
    pub fn new(kind: ModelKind, relation: BinaryRelation) -> Result<Self> {
        if !kind.is_admissible(&relation) {
            return Err(Error::NotAdmissible(match kind {
                ModelKind::RationalChoice => "weak order",
                ModelKind::UndominatedChoice => "incomplete strict partial order",
                ModelKind::DominantChoice => "incomplete preorder",
            }));
        }
        Ok(ModelInstance { kind, relation })
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn relation(&self) -> &BinaryRelation {
        &self.relation
    }
}

/// Minimal distance of a dataset to a model and every relation attaining it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScoreResult {
    pub kind: ModelKind,
    pub score: u32,
    #[serde(skip)]
    pub optimal_relations: Vec<BinaryRelation>,
}

pub fn predict(instance: &ModelInstance, menu: AltSet) -> Result<AltSet> {
    let r = instance.relation();
    let choice = match instance.kind {
        ModelKind::UndominatedChoice => r.strict_part().maximal_elements(menu)?,
        _ => r.greatest_elements(menu)?,
    };
    if choice.is_empty() && instance.kind == ModelKind::RationalChoice {
        return Err(Error::CorruptedInstance);
    }
    Ok(choice)
}

/// Number of observations whose choice differs from the prediction.
pub fn instance_distance(instance: &ModelInstance, d: &Dataset) -> Result<u32> {
    check_universe(d, instance.relation())?;
    let mut mismatches = 0;
    for o in d.observations() {
        if predict(instance, o.menu.members())? != o.choice {
            mismatches += 1;
        }
    }
    Ok(mismatches)
}

fn check_universe(d: &Dataset, r: &BinaryRelation) -> Result<()> {
    if d.n() != r.n() {
        return Err(Error::UniverseMismatch { dataset: d.n(), relation: r.n() });
    }
    Ok(())
}

/// One observation per menu, chosen as the instance predicts.
pub fn generate_dataset(instance: &ModelInstance, mc: &MenuCollection) -> Result<Dataset> {
    if mc.n() != instance.relation().n() {
        return Err(Error::UniverseMismatch { dataset: mc.n(), relation: instance.relation().n() });
    }
    let observations = mc
        .menus()
        .iter()
        .map(|m| Ok(Observation { menu: m.clone(), choice: predict(instance, m.members())? }))
        .collect::<Result<Vec<_>>>()?;
    Dataset::new("generated", mc.n(), instance.kind != ModelKind::DominantChoice, observations)
}

/// Minimum distance over an arbitrary relation list under `rule`, with all
/// minimizers in list order.
pub fn score_relations(
    d: &Dataset,
    relations: &[BinaryRelation],
    rule: ChoiceRule,
    exec: Execution,
) -> Result<(u32, Vec<BinaryRelation>)> {
    if d.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if relations.is_empty() {
        return Err(Error::NoAdmissibleRelations(d.n()));
    }
    let table = PredictionTable::new(relations, rule, &MenuCollection::of_dataset(d));
    let s = table.score_one(&table.observed(d)?, true, exec);
    Ok((s.score, s.optimal.iter().map(|&i| relations[i as usize]).collect()))
}

/// Exact minimum distance over the kind's full admissible class.
pub fn distance_score(d: &Dataset, kind: ModelKind) -> Result<ScoreResult> {
    distance_score_with(d, kind, Execution::default())
}

pub fn distance_score_with(d: &Dataset, kind: ModelKind, exec: Execution) -> Result<ScoreResult> {
    let relations = kind.admissible(d.n())?;
    let (score, optimal_relations) = score_relations(d, relations, kind.rule(), exec)?;
    Ok(ScoreResult { kind, score, optimal_relations })
}

/// Scores many datasets against several models, sharing one prediction table
/// per (model, menu collection).
pub struct Scorer {
    exec: Execution,
    collect_relations: bool,
}

impl Default for Scorer {
    fn default() -> Self {
        Scorer { exec: Execution::default(), collect_relations: true }
    }
}

impl Scorer {
    pub fn new(exec: Execution) -> Self {
        Scorer { exec, collect_relations: true }
    }

    /// Skip materialising optimal relation lists; `optimal_relations` stays
    /// empty and only scores are reported.
    pub fn scores_only(mut self) -> Self {
        self.collect_relations = false;
        self
    }

    /// `result[i][j]` is dataset `i` under `kinds[j]`.
    pub fn score_all(&self, datasets: &[Dataset], kinds: &[ModelKind]) -> Result<Vec<Vec<ScoreResult>>> {
        if let Some(d) = datasets.iter().find(|d| d.is_empty()) {
            let _ = d;
            return Err(Error::EmptyDataset);
        }
        let mut groups: BTreeMap<(usize, Vec<u8>), Vec<usize>> = BTreeMap::new();
        for (i, d) in datasets.iter().enumerate() {
            let mc = MenuCollection::of_dataset(d);
            let key: Vec<u8> = mc.menus().iter().map(|m| m.members().bits()).collect();
            groups.entry((d.n(), key)).or_default().push(i);
        }
        let mut out: Vec<Vec<Option<ScoreResult>>> = vec![vec![None; kinds.len()]; datasets.len()];
        for members in groups.values() {
            let mc = MenuCollection::of_dataset(&datasets[members[0]]);
            for (j, &kind) in kinds.iter().enumerate() {
                let relations = kind.admissible(mc.n())?;
                if relations.is_empty() {
                    return Err(Error::NoAdmissibleRelations(mc.n()));
                }
                let table = PredictionTable::new(relations, kind.rule(), &mc);
                let observed = members.iter().map(|&i| table.observed(&datasets[i])).collect::<Result<Vec<_>>>()?;
                let scores = table.score_many(&observed, self.collect_relations, self.exec);
                for (&i, s) in members.iter().zip(scores) {
                    out[i][j] = Some(ScoreResult {
                        kind,
                        score: s.score,
                        optimal_relations: s.optimal.iter().map(|&k| relations[k as usize]).collect(),
                    });
                }
            }
        }
        Ok(out.into_iter().map(|row| row.into_iter().map(|r| r.expect("every cell scored")).collect()).collect())
    }

    /// Minimum scores only, one entry per dataset, for one model.
    pub fn min_scores(&self, datasets: &[Dataset], kind: ModelKind) -> Result<Vec<u32>> {
        let quiet = Scorer { exec: self.exec, collect_relations: false };
        Ok(quiet.score_all(datasets, &[kind])?.into_iter().map(|row| row[0].score).collect())
    }
}

/// Outcome of model selection for one subject.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BestModel {
    pub kind: ModelKind,
    pub result: ScoreResult,
    /// Other kinds with the same minimal score.
    pub tied_with: Vec<ModelKind>,
}

impl BestModel {
    pub fn tie_with_rc(&self) -> bool {
        self.kind == ModelKind::RationalChoice && !self.tied_with.is_empty()
    }
}

/// Picks the minimal score. Ties involving rational choice go to rational
/// choice; other ties go to the earliest listed kind.
pub fn best_of(results: &[ScoreResult]) -> Option<BestModel> {
    let min = results.iter().map(|r| r.score).min()?;
    let tied: Vec<&ScoreResult> = results.iter().filter(|r| r.score == min).collect();
    let winner = tied
        .iter()
        .find(|r| r.kind == ModelKind::RationalChoice)
        .copied()
        .unwrap_or(tied[0]);
    Some(BestModel {
        kind: winner.kind,
        result: winner.clone(),
        tied_with: tied.iter().map(|r| r.kind).filter(|&k| k != winner.kind).collect(),
    })
}

pub fn best_model(d: &Dataset, kinds: &[ModelKind]) -> Result<BestModel> {
    if kinds.is_empty() {
        return Err(Error::EmptyInput);
    }
    let results = kinds.iter().map(|&k| distance_score(d, k)).collect::<Result<Vec<_>>>()?;
    Ok(best_of(&results).expect("kinds nonempty"))
}

/// Houtman–Maks index of the active choices: how many nonempty choices must
/// go before the rest is rationalizable by rational choice. Zero when there
/// are no active choices.
pub fn houtman_maks_active(d: &Dataset) -> Result<u32> {
    let active = active_subdataset(d);
    if active.is_empty() {
        return Ok(0);
    }
    Ok(distance_score(&active, ModelKind::RationalChoice)?.score)
}
