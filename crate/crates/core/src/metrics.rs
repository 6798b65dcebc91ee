//! Descriptive statistics of choice behaviour and the satisficing and
//! randomization screens.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::dataset::{Dataset, MenuCollection, Observation};
use crate::error::{Error, Result};

/// Share of each menu that was chosen.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChoiceProportions {
    pub per_observation: Vec<f64>,
    /// Mean over all observations, deferrals counting as 0.
    pub mean: f64,
    /// Mean over active choices only; `None` without active choices.
    pub mean_active: Option<f64>,
}

pub fn choice_proportions(d: &Dataset) -> ChoiceProportions {
    let per_observation: Vec<f64> =
        d.observations().iter().map(|o| o.choice.len() as f64 / o.menu.len() as f64).collect();
    let active: Vec<f64> =
        d.observations().iter().zip(&per_observation).filter(|(o, _)| !o.is_deferral()).map(|(_, &p)| p).collect();
    ChoiceProportions { mean: mean(&per_observation).unwrap_or(0.0), mean_active: mean(&active), per_observation }
}

fn mean(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

/// Raw number of observations per choice size.
pub fn choice_size_counts<'a>(datasets: impl IntoIterator<Item = &'a Dataset>) -> BTreeMap<usize, u64> {
    let mut counts = BTreeMap::new();
    for d in datasets {
        for o in d.observations() {
            *counts.entry(o.choice.len()).or_insert(0) += 1;
        }
    }
    counts
}

/// Frequency of each choice size relative to how often it was feasible:
/// observations of size `s` divided by `N` times the number of menus with at
/// least `max(s, 1)` items. Size 0 is reported only when some dataset allows
/// deferral.
pub fn adjusted_choice_size_frequencies(datasets: &[Dataset], mc: &MenuCollection) -> Result<BTreeMap<usize, f64>> {
    if datasets.is_empty() {
        return Err(Error::EmptyInput);
    }
    let menus: Vec<u8> = mc.menus().iter().map(|m| m.members().bits()).collect();
    for d in datasets {
        let theirs: Vec<u8> = MenuCollection::of_dataset(d).menus().iter().map(|m| m.members().bits()).collect();
        if theirs != menus {
            return Err(Error::Internal(format!("subject {} was not observed on the shared menu collection", d.subject_id)));
        }
    }
    let counts = choice_size_counts(datasets);
    let n_subjects = datasets.len() as f64;
    let max_size = mc.menus().iter().map(|m| m.len()).max().unwrap_or(0);
    let deferral_allowed = datasets.iter().any(|d| !d.forced);
    let first = if deferral_allowed { 0 } else { 1 };
    Ok((first..=max_size)
        .map(|s| {
            let feasible = mc.menus().iter().filter(|m| m.len() >= s.max(1)).count() as f64;
            let observed = counts.get(&s).copied().unwrap_or(0) as f64;
            (s, observed / (n_subjects * feasible))
        })
        .collect())
}

/// List-order statistics over active choices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct ListOrderStats {
    /// Share of active choices consisting of exactly the first listed item.
    pub first_item_only_frequency: Option<f64>,
    /// Mean over active choices of the average 1-based list position of the
    /// chosen items.
    pub avg_chosen_position: Option<f64>,
}

/// Requires every menu to carry its presentation order.
pub fn list_order_stats(d: &Dataset) -> Result<ListOrderStats> {
    if let Some(i) = d.observations().iter().position(|o| !o.menu.has_explicit_order()) {
        return Err(Error::MissingOrder(i));
    }
    Ok(list_order_stats_unchecked(d))
}

/// As [`list_order_stats`], reading menus without a recorded order in
/// ascending label order.
pub fn list_order_stats_unchecked(d: &Dataset) -> ListOrderStats {
    let active: Vec<&Observation> = d.observations().iter().filter(|o| !o.is_deferral()).collect();
    if active.is_empty() {
        return ListOrderStats::default();
    }
    let first_only = active.iter().filter(|o| o.choice.len() == 1 && o.choice.contains(o.menu.first_listed())).count();
    let positions: Vec<f64> = active
        .iter()
        .map(|o| {
            let total: usize = o.choice.iter().map(|x| o.menu.position(x).expect("choice lies in menu")).sum();
            total as f64 / o.choice.len() as f64
        })
        .collect();
    ListOrderStats {
        first_item_only_frequency: Some(first_only as f64 / active.len() as f64),
        avg_chosen_position: mean(&positions),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SatisficingCutoffs {
    /// Flag when the first-item frequency exceeds this.
    pub first_item: f64,
    /// Flag when the average chosen position falls below this.
    pub position: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SatisficingFlags {
    pub stats: ListOrderStats,
    pub first_item_flag: bool,
    pub position_flag: bool,
}

impl SatisficingFlags {
    pub fn any(&self) -> bool {
        self.first_item_flag || self.position_flag
    }
}

pub fn satisficing_screen(d: &Dataset, cutoffs: SatisficingCutoffs) -> Result<SatisficingFlags> {
    Ok(satisficing_flags(list_order_stats(d)?, cutoffs))
}

pub fn satisficing_flags(stats: ListOrderStats, cutoffs: SatisficingCutoffs) -> SatisficingFlags {
    SatisficingFlags {
        stats,
        first_item_flag: stats.first_item_only_frequency.is_some_and(|f| f > cutoffs.first_item),
        position_flag: stats.avg_chosen_position.is_some_and(|p| p < cutoffs.position),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RandomizationFlag {
    pub choose_everything_count: usize,
    pub flag: bool,
}

/// Flags subjects who chose the whole menu more than `cutoff` times.
pub fn randomization_screen(d: &Dataset, cutoff: usize) -> RandomizationFlag {
    let count = d.choose_everything_count();
    RandomizationFlag { choose_everything_count: count, flag: count > cutoff }
}

/// Screen cutoffs for one treatment.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScreenCutoffs {
    pub satisficing: SatisficingCutoffs,
    pub choose_everything: usize,
}

impl ScreenCutoffs {
    /// Values calibrated on uniform-random subjects over all menus of two to
    /// four out of six alternatives.
    pub fn calibrated(forced: bool) -> ScreenCutoffs {
        if forced {
            ScreenCutoffs { satisficing: SatisficingCutoffs { first_item: 0.28, position: 1.84 }, choose_everything: 14 }
        } else {
            ScreenCutoffs { satisficing: SatisficingCutoffs { first_item: 0.29, position: 1.84 }, choose_everything: 11 }
        }
    }
}

/// Screens only flag subjects the models left unclassified (best score
/// above the threshold), unless `require_unclassified` is off.
pub fn two_stage(flag: bool, best_score: u32, threshold: u32, require_unclassified: bool) -> bool {
    flag && (!require_unclassified || best_score > threshold)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubjectMetrics {
    pub subject: String,
    pub observations: usize,
    pub avg_choice_proportion: f64,
    pub avg_choice_proportion_active: Option<f64>,
    pub deferral_count: usize,
    pub active_count: usize,
    pub choose_everything_count: usize,
    pub first_item_only_frequency: Option<f64>,
    pub avg_chosen_position: Option<f64>,
    /// Whether the list-order statistics come from recorded presentation orders.
    pub order_recorded: bool,
    pub choice_size_counts: BTreeMap<usize, u64>,
    pub adjusted_choice_size_freqs: BTreeMap<usize, f64>,
}

pub fn subject_metrics(d: &Dataset) -> Result<SubjectMetrics> {
    let props = choice_proportions(d);
    let order_recorded = !d.is_empty() && d.observations().iter().all(|o| o.menu.has_explicit_order());
    let stats = list_order_stats_unchecked(d);
    let adjusted = if d.is_empty() {
        BTreeMap::new()
    } else {
        adjusted_choice_size_frequencies(std::slice::from_ref(d), &MenuCollection::of_dataset(d))?
    };
    Ok(SubjectMetrics {
        subject: d.subject_id.clone(),
        observations: d.len(),
        avg_choice_proportion: props.mean,
        avg_choice_proportion_active: props.mean_active,
        deferral_count: d.deferral_count(),
        active_count: d.len() - d.deferral_count(),
        choose_everything_count: d.choose_everything_count(),
        first_item_only_frequency: stats.first_item_only_frequency,
        avg_chosen_position: stats.avg_chosen_position,
        order_recorded,
        choice_size_counts: choice_size_counts([d]),
        adjusted_choice_size_freqs: adjusted,
    })
}
