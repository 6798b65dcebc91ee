//! Uniform-random subjects and percentile cutoffs.
//!
//! Each simulated subject picks, at every menu, one outcome uniformly at
//! random among all admissible chosen sets: the nonempty subsets of the menu
//! under forced choice, all subsets (the empty one meaning deferral)
//! otherwise. Subject `i` draws from its own ChaCha8 stream, so the output
//! does not depend on how subjects are spread over threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dataset::{Dataset, MenuCollection, Observation};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::metrics::list_order_stats_unchecked;
use crate::models::{ModelKind, Scorer};
use crate::relation::AltSet;

/// Identifies the random source in output metadata.
pub const GENERATOR_ID: &str = "rand_chacha-0.9/ChaCha8Rng; seed_from_u64(seed), set_stream(subject index)";

#[derive(Clone, Debug)]
pub struct SimConfig {
    pub mc: MenuCollection,
    pub n_subjects: usize,
    pub forced: bool,
    pub seed: u64,
}

impl SimConfig {
    pub fn new(mc: MenuCollection, n_subjects: usize, forced: bool, seed: u64) -> Result<Self> {
        if n_subjects == 0 {
            return Err(Error::EmptyInput);
        }
        Ok(SimConfig { mc, n_subjects, forced, seed })
    }
}

/// The random stream of subject `index`.
pub fn subject_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Uniform draw over the admissible outcomes at `menu`.
pub fn draw_outcome(rng: &mut impl Rng, menu: AltSet, forced: bool) -> AltSet {
    let k = menu.len() as u32;
    let code: u32 = rng.random_range(u32::from(forced)..(1u32 << k));
    // spread the k code bits over the menu's members
    let mut bits = 0u8;
    for (j, x) in menu.iter().enumerate() {
        if code >> j & 1 == 1 {
            bits |= 1 << x.index();
        }
    }
    AltSet::from_bits(bits)
}

pub fn simulate_subject(cfg: &SimConfig, index: usize) -> Dataset {
    let mut rng = subject_rng(cfg.seed, index);
    let observations = cfg
        .mc
        .menus()
        .iter()
        .map(|m| Observation { menu: m.clone(), choice: draw_outcome(&mut rng, m.members(), cfg.forced) })
        .collect();
    Dataset::new(format!("sim{}", index + 1), cfg.mc.n(), cfg.forced, observations)
        .expect("simulated observations are valid")
}

pub fn simulate_uniform(cfg: &SimConfig, exec: Execution) -> Vec<Dataset> {
    exec.map_range(cfg.n_subjects, |i| simulate_subject(cfg, i))
}

/// Nearest-rank percentile together with the minimum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Cutoff<T> {
    pub percentile: f64,
    pub value: T,
    pub minimum: T,
}

/// Nearest-rank percentile: the smallest value with at least `p` percent of
/// the distribution at or below it.
pub fn cutoff<T: PartialOrd + Copy>(distribution: &[T], p: f64) -> Result<Cutoff<T>> {
    if distribution.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !(p > 0.0 && p < 100.0) {
        return Err(Error::Percentile(p));
    }
    let mut sorted = distribution.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("distribution has no NaN"));
    let rank = ((p / 100.0) * sorted.len() as f64).ceil().max(1.0) as usize;
    Ok(Cutoff { percentile: p, value: sorted[rank - 1], minimum: sorted[0] })
}

/// Distance-score distribution of one model over a simulated cohort.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScoreCalibration {
    pub kind: ModelKind,
    pub lower: Cutoff<u32>,
    #[serde(skip)]
    pub scores: Vec<u32>,
}

/// Screen-statistic distributions of a simulated cohort.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScreenCalibration {
    /// Upper-tail cutoff on the number of choose-everything menus.
    pub choose_everything: Cutoff<usize>,
    /// Upper-tail cutoff on the first-item-only frequency.
    pub first_item: Cutoff<f64>,
    /// Lower-tail cutoff on the average chosen position.
    pub position: Cutoff<f64>,
}

pub fn calibrate_scores(
    datasets: &[Dataset],
    kinds: &[ModelKind],
    p: f64,
    exec: Execution,
) -> Result<Vec<ScoreCalibration>> {
    let scorer = Scorer::new(exec);
    kinds
        .iter()
        .map(|&kind| {
            let scores = scorer.min_scores(datasets, kind)?;
            Ok(ScoreCalibration { kind, lower: cutoff(&scores, p)?, scores })
        })
        .collect()
}

/// `p` is the lower-tail percentage; upper-tail cutoffs use `100 - p`.
pub fn calibrate_screens(datasets: &[Dataset], p: f64) -> Result<ScreenCalibration> {
    let everything: Vec<usize> = datasets.iter().map(Dataset::choose_everything_count).collect();
    let stats: Vec<_> = datasets.iter().map(list_order_stats_unchecked).collect();
    let first: Vec<f64> = stats.iter().filter_map(|s| s.first_item_only_frequency).collect();
    let position: Vec<f64> = stats.iter().filter_map(|s| s.avg_chosen_position).collect();
    Ok(ScreenCalibration {
        choose_everything: cutoff(&everything, 100.0 - p)?,
        first_item: cutoff(&first, 100.0 - p)?,
        position: cutoff(&position, p)?,
    })
}
