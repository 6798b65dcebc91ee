//! Per-subject classification rows and cohort summaries.

use serde::Serialize;

use crate::models::{best_of, ModelKind, ScoreResult};

/// Best-fitting model of one subject.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubjectRow {
    pub subject: String,
    pub model: ModelKind,
    pub score: u32,
    pub n_optimal_relations: usize,
    pub tie_with_rc: bool,
    /// Score under each requested model, in request order.
    pub scores: Vec<(ModelKind, u32)>,
}

pub fn subject_row(subject: &str, results: &[ScoreResult]) -> Option<SubjectRow> {
    let best = best_of(results)?;
    Some(SubjectRow {
        subject: subject.to_string(),
        model: best.kind,
        score: best.result.score,
        n_optimal_relations: best.result.optimal_relations.len(),
        tie_with_rc: best.tie_with_rc(),
        scores: results.iter().map(|r| (r.kind, r.score)).collect(),
    })
}

/// Cohort summary of one model.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CohortRow {
    pub model: ModelKind,
    pub subjects: usize,
    pub score_zero: usize,
    pub within_threshold: usize,
    pub within_threshold_pct: f64,
    pub mean_score: f64,
    pub median_score: f64,
    pub mean_optimal_relations: f64,
    pub median_optimal_relations: f64,
    /// Subjects for whom this model is the best fit.
    pub best_fit: usize,
}

fn mean(v: &[f64]) -> f64 {
    if v.is_empty() {
        0.0
    } else {
        v.iter().sum::<f64>() / v.len() as f64
    }
}

/// Midpoint median; 0 for an empty list.
pub fn median(v: &[f64]) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    let mut s = v.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).expect("no NaN"));
    let m = s.len() / 2;
    if s.len() % 2 == 1 {
        s[m]
    } else {
        (s[m - 1] + s[m]) / 2.0
    }
}

/// `results[i][j]` is subject `i` under `kinds[j]`.
pub fn cohort_table(results: &[Vec<ScoreResult>], kinds: &[ModelKind], threshold: u32) -> Vec<CohortRow> {
    let winners: Vec<ModelKind> = results.iter().filter_map(|r| best_of(r)).map(|b| b.kind).collect();
    kinds
        .iter()
        .enumerate()
        .map(|(j, &kind)| {
            let scores: Vec<f64> = results.iter().map(|r| f64::from(r[j].score)).collect();
            let optimal: Vec<f64> = results.iter().map(|r| r[j].optimal_relations.len() as f64).collect();
            let within = results.iter().filter(|r| r[j].score <= threshold).count();
            CohortRow {
                model: kind,
                subjects: results.len(),
                score_zero: results.iter().filter(|r| r[j].score == 0).count(),
                within_threshold: within,
                within_threshold_pct: if results.is_empty() { 0.0 } else { 100.0 * within as f64 / results.len() as f64 },
                mean_score: mean(&scores),
                median_score: median(&scores),
                mean_optimal_relations: mean(&optimal),
                median_optimal_relations: median(&optimal),
                best_fit: winners.iter().filter(|&&k| k == kind).count(),
            }
        })
        .collect()
}
