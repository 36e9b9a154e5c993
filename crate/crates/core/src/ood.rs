//! Out-of-domain scoring, thresholding and dataset-level OOD statistics.
//!
//! A test feature vector scores as its L2 distance, on z-normalized
//! features, from the reference-set mean. Reference points score
//! leave-one-out against the mean of the remaining rows. The binary
//! threshold is the 95th percentile (configurable) of the reference score
//! distribution; the dataset-level score rescales the rank statistic between
//! test and reference scores to `[-1, 1]`.

use ndarray::ArrayView1;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{fit_normalization, NormalizationStats};
use crate::radiomics::FeatureMatrix;
use crate::stats::percentile_sorted;

/// Per-image OOD scores aligned with their ids.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OODScoreSet {
    pub ids: Vec<String>,
    pub scores: Vec<f64>,
    pub reference_name: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub n_id_ref: usize,
    pub n_test: usize,
}

/// Output of [`detect`]: per-image labels plus dataset-level statistics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OODReport {
    pub threshold: f64,
    /// `true` = OOD; `labels[i] = scores[i] ≥ threshold`.
    pub labels: Vec<bool>,
    pub auc: Option<f64>,
    pub nfrd_group: Option<f64>,
    pub counts: Counts,
    pub ids: Vec<String>,
    pub scores: Vec<f64>,
}

/// L2 distance between the z-normalized feature vector and the
/// z-normalized reference mean.
pub fn ood_score(
    x: ArrayView1<'_, f64>,
    reference: &FeatureMatrix,
    stats: &NormalizationStats,
) -> Result<f64> {
    if x.len() != reference.n_features() {
        return Err(Error::DimError {
            expected: reference.n_features(),
            got: x.len(),
        });
    }
    let n = reference.n_images() as f64;
    let zx = stats.apply_row(x)?;
    let mut sq = 0.0;
    for (j, col) in reference.data.columns().into_iter().enumerate() {
        let mean_j = col.sum() / n;
        let zm = (mean_j - stats.mean[j]) / stats.std[j];
        sq += (zx[j] - zm) * (zx[j] - zm);
    }
    Ok(sq.sqrt())
}

/// Leave-one-out scores for every reference row: row `x` scores against the
/// mean of the remaining rows, computed incrementally as `(N·μ − x)/(N−1)`.
/// Normalization stats are those of the full reference set.
pub fn loo_reference_scores(
    reference: &FeatureMatrix,
    stats: &NormalizationStats,
) -> Result<OODScoreSet> {
    let n = reference.n_images();
    if n < 3 {
        return Err(Error::SampleSizeError(format!(
            "leave-one-out scoring requires ≥ 3 rows, got {n}"
        )));
    }
    let mean: Vec<f64> = reference
        .data
        .columns()
        .into_iter()
        .map(|c| c.sum() / n as f64)
        .collect();
    let scores: Vec<f64> = (0..n)
        .map(|i| {
            let row = reference.data.row(i);
            let mut sq = 0.0;
            for j in 0..row.len() {
                let loo_mean = (n as f64 * mean[j] - row[j]) / (n as f64 - 1.0);
                let d = (row[j] - loo_mean) / stats.std[j];
                sq += d * d;
            }
            sq.sqrt()
        })
        .collect();
    Ok(OODScoreSet {
        ids: reference.ids.clone(),
        scores,
        reference_name: "loo".into(),
    })
}

/// Linear-interpolation percentile of the score distribution.
pub fn select_threshold(s_id: &OODScoreSet, percentile: f64) -> Result<f64> {
    if s_id.scores.is_empty() {
        return Err(Error::EmptyInput("empty score set".into()));
    }
    if !(0.0..=100.0).contains(&percentile) {
        return Err(Error::ParamError(format!(
            "percentile must be in [0, 100], got {percentile}"
        )));
    }
    let mut sorted = s_id.scores.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite scores"));
    Ok(percentile_sorted(&sorted, percentile))
}

/// Mann–Whitney AUC: fraction of (positive, negative) pairs where the
/// positive scores higher, ties counting one half.
pub fn auc(pos_scores: &[f64], neg_scores: &[f64]) -> Result<f64> {
    if pos_scores.is_empty() || neg_scores.is_empty() {
        return Err(Error::EmptyInput("auc requires non-empty score lists".into()));
    }
    // Rank-based with average ranks over ties: equivalent to exhaustive pair
    // counting at O(n log n).
    let mut all: Vec<(f64, bool)> = pos_scores
        .iter()
        .map(|&s| (s, true))
        .chain(neg_scores.iter().map(|&s| (s, false)))
        .collect();
    all.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite scores"));

    let mut rank_sum_pos = 0.0;
    let mut i = 0;
    while i < all.len() {
        let mut j = i;
        while j < all.len() && all[j].0 == all[i].0 {
            j += 1;
        }
        // Ranks are 1-based; tied values share the average rank.
        let avg_rank = (i + 1 + j) as f64 / 2.0;
        for item in &all[i..j] {
            if item.1 {
                rank_sum_pos += avg_rank;
            }
        }
        i = j;
    }
    let n_pos = pos_scores.len() as f64;
    let n_neg = neg_scores.len() as f64;
    let u = rank_sum_pos - n_pos * (n_pos + 1.0) / 2.0;
    Ok(u / (n_pos * n_neg))
}

/// Binary OOD detection of `test` against `reference`: leave-one-out
/// reference scores fix the threshold at the given percentile; test rows at
/// or above it are labeled OOD. Also reports the score AUC and the
/// dataset-level group score.
pub fn detect(test: &FeatureMatrix, reference: &FeatureMatrix, percentile: f64) -> Result<OODReport> {
    test.same_catalog(reference)?;
    let stats = fit_normalization(reference)?;
    let s_id = loo_reference_scores(reference, &stats)?;
    let threshold = select_threshold(&s_id, percentile)?;

    let scores: Vec<f64> = (0..test.n_images())
        .into_par_iter()
        .map(|i| ood_score(test.data.row(i), reference, &stats))
        .collect::<Result<_>>()?;
    let labels: Vec<bool> = scores.iter().map(|s| *s >= threshold).collect();
    let auc_value = auc(&scores, &s_id.scores)?;

    Ok(OODReport {
        threshold,
        labels,
        auc: Some(auc_value),
        nfrd_group: Some(2.0 * (auc_value - 0.5)),
        counts: Counts {
            n_id_ref: reference.n_images(),
            n_test: test.n_images(),
        },
        ids: test.ids.clone(),
        scores,
    })
}

/// Dataset-level OOD score `2·(AUC[S_test, S_ID] − 0.5)` in `[-1, 1]`.
///
/// Negative values (test scores sitting below the reference's own
/// leave-one-out scores) are reported as-is, not clamped.
pub fn nfrd_group(test: &FeatureMatrix, reference: &FeatureMatrix) -> Result<f64> {
    let report = detect(test, reference, 95.0)?;
    Ok(report.nfrd_group.expect("detect always fills nfrd_group"))
}

/// Two-reference classification of a single feature vector.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReferenceClassification {
    /// `true` when `score_a ≥ score_b`, i.e. the sample sits no closer to
    /// reference A than to reference B (ties label `true`).
    pub label: bool,
    pub score_a: f64,
    pub score_b: f64,
}

/// Labels `x` by whichever reference it scores closer to; each reference
/// uses its own normalization stats.
pub fn classify_by_reference(
    x: ArrayView1<'_, f64>,
    ref_a: &FeatureMatrix,
    ref_b: &FeatureMatrix,
) -> Result<ReferenceClassification> {
    ref_a.same_catalog(ref_b)?;
    let stats_a = fit_normalization(ref_a)?;
    let stats_b = fit_normalization(ref_b)?;
    let score_a = ood_score(x, ref_a, &stats_a)?;
    let score_b = ood_score(x, ref_b, &stats_b)?;
    Ok(ReferenceClassification {
        label: score_a >= score_b,
        score_a,
        score_b,
    })
}
