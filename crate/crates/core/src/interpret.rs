//! Feature-change statistics between two feature distributions.
//!
//! The change vector is the difference of z-normalized feature means;
//! rankings and the cumulative-coverage curve summarize which features (and,
//! for paired sets, which images) account for the change.

use std::collections::HashMap;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::metrics::{fit_normalization_array, NormalizationStats};
use crate::radiomics::{CatalogEntry, FeatureMatrix};

/// Which rows fix the z-normalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalizationRef {
    /// Statistics of set A (the source side).
    A,
    /// Statistics of the stacked rows of both sets.
    Joint,
}

#[derive(Debug, Clone)]
pub struct DeltaReport {
    /// Mean(B) − mean(A) on z-normalized features, in catalog order.
    pub delta: Vec<f64>,
    pub abs_delta: Vec<f64>,
    /// Catalog entries sorted by |Δ| descending, ties in catalog order.
    pub ranked_features: Vec<(CatalogEntry, f64)>,
    /// `(k, fraction of Σ|Δ| covered by the top-k features)`; empty when
    /// the total change is zero.
    pub coverage_curve: Vec<(usize, f64)>,
    /// Smallest k whose coverage reaches 0.5; 0 when nothing changed.
    pub k50: usize,
}

pub fn delta_report(
    a: &FeatureMatrix,
    b: &FeatureMatrix,
    normalize_ref: NormalizationRef,
) -> Result<DeltaReport> {
    a.same_catalog(b)?;
    ensure_rows(a)?;
    ensure_rows(b)?;
    let stats = match normalize_ref {
        NormalizationRef::A => fit_normalization_array(&a.data)?,
        NormalizationRef::Joint => {
            let stacked = ndarray::concatenate(
                ndarray::Axis(0),
                &[a.data.view(), b.data.view()],
            )
            .expect("same column count");
            fit_normalization_array(&stacked)?
        }
    };
    let mean_z = |data: &Array2<f64>| -> Result<Vec<f64>> {
        let z = stats.apply_matrix(data)?;
        Ok(z.columns().into_iter().map(|c| c.sum() / z.nrows() as f64).collect())
    };
    let ma = mean_z(&a.data)?;
    let mb = mean_z(&b.data)?;
    let delta: Vec<f64> = mb.iter().zip(&ma).map(|(y, x)| y - x).collect();
    let abs_delta: Vec<f64> = delta.iter().map(|d| d.abs()).collect();

    let mut order: Vec<usize> = (0..delta.len()).collect();
    // Stable sort: ties keep catalog order.
    order.sort_by(|&i, &j| abs_delta[j].partial_cmp(&abs_delta[i]).expect("finite deltas"));
    let ranked_features: Vec<(CatalogEntry, f64)> = order
        .iter()
        .map(|&i| (a.catalog.entries[i].clone(), abs_delta[i]))
        .collect();

    let total: f64 = abs_delta.iter().sum();
    let (coverage_curve, k50) = if total > 0.0 {
        let mut curve = Vec::with_capacity(order.len());
        let mut acc = 0.0;
        let mut k50 = 0usize;
        for (k, &i) in order.iter().enumerate() {
            acc += abs_delta[i];
            let frac = acc / total;
            curve.push((k + 1, frac));
            if k50 == 0 && frac >= 0.5 {
                k50 = k + 1;
            }
        }
        // Guard against rounding leaving the tail below 1.0.
        if let Some(last) = curve.last_mut() {
            last.1 = 1.0;
        }
        (curve, k50)
    } else {
        (Vec::new(), 0)
    };

    Ok(DeltaReport {
        delta,
        abs_delta,
        ranked_features,
        coverage_curve,
        k50,
    })
}

/// Per-image feature-change magnitudes for paired sets.
#[derive(Debug, Clone)]
pub struct ImageChangeRanking {
    /// `(id, ‖Δh‖₂)` sorted by norm descending, ties by id ascending.
    pub pairs: Vec<(String, f64)>,
}

/// Ranks paired images by the L2 norm of their z-normalized feature change;
/// both matrices must carry exactly the same ids.
pub fn rank_image_changes(a: &FeatureMatrix, b: &FeatureMatrix) -> Result<ImageChangeRanking> {
    a.same_catalog(b)?;
    if a.n_images() != b.n_images() {
        return Err(Error::PairingError(format!(
            "id sets differ in size: {} vs {}",
            a.n_images(),
            b.n_images()
        )));
    }
    let b_rows: HashMap<&str, usize> = b
        .ids
        .iter()
        .enumerate()
        .map(|(i, id)| (id.as_str(), i))
        .collect();
    let stats = fit_normalization_array(&a.data)?;

    let mut pairs = Vec::with_capacity(a.n_images());
    for (i, id) in a.ids.iter().enumerate() {
        let Some(&j) = b_rows.get(id.as_str()) else {
            return Err(Error::PairingError(format!("id '{id}' missing from second set")));
        };
        pairs.push((id.clone(), change_norm(&stats, a, i, b, j)));
    }
    pairs.sort_by(|x, y| {
        y.1.partial_cmp(&x.1)
            .expect("finite norms")
            .then_with(|| x.0.cmp(&y.0))
    });
    Ok(ImageChangeRanking { pairs })
}

fn change_norm(
    stats: &NormalizationStats,
    a: &FeatureMatrix,
    i: usize,
    b: &FeatureMatrix,
    j: usize,
) -> f64 {
    let ra = a.data.row(i);
    let rb = b.data.row(j);
    let mut sq = 0.0;
    for k in 0..ra.len() {
        let d = (rb[k] - ra[k]) / stats.std[k];
        sq += d * d;
    }
    sq.sqrt()
}

fn ensure_rows(m: &FeatureMatrix) -> Result<()> {
    if m.n_images() < 2 {
        return Err(Error::SampleSizeError(format!(
            "need ≥ 2 rows, got {}",
            m.n_images()
        )));
    }
    Ok(())
}
