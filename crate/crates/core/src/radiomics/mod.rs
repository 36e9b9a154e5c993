//! Radiomic feature extraction: six families across five filter variants.
//!
//! The full catalog holds 465 features (5 variants × 93): 18 first-order,
//! 24 GLCM, 16 GLRLM, 16 GLSZM, 14 GLDM and 5 NGTDM per variant. All
//! formulas are documented in `docs/features.md`. Extraction is a pure
//! function of (pixels, catalog, bin count, kernel): the parallel map over
//! images merges rows in id order, so results are independent of worker
//! count.

pub mod catalog;
pub mod discretize;
pub mod first_order;
pub mod gldm;
pub mod glcm;
pub mod glrlm;
pub mod glszm;
pub mod matrix;
pub mod ngtdm;

use ndarray::Array2;
use rayon::prelude::*;

pub use catalog::{CatalogEntry, FeatureCatalog, FeatureFamily};
pub use discretize::{discretize, DiscretizedImage};
pub use first_order::{first_order_features, FIRST_ORDER_FEATURE_NAMES};
pub use gldm::{gldm_features, GLDM_FEATURE_NAMES};
pub use glcm::{glcm_features, GLCM_FEATURE_NAMES};
pub use glrlm::{glrlm_features, GLRLM_FEATURE_NAMES};
pub use glszm::{glszm_features, GLSZM_FEATURE_NAMES};
pub use matrix::FeatureMatrix;
pub use ngtdm::{ngtdm_features, NGTDM_FEATURE_NAMES};

use crate::error::{Error, Result};
use crate::imageio::{Image, ImageSet};
use crate::wavelet::{filter_bank_grid, FilterVariant, WaveletKernel};

/// Default fixed bin count for gray-level discretization.
pub const DEFAULT_BIN_COUNT: u32 = 32;

/// Extracts one catalog-ordered feature row per image, rows in id order.
pub fn extract_features(
    set: &ImageSet,
    catalog: &FeatureCatalog,
    bin_count: u32,
    kernel: &WaveletKernel,
) -> Result<FeatureMatrix> {
    if set.is_empty() {
        return Err(Error::EmptyInput("image set is empty".into()));
    }
    if catalog.is_empty() {
        return Err(Error::CatalogError("catalog is empty".into()));
    }
    if bin_count < 2 {
        return Err(Error::ParamError(format!(
            "bin_count must be ≥ 2, got {bin_count}"
        )));
    }
    let plan = ExtractionPlan::build(catalog);

    let rows: Vec<Vec<f64>> = set
        .images
        .par_iter()
        .map(|img| extract_row(img, &plan, catalog.len(), bin_count, kernel))
        .collect::<Result<_>>()?;

    let mut data = Array2::zeros((rows.len(), catalog.len()));
    for (i, row) in rows.into_iter().enumerate() {
        data.row_mut(i)
            .iter_mut()
            .zip(row)
            .for_each(|(d, v)| *d = v);
    }
    FeatureMatrix::new(set.ids(), data, catalog.clone())
}

/// Columns to fill per (variant, family): pairs of
/// (column index in the catalog, feature index within the family).
struct ExtractionPlan {
    blocks: Vec<(FilterVariant, FeatureFamily, Vec<(usize, usize)>)>,
    needs_wavelet: bool,
}

impl ExtractionPlan {
    fn build(catalog: &FeatureCatalog) -> Self {
        let mut blocks: Vec<(FilterVariant, FeatureFamily, Vec<(usize, usize)>)> = Vec::new();
        for (col, entry) in catalog.entries.iter().enumerate() {
            let feature_idx = entry
                .family
                .feature_names()
                .iter()
                .position(|n| *n == entry.name)
                .expect("catalog entries carry known feature names");
            match blocks
                .iter_mut()
                .find(|(v, f, _)| *v == entry.variant && *f == entry.family)
            {
                Some((_, _, cols)) => cols.push((col, feature_idx)),
                None => blocks.push((entry.variant, entry.family, vec![(col, feature_idx)])),
            }
        }
        let needs_wavelet = blocks.iter().any(|(v, _, _)| *v != FilterVariant::Original);
        Self {
            blocks,
            needs_wavelet,
        }
    }
}

fn extract_row(
    img: &Image,
    plan: &ExtractionPlan,
    n_columns: usize,
    bin_count: u32,
    kernel: &WaveletKernel,
) -> Result<Vec<f64>> {
    let bank = if plan.needs_wavelet {
        filter_bank_grid(&img.pixels, kernel)
    } else {
        Vec::new()
    };
    let grid_for = |variant: FilterVariant| -> &Array2<f64> {
        if variant == FilterVariant::Original {
            &img.pixels
        } else {
            &bank
                .iter()
                .find(|b| b.variant == variant)
                .expect("filter bank holds all variants")
                .pixels
        }
    };

    let mut row = vec![0.0f64; n_columns];
    let mut current: Option<(FilterVariant, DiscretizedImage)> = None;
    for (variant, family, cols) in &plan.blocks {
        let grid = grid_for(*variant);
        let values: Vec<f64> = match family {
            FeatureFamily::FirstOrder => first_order_features(grid, bin_count).to_vec(),
            texture => {
                // Discretize each variant grid once, reused across families.
                if current.as_ref().map(|(v, _)| *v) != Some(*variant) {
                    current = Some((*variant, discretize(grid, bin_count)));
                }
                let d = &current.as_ref().unwrap().1;
                match texture {
                    FeatureFamily::Glcm => glcm_features(d).to_vec(),
                    FeatureFamily::Glrlm => glrlm_features(d).to_vec(),
                    FeatureFamily::Glszm => glszm_features(d).to_vec(),
                    FeatureFamily::Gldm => gldm_features(d).to_vec(),
                    FeatureFamily::Ngtdm => ngtdm_features(d).to_vec(),
                    FeatureFamily::FirstOrder => unreachable!(),
                }
            }
        };
        for &(col, idx) in cols {
            let v = values[idx];
            if !v.is_finite() {
                return Err(Error::InternalError {
                    image: img.id.clone(),
                    variant: variant.label().to_string(),
                    feature: family.feature_names()[idx].to_string(),
                });
            }
            row[col] = v;
        }
    }
    Ok(row)
}
