//! The ordered feature catalog: (filter variant × family × feature name).

use serde::{Deserialize, Serialize};

use super::first_order::FIRST_ORDER_FEATURE_NAMES;
use super::gldm::GLDM_FEATURE_NAMES;
use super::glcm::GLCM_FEATURE_NAMES;
use super::glrlm::GLRLM_FEATURE_NAMES;
use super::glszm::GLSZM_FEATURE_NAMES;
use super::ngtdm::NGTDM_FEATURE_NAMES;
use crate::error::{Error, Result};
use crate::wavelet::FilterVariant;

/// The six feature families, in fixed catalog order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FeatureFamily {
    FirstOrder,
    Glcm,
    Glrlm,
    Glszm,
    Gldm,
    Ngtdm,
}

impl FeatureFamily {
    pub const ALL: [FeatureFamily; 6] = [
        FeatureFamily::FirstOrder,
        FeatureFamily::Glcm,
        FeatureFamily::Glrlm,
        FeatureFamily::Glszm,
        FeatureFamily::Gldm,
        FeatureFamily::Ngtdm,
    ];

    pub fn label(self) -> &'static str {
        match self {
            FeatureFamily::FirstOrder => "firstorder",
            FeatureFamily::Glcm => "glcm",
            FeatureFamily::Glrlm => "glrlm",
            FeatureFamily::Glszm => "glszm",
            FeatureFamily::Gldm => "gldm",
            FeatureFamily::Ngtdm => "ngtdm",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        match label {
            "firstorder" | "first" => Some(FeatureFamily::FirstOrder),
            "glcm" => Some(FeatureFamily::Glcm),
            "glrlm" => Some(FeatureFamily::Glrlm),
            "glszm" => Some(FeatureFamily::Glszm),
            "gldm" => Some(FeatureFamily::Gldm),
            "ngtdm" => Some(FeatureFamily::Ngtdm),
            _ => None,
        }
    }

    /// Feature names in this family's fixed order.
    pub fn feature_names(self) -> &'static [&'static str] {
        match self {
            FeatureFamily::FirstOrder => &FIRST_ORDER_FEATURE_NAMES,
            FeatureFamily::Glcm => &GLCM_FEATURE_NAMES,
            FeatureFamily::Glrlm => &GLRLM_FEATURE_NAMES,
            FeatureFamily::Glszm => &GLSZM_FEATURE_NAMES,
            FeatureFamily::Gldm => &GLDM_FEATURE_NAMES,
            FeatureFamily::Ngtdm => &NGTDM_FEATURE_NAMES,
        }
    }
}

/// One catalog column.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub variant: FilterVariant,
    pub family: FeatureFamily,
    pub name: String,
}

impl CatalogEntry {
    /// Machine name used as the CSV column header,
    /// e.g. `wavelet-HH_glcm_Contrast`.
    pub fn column_name(&self) -> String {
        format!("{}_{}_{}", self.variant.label(), self.family.label(), self.name)
    }

    /// Human-readable name, e.g. `wavelet-HH glcm Contrast`.
    pub fn human_name(&self) -> String {
        format!("{} {} {}", self.variant.label(), self.family.label(), self.name)
    }

    pub fn from_column_name(column: &str) -> Option<Self> {
        let mut parts = column.splitn(3, '_');
        let variant = FilterVariant::from_label(parts.next()?)?;
        let family = FeatureFamily::from_label(parts.next()?)?;
        let name = parts.next()?;
        if !family.feature_names().contains(&name) {
            return None;
        }
        Some(Self {
            variant,
            family,
            name: name.to_string(),
        })
    }
}

/// Ordered list of catalog entries. The full bank is variant-major
/// (Original, LL, LH, HL, HH), family order FirstOrder, GLCM, GLRLM, GLSZM,
/// GLDM, NGTDM: 5 × 93 = 465 entries. Subsetting preserves relative order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureCatalog {
    pub entries: Vec<CatalogEntry>,
}

impl FeatureCatalog {
    pub fn full() -> Self {
        Self::with_bank(&FilterVariant::ALL)
    }

    /// Catalog restricted to the Original variant (93 entries); this is the
    /// legacy single-variant feature set.
    pub fn original_only() -> Self {
        Self::with_bank(&[FilterVariant::Original])
    }

    fn with_bank(variants: &[FilterVariant]) -> Self {
        let mut entries = Vec::new();
        for &variant in variants {
            for family in FeatureFamily::ALL {
                for name in family.feature_names() {
                    entries.push(CatalogEntry {
                        variant,
                        family,
                        name: (*name).to_string(),
                    });
                }
            }
        }
        Self { entries }
    }

    /// Keeps entries whose variant and family are both selected, preserving
    /// order.
    pub fn subset(&self, variants: &[FilterVariant], families: &[FeatureFamily]) -> Self {
        Self {
            entries: self
                .entries
                .iter()
                .filter(|e| variants.contains(&e.variant) && families.contains(&e.family))
                .cloned()
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn column_names(&self) -> Vec<String> {
        self.entries.iter().map(CatalogEntry::column_name).collect()
    }

    pub fn from_column_names<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let entries = names
            .iter()
            .map(|n| {
                CatalogEntry::from_column_name(n.as_ref()).ok_or_else(|| {
                    Error::CatalogError(format!("unrecognized feature column '{}'", n.as_ref()))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { entries })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.entries).expect("catalog serializes")
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let entries: Vec<CatalogEntry> =
            serde_json::from_str(json).map_err(|e| Error::CatalogError(e.to_string()))?;
        Ok(Self { entries })
    }
}
