//! Radiomic feature extraction and distribution distances for grayscale image sets.
//!
//! The pipeline: load images ([`imageio`]), expand each into five filter
//! variants ([`wavelet`]), extract a fixed catalog of texture and intensity
//! features ([`radiomics`]), then compare two sets through Gaussian summaries
//! ([`metrics`]). On top of the distances sit per-image out-of-domain scoring
//! ([`ood`]), feature-change reports ([`interpret`]) and severity-controlled
//! image degradations ([`corruptions`]).
//!
//! All operations are deterministic: results depend only on inputs,
//! configuration and seeds, never on thread count or directory enumeration
//! order.

pub mod corruptions;
pub mod error;
pub mod imageio;
pub mod interpret;
pub mod metrics;
pub mod ood;
pub mod radiomics;
pub mod stats;
pub mod synthetic;
pub mod wavelet;

pub use error::{Error, Result};
pub use imageio::{Image, ImageSet};
pub use radiomics::{FeatureCatalog, FeatureFamily, FeatureMatrix};
pub use wavelet::{FilterVariant, WaveletKernel};
