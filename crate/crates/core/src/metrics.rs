//! Distribution distances between feature matrices.
//!
//! The main metric is the log Fréchet distance between Gaussian fits of
//! z-normalized features (normalization fitted on the reference set and
//! applied to both sides). The legacy variant min-max normalizes each
//! dataset by its own per-feature range and rescales to `[0, 7.456]` with no
//! log; the kernel alternative is an unbiased RBF-kernel MMD estimate.

use nalgebra::DMatrix;
use ndarray::{Array2, ArrayView1};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::radiomics::FeatureMatrix;
use crate::stats::percentile_sorted;

/// Relative eigenvalue clamp for the covariance square root: eigenvalues of
/// the symmetric product below `tol · λ_max` are treated as zero.
pub const EIGENVALUE_CLAMP_TOL: f64 = 1e-10;

/// Fixed rescale upper bound of the legacy metric.
pub const V0_RESCALE_MAX: f64 = 7.456;

/// Default floor inside the logarithm of the main metric.
pub const DEFAULT_EPSILON: f64 = 1e-12;

/// Per-feature reference statistics for z-score normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationStats {
    pub mean: Vec<f64>,
    /// Population standard deviation; 1.0 substituted where the feature is
    /// constant in the reference set.
    pub std: Vec<f64>,
    pub constant: Vec<bool>,
}

impl NormalizationStats {
    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn apply_matrix(&self, data: &Array2<f64>) -> Result<Array2<f64>> {
        if data.ncols() != self.dim() {
            return Err(Error::DimError {
                expected: self.dim(),
                got: data.ncols(),
            });
        }
        let mut out = data.clone();
        for (j, mut col) in out.columns_mut().into_iter().enumerate() {
            col.mapv_inplace(|v| (v - self.mean[j]) / self.std[j]);
        }
        Ok(out)
    }

    pub fn apply_row(&self, row: ArrayView1<'_, f64>) -> Result<Vec<f64>> {
        if row.len() != self.dim() {
            return Err(Error::DimError {
                expected: self.dim(),
                got: row.len(),
            });
        }
        Ok(row
            .iter()
            .enumerate()
            .map(|(j, v)| (v - self.mean[j]) / self.std[j])
            .collect())
    }
}

/// Per-column mean and population standard deviation of the reference set;
/// zero-deviation columns are flagged and their divisor replaced by 1.
pub fn fit_normalization(reference: &FeatureMatrix) -> Result<NormalizationStats> {
    fit_normalization_array(&reference.data)
}

pub fn fit_normalization_array(data: &Array2<f64>) -> Result<NormalizationStats> {
    let n = data.nrows();
    if n < 2 {
        return Err(Error::SampleSizeError(format!(
            "normalization requires ≥ 2 rows, got {n}"
        )));
    }
    let mut mean = Vec::with_capacity(data.ncols());
    let mut std = Vec::with_capacity(data.ncols());
    let mut constant = Vec::with_capacity(data.ncols());
    for col in data.columns() {
        let m = col.sum() / n as f64;
        let var = col.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / n as f64;
        let s = var.sqrt();
        let is_const = s == 0.0;
        mean.push(m);
        std.push(if is_const { 1.0 } else { s });
        constant.push(is_const);
    }
    Ok(NormalizationStats {
        mean,
        std,
        constant,
    })
}

/// Fitted Gaussian of a feature distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianSummary {
    pub mean: Vec<f64>,
    /// Unbiased covariance (N−1 denominator), symmetrized.
    pub covariance: DMatrix<f64>,
    pub sample_count: usize,
}

impl GaussianSummary {
    pub fn fit(data: &Array2<f64>) -> Result<Self> {
        let (n, m) = data.dim();
        if n < 2 {
            return Err(Error::SampleSizeError(format!(
                "Gaussian fit requires ≥ 2 rows, got {n}"
            )));
        }
        let mean: Vec<f64> = data.columns().into_iter().map(|c| c.sum() / n as f64).collect();
        let centered = DMatrix::from_fn(n, m, |r, c| data[(r, c)] - mean[c]);
        let mut cov = centered.transpose() * &centered;
        cov /= (n - 1) as f64;
        // The product is symmetric up to rounding; make it exact.
        let cov = symmetrize(&cov);
        Ok(Self {
            mean,
            covariance: cov,
            sample_count: n,
        })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }
}

fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// 2-Wasserstein distance between Gaussians:
/// `( ||μ1−μ2||² + tr[Σ1 + Σ2 − 2(Σ1Σ2)^{1/2}] )^{1/2}`.
///
/// The cross term is computed through the symmetric product
/// `S = Σ1^{1/2} Σ2 Σ1^{1/2}`: eigenvalues of `S` below
/// `EIGENVALUE_CLAMP_TOL · λ_max` are clamped to zero and
/// `tr[(Σ1Σ2)^{1/2}] = Σ √λ_i`. The bracketed trace is clamped at zero
/// before the outer square root. Bitwise-identical summaries short-circuit
/// to exactly zero.
pub fn frechet_distance(a: &GaussianSummary, b: &GaussianSummary) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimError {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    let finite = |g: &GaussianSummary| {
        g.mean.iter().all(|v| v.is_finite()) && g.covariance.iter().all(|v| v.is_finite())
    };
    if !finite(a) || !finite(b) {
        return Err(Error::NumericError(
            "non-finite Gaussian summary input".into(),
        ));
    }
    if a.mean == b.mean && a.covariance == b.covariance {
        return Ok(0.0);
    }

    let mean_sq: f64 = a
        .mean
        .iter()
        .zip(&b.mean)
        .map(|(x, y)| (x - y) * (x - y))
        .sum();

    let sqrt_a = psd_sqrt(&a.covariance);
    let inner = symmetrize(&(&sqrt_a * &b.covariance * &sqrt_a));
    let mut eigs: Vec<f64> = inner.symmetric_eigenvalues().iter().copied().collect();
    let lambda_max = eigs.iter().copied().fold(0.0f64, f64::max);
    let threshold = lambda_max * EIGENVALUE_CLAMP_TOL;
    for l in &mut eigs {
        if *l < threshold {
            *l = 0.0;
        }
    }
    let trace_sqrt: f64 = eigs.iter().map(|l| l.sqrt()).sum();
    let bracket = (a.covariance.trace() + b.covariance.trace() - 2.0 * trace_sqrt).max(0.0);
    Ok((mean_sq + bracket).sqrt())
}

/// Symmetric PSD square root via eigendecomposition (negative rounding noise
/// clamped to zero).
fn psd_sqrt(m: &DMatrix<f64>) -> DMatrix<f64> {
    let eig = symmetrize(m).symmetric_eigen();
    let sqrt_vals = eig.eigenvalues.map(|l| l.max(0.0).sqrt());
    let scaled = {
        let mut v = eig.eigenvectors.clone();
        for (j, mut col) in v.column_iter_mut().enumerate() {
            col *= sqrt_vals[j];
        }
        v
    };
    &scaled * eig.eigenvectors.transpose()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Metric {
    #[serde(rename = "frd")]
    Frd,
    #[serde(rename = "frd-v0")]
    FrdV0,
    #[serde(rename = "frechet")]
    Frechet,
    #[serde(rename = "mmd")]
    Mmd,
}

/// Outcome of a distance computation between two feature matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceResult {
    pub value: f64,
    pub metric: Metric,
    pub m_used: usize,
    pub n_ref: usize,
    pub n_test: usize,
    /// Whether the log floor fired (log-based metrics only).
    pub epsilon_clamped: bool,
}

/// Log Fréchet distance on z-normalized features; normalization is fitted
/// on `reference` and applied to both matrices. Returns
/// `ln(max(d_F, epsilon))` with a flag when the floor fires.
pub fn frd(reference: &FeatureMatrix, test: &FeatureMatrix, epsilon: f64) -> Result<DistanceResult> {
    reference.same_catalog(test)?;
    ensure_rows(test)?;
    let stats = fit_normalization(reference)?;
    let a = stats.apply_matrix(&reference.data)?;
    let b = stats.apply_matrix(&test.data)?;
    let d = frechet_distance(&GaussianSummary::fit(&a)?, &GaussianSummary::fit(&b)?)?;
    let clamped = d < epsilon;
    Ok(DistanceResult {
        value: d.max(epsilon).ln(),
        metric: Metric::Frd,
        m_used: reference.n_features(),
        n_ref: reference.n_images(),
        n_test: test.n_images(),
        epsilon_clamped: clamped,
    })
}

/// Legacy variant: min-max normalizes each feature per dataset (each set
/// with its own min/max), rescales to `[0, 7.456]` and returns the raw
/// Fréchet distance (no log). Intended for the single-variant legacy
/// feature subset; callers are expected to warn outside it.
pub fn frd_v0(reference: &FeatureMatrix, test: &FeatureMatrix) -> Result<DistanceResult> {
    reference.same_catalog(test)?;
    ensure_rows(reference)?;
    ensure_rows(test)?;
    let a = minmax_rescale(&reference.data);
    let b = minmax_rescale(&test.data);
    let d = frechet_distance(&GaussianSummary::fit(&a)?, &GaussianSummary::fit(&b)?)?;
    Ok(DistanceResult {
        value: d,
        metric: Metric::FrdV0,
        m_used: reference.n_features(),
        n_ref: reference.n_images(),
        n_test: test.n_images(),
        epsilon_clamped: false,
    })
}

/// Raw Fréchet distance between Gaussian fits of the features as-is
/// (no normalization, no log).
pub fn raw_frechet(reference: &FeatureMatrix, test: &FeatureMatrix) -> Result<DistanceResult> {
    reference.same_catalog(test)?;
    ensure_rows(reference)?;
    ensure_rows(test)?;
    let d = frechet_distance(
        &GaussianSummary::fit(&reference.data)?,
        &GaussianSummary::fit(&test.data)?,
    )?;
    Ok(DistanceResult {
        value: d,
        metric: Metric::Frechet,
        m_used: reference.n_features(),
        n_ref: reference.n_images(),
        n_test: test.n_images(),
        epsilon_clamped: false,
    })
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

fn minmax_rescale(data: &Array2<f64>) -> Array2<f64> {
    let mut out = data.clone();
    for mut col in out.columns_mut() {
        let min = col.iter().copied().fold(f64::INFINITY, f64::min);
        let max = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if max > min {
            let scale = V0_RESCALE_MAX / (max - min);
            col.mapv_inplace(|v| (v - min) * scale);
        } else {
            col.fill(0.0);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bandwidth {
    /// Median pairwise Euclidean distance over the pooled samples.
    Median,
    Fixed(f64),
}

/// Kernel two-sample distance: z-normalizes both matrices with the
/// reference stats (consistent with [`frd`]), then returns
/// `max(MMD², 0)^{1/2}` from the unbiased Gaussian-RBF estimator.
pub fn mmd(
    reference: &FeatureMatrix,
    test: &FeatureMatrix,
    bandwidth: Bandwidth,
) -> Result<DistanceResult> {
    reference.same_catalog(test)?;
    ensure_rows(test)?;
    let stats = fit_normalization(reference)?;
    let a = stats.apply_matrix(&reference.data)?;
    let b = stats.apply_matrix(&test.data)?;
    let value = mmd_normalized(&a, &b, bandwidth);
    Ok(DistanceResult {
        value,
        metric: Metric::Mmd,
        m_used: reference.n_features(),
        n_ref: reference.n_images(),
        n_test: test.n_images(),
        epsilon_clamped: false,
    })
}

/// Unbiased MMD estimator on pre-normalized rows; symmetric in its two
/// arguments for a fixed bandwidth.
pub fn mmd_normalized(a: &Array2<f64>, b: &Array2<f64>, bandwidth: Bandwidth) -> f64 {
    let sigma = match bandwidth {
        Bandwidth::Fixed(s) => s,
        Bandwidth::Median => median_pairwise_distance(a, b),
    };
    let gamma = 1.0 / (2.0 * sigma * sigma);
    let kernel = |x: ArrayView1<f64>, y: ArrayView1<f64>| {
        let sq: f64 = x.iter().zip(y.iter()).map(|(p, q)| (p - q) * (p - q)).sum();
        (-gamma * sq).exp()
    };

    let n = a.nrows() as f64;
    let m = b.nrows() as f64;
    let mut kxx = 0.0;
    for i in 0..a.nrows() {
        for j in 0..a.nrows() {
            if i != j {
                kxx += kernel(a.row(i), a.row(j));
            }
        }
    }
    let mut kyy = 0.0;
    for i in 0..b.nrows() {
        for j in 0..b.nrows() {
            if i != j {
                kyy += kernel(b.row(i), b.row(j));
            }
        }
    }
    let mut kxy = 0.0;
    for i in 0..a.nrows() {
        for j in 0..b.nrows() {
            kxy += kernel(a.row(i), b.row(j));
        }
    }
    let mmd2 = kxx / (n * (n - 1.0)) + kyy / (m * (m - 1.0)) - 2.0 * kxy / (n * m);
    mmd2.max(0.0).sqrt()
}

/// Median heuristic: median of all pairwise distances in the pooled set
/// (1.0 when every point coincides).
fn median_pairwise_distance(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
    let rows: Vec<ArrayView1<f64>> = a.rows().into_iter().chain(b.rows()).collect();
    let mut dists = Vec::with_capacity(rows.len() * (rows.len() - 1) / 2);
    for i in 0..rows.len() {
        for j in (i + 1)..rows.len() {
            let sq: f64 = rows[i]
                .iter()
                .zip(rows[j].iter())
                .map(|(p, q)| (p - q) * (p - q))
                .sum();
            dists.push(sq.sqrt());
        }
    }
    dists.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let median = percentile_sorted(&dists, 50.0);
    if median > 0.0 {
        median
    } else {
        1.0
    }
}
