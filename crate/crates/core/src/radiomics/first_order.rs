//! First-order intensity statistics (18 features).
//!
//! All statistics are computed on the raw grid values; Entropy and
//! Uniformity use the fixed-bin-count discretized histogram. Formula
//! reference: `docs/features.md`.

use ndarray::Array2;

use super::discretize::discretize;
use crate::stats::percentile_sorted;

pub const FIRST_ORDER_FEATURE_NAMES: [&str; 18] = [
    "Energy",
    "TotalEnergy",
    "Entropy",
    "Minimum",
    "Percentile10",
    "Percentile90",
    "Maximum",
    "Mean",
    "Median",
    "InterquartileRange",
    "Range",
    "MeanAbsoluteDeviation",
    "RobustMeanAbsoluteDeviation",
    "RootMeanSquared",
    "Skewness",
    "Kurtosis",
    "Variance",
    "Uniformity",
];

// Population variance below this is treated as zero when standardized
// moments would otherwise divide rounding noise by rounding noise.
const VARIANCE_FLOOR: f64 = 1e-28;

pub fn first_order_features(grid: &Array2<f64>, bin_count: u32) -> [f64; 18] {
    let n = grid.len() as f64;
    let mut sorted: Vec<f64> = grid.iter().copied().collect();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));

    let energy: f64 = grid.iter().map(|x| x * x).sum();
    let minimum = sorted[0];
    let maximum = sorted[sorted.len() - 1];
    let p10 = percentile_sorted(&sorted, 10.0);
    let p25 = percentile_sorted(&sorted, 25.0);
    let p75 = percentile_sorted(&sorted, 75.0);
    let p90 = percentile_sorted(&sorted, 90.0);
    let median = percentile_sorted(&sorted, 50.0);
    // A constant grid gets the exact value; summation rounding would
    // otherwise leak into the zero-variance fallbacks.
    let mean = if minimum == maximum {
        minimum
    } else {
        grid.iter().sum::<f64>() / n
    };

    let variance = grid.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    let mad = grid.iter().map(|x| (x - mean).abs()).sum::<f64>() / n;

    // Robust MAD: deviation from the mean of the values inside [P10, P90].
    let robust: Vec<f64> = sorted
        .iter()
        .copied()
        .filter(|x| *x >= p10 && *x <= p90)
        .collect();
    let rmad = if robust.is_empty() {
        0.0
    } else {
        let rmean = robust.iter().sum::<f64>() / robust.len() as f64;
        robust.iter().map(|x| (x - rmean).abs()).sum::<f64>() / robust.len() as f64
    };

    let (skewness, kurtosis) = if variance > VARIANCE_FLOOR {
        let m3 = grid.iter().map(|x| (x - mean).powi(3)).sum::<f64>() / n;
        let m4 = grid.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n;
        (m3 / variance.powf(1.5), m4 / (variance * variance))
    } else {
        (0.0, 0.0)
    };

    let hist = discretize(grid, bin_count).histogram();
    let mut entropy = 0.0;
    let mut uniformity = 0.0;
    for &count in &hist {
        if count > 0 {
            let p = count as f64 / n;
            entropy -= p * p.log2();
            uniformity += p * p;
        }
    }

    [
        energy,
        energy, // TotalEnergy equals Energy at unit pixel spacing.
        entropy,
        minimum,
        p10,
        p90,
        maximum,
        mean,
        median,
        p75 - p25,
        maximum - minimum,
        mad,
        rmad,
        (energy / n).sqrt(),
        skewness,
        kurtosis,
        variance,
        uniformity,
    ]
}
