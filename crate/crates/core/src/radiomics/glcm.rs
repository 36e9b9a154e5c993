//! Gray level co-occurrence matrix features (24).
//!
//! Co-occurrence at distance 1 along the four 2D directions
//! (0°, 45°, 90°, 135°), symmetrized, normalized per direction; features are
//! the arithmetic mean over directions. `i`/`j` in the formulas are the
//! discretized bin numbers; `Ng` is the number of levels present in the
//! image. Formula reference: `docs/features.md`.

use nalgebra::DMatrix;

use super::discretize::DiscretizedImage;

pub const GLCM_FEATURE_NAMES: [&str; 24] = [
    "Autocorrelation",
    "ClusterProminence",
    "ClusterShade",
    "ClusterTendency",
    "Contrast",
    "Correlation",
    "DifferenceAverage",
    "DifferenceEntropy",
    "DifferenceVariance",
    "Id",
    "Idm",
    "Idmn",
    "Idn",
    "Imc1",
    "Imc2",
    "InverseVariance",
    "JointAverage",
    "JointEnergy",
    "JointEntropy",
    "MaximalCorrelationCoefficient",
    "MaximumProbability",
    "SumAverage",
    "SumEntropy",
    "SumSquares",
];

pub const GLCM_DIRECTIONS: [(isize, isize); 4] = [(0, 1), (1, 1), (1, 0), (1, -1)];

pub fn glcm_features(d: &DiscretizedImage) -> [f64; 24] {
    let mut acc = [0.0f64; 24];
    let mut used = 0usize;
    for dir in GLCM_DIRECTIONS {
        if let Some(p) = cooccurrence(d, dir) {
            let f = direction_features(&p, d.ng);
            for (a, v) in acc.iter_mut().zip(f) {
                *a += v;
            }
            used += 1;
        }
    }
    if used > 0 {
        for a in &mut acc {
            *a /= used as f64;
        }
    }
    acc
}

/// Symmetric normalized co-occurrence matrix for one direction, indexed by
/// bin number (row/col 0 unused). `None` when the direction has no pixel
/// pairs (degenerate 1×N grids).
fn cooccurrence(d: &DiscretizedImage, (dr, dc): (isize, isize)) -> Option<Vec<Vec<f64>>> {
    let (h, w) = d.levels.dim();
    let b = d.bin_count as usize;
    let mut counts = vec![vec![0.0f64; b + 1]; b + 1];
    let mut total = 0.0;
    for r in 0..h {
        for c in 0..w {
            let (nr, nc) = (r as isize + dr, c as isize + dc);
            if nr < 0 || nr >= h as isize || nc < 0 || nc >= w as isize {
                continue;
            }
            let a = d.levels[(r, c)] as usize;
            let bl = d.levels[(nr as usize, nc as usize)] as usize;
            // Symmetric: count the pair in both orientations.
            counts[a][bl] += 1.0;
            counts[bl][a] += 1.0;
            total += 2.0;
        }
    }
    if total == 0.0 {
        return None;
    }
    for row in &mut counts {
        for v in row {
            *v /= total;
        }
    }
    Some(counts)
}

fn direction_features(p: &[Vec<f64>], ng: u32) -> [f64; 24] {
    let b = p.len() - 1;
    let ng = f64::from(ng);

    let mut px = vec![0.0f64; b + 1];
    for i in 1..=b {
        for j in 1..=b {
            px[i] += p[i][j];
        }
    }
    // Marginals coincide for a symmetric matrix.
    let py = &px;

    let mut mu_x = 0.0;
    for (i, v) in px.iter().enumerate() {
        mu_x += i as f64 * v;
    }
    let mut var_x = 0.0;
    for (i, v) in px.iter().enumerate() {
        var_x += (i as f64 - mu_x) * (i as f64 - mu_x) * v;
    }

    let mut p_sum = vec![0.0f64; 2 * b + 1];
    let mut p_diff = vec![0.0f64; b];
    let mut autocorr = 0.0;
    let mut shade = 0.0;
    let mut prominence = 0.0;
    let mut tendency = 0.0;
    let mut contrast = 0.0;
    let mut joint_energy = 0.0;
    let mut joint_entropy = 0.0;
    let mut hxy1 = 0.0;
    let mut max_prob = 0.0f64;
    let mut sum_squares = 0.0;
    for i in 1..=b {
        for j in 1..=b {
            let v = p[i][j];
            if v <= 0.0 {
                continue;
            }
            let (fi, fj) = (i as f64, j as f64);
            p_sum[i + j] += v;
            p_diff[i.abs_diff(j)] += v;
            autocorr += fi * fj * v;
            let centered = fi + fj - 2.0 * mu_x;
            shade += centered.powi(3) * v;
            prominence += centered.powi(4) * v;
            tendency += centered * centered * v;
            contrast += (fi - fj) * (fi - fj) * v;
            joint_energy += v * v;
            joint_entropy -= v * v.log2();
            hxy1 -= v * (px[i] * py[j]).log2();
            max_prob = max_prob.max(v);
            sum_squares += (fi - mu_x) * (fi - mu_x) * v;
        }
    }

    let correlation = if var_x > 0.0 {
        (autocorr - mu_x * mu_x) / var_x
    } else {
        1.0
    };

    let mut diff_avg = 0.0;
    let mut diff_entropy = 0.0;
    let mut id = 0.0;
    let mut idm = 0.0;
    let mut idmn = 0.0;
    let mut idn = 0.0;
    let mut inverse_variance = 0.0;
    for (k, v) in p_diff.iter().enumerate() {
        if *v <= 0.0 {
            continue;
        }
        let fk = k as f64;
        diff_avg += fk * v;
        diff_entropy -= v * v.log2();
        id += v / (1.0 + fk);
        idm += v / (1.0 + fk * fk);
        idmn += v / (1.0 + fk * fk / (ng * ng));
        idn += v / (1.0 + fk / ng);
        if k >= 1 {
            inverse_variance += v / (fk * fk);
        }
    }
    let mut diff_var = 0.0;
    for (k, v) in p_diff.iter().enumerate() {
        if *v > 0.0 {
            diff_var += (k as f64 - diff_avg) * (k as f64 - diff_avg) * v;
        }
    }

    let mut sum_avg = 0.0;
    let mut sum_entropy = 0.0;
    for (k, v) in p_sum.iter().enumerate() {
        if *v > 0.0 {
            sum_avg += k as f64 * v;
            sum_entropy -= v * v.log2();
        }
    }

    let mut hx = 0.0;
    let mut hxy2 = 0.0;
    for &vi in px.iter() {
        if vi > 0.0 {
            hx -= vi * vi.log2();
        }
        for &vj in py.iter() {
            let q = vi * vj;
            if q > 0.0 {
                hxy2 -= q * q.log2();
            }
        }
    }
    let imc1 = if hx > 0.0 { (joint_entropy - hxy1) / hx } else { 0.0 };
    let imc2 = (1.0 - (-2.0 * (hxy2 - joint_entropy)).exp()).max(0.0).sqrt();

    let mcc = maximal_correlation_coefficient(p, &px);

    [
        autocorr,
        prominence,
        shade,
        tendency,
        contrast,
        correlation,
        diff_avg,
        diff_entropy,
        diff_var,
        id,
        idm,
        idmn,
        idn,
        imc1,
        imc2,
        inverse_variance,
        mu_x,
        joint_energy,
        joint_entropy,
        mcc,
        max_prob,
        sum_avg,
        sum_entropy,
        sum_squares,
    ]
}

/// √(second-largest eigenvalue) of `Q(i,j) = Σ_k P(i,k)P(j,k)/(px(i)py(k))`.
///
/// Q is similar to the symmetric PSD matrix `B·Bᵀ` with
/// `B(a,b) = P(a,b)/√(px(a)py(b))`, whose leading eigenvalue is 1. Levels
/// with empty marginals are dropped; fewer than two occupied levels yield 1.
fn maximal_correlation_coefficient(p: &[Vec<f64>], px: &[f64]) -> f64 {
    let idx: Vec<usize> = (0..px.len()).filter(|&i| px[i] > 0.0).collect();
    let n = idx.len();
    if n < 2 {
        return 1.0;
    }
    let b = DMatrix::from_fn(n, n, |a, c| p[idx[a]][idx[c]] / (px[idx[a]] * px[idx[c]]).sqrt());
    let m = &b * b.transpose();
    let mut eig: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    eig.sort_by(|a, b| b.partial_cmp(a).unwrap());
    eig[1].max(0.0).sqrt()
}
