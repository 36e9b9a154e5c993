//! Gray level dependence matrix features (14).
//!
//! The dependence of a pixel is `1 +` the number of its in-bounds
//! 8-neighbors with the same level (dependence threshold α = 0). Formula
//! reference: `docs/features.md`.

use super::discretize::DiscretizedImage;

pub const GLDM_FEATURE_NAMES: [&str; 14] = [
    "DependenceEntropy",
    "DependenceNonUniformity",
    "DependenceNonUniformityNormalized",
    "DependenceVariance",
    "GrayLevelNonUniformity",
    "GrayLevelVariance",
    "HighGrayLevelEmphasis",
    "LargeDependenceEmphasis",
    "LargeDependenceHighGrayLevelEmphasis",
    "LargeDependenceLowGrayLevelEmphasis",
    "LowGrayLevelEmphasis",
    "SmallDependenceEmphasis",
    "SmallDependenceHighGrayLevelEmphasis",
    "SmallDependenceLowGrayLevelEmphasis",
];

/// Dependence counts `D[level][dependence]`, dependence in `1..=9`.
pub fn dependence_matrix(d: &DiscretizedImage) -> Vec<Vec<f64>> {
    let (h, w) = d.levels.dim();
    let b = d.bin_count as usize;
    let mut m = vec![vec![0.0f64; 10]; b + 1];
    for r in 0..h {
        for c in 0..w {
            let level = d.levels[(r, c)];
            let mut dep = 1usize;
            for dr in -1isize..=1 {
                for dc in -1isize..=1 {
                    if dr == 0 && dc == 0 {
                        continue;
                    }
                    let (nr, nc) = (r as isize + dr, c as isize + dc);
                    if nr < 0 || nr >= h as isize || nc < 0 || nc >= w as isize {
                        continue;
                    }
                    if d.levels[(nr as usize, nc as usize)] == level {
                        dep += 1;
                    }
                }
            }
            m[level as usize][dep] += 1.0;
        }
    }
    m
}

pub fn gldm_features(d: &DiscretizedImage) -> [f64; 14] {
    let m = dependence_matrix(d);
    let total: f64 = m.iter().map(|r| r.iter().sum::<f64>()).sum();

    let mut by_level = vec![0.0f64; m.len()];
    let mut by_dep = vec![0.0f64; 10];
    let mut mu_level = 0.0;
    let mut mu_dep = 0.0;
    let mut entropy = 0.0;
    let mut sde = 0.0;
    let mut lde = 0.0;
    let mut lgl = 0.0;
    let mut hgl = 0.0;
    let mut sdlgl = 0.0;
    let mut sdhgl = 0.0;
    let mut ldlgl = 0.0;
    let mut ldhgl = 0.0;
    for (i, row) in m.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v <= 0.0 {
                continue;
            }
            let (fi, fj) = (i as f64, j as f64);
            let p = v / total;
            by_level[i] += v;
            by_dep[j] += v;
            mu_level += p * fi;
            mu_dep += p * fj;
            entropy -= p * p.log2();
            sde += v / (fj * fj);
            lde += v * fj * fj;
            lgl += v / (fi * fi);
            hgl += v * fi * fi;
            sdlgl += v / (fi * fi * fj * fj);
            sdhgl += v * fi * fi / (fj * fj);
            ldlgl += v * fj * fj / (fi * fi);
            ldhgl += v * fi * fi * fj * fj;
        }
    }
    let mut var_level = 0.0;
    let mut var_dep = 0.0;
    for (i, row) in m.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v > 0.0 {
                let p = v / total;
                var_level += p * (i as f64 - mu_level) * (i as f64 - mu_level);
                var_dep += p * (j as f64 - mu_dep) * (j as f64 - mu_dep);
            }
        }
    }
    let gln: f64 = by_level.iter().map(|v| v * v).sum::<f64>() / total;
    let dn: f64 = by_dep.iter().map(|v| v * v).sum::<f64>() / total;

    [
        entropy,
        dn,
        dn / total,
        var_dep,
        gln,
        var_level,
        hgl / total,
        lde / total,
        ldhgl / total,
        ldlgl / total,
        lgl / total,
        sde / total,
        sdhgl / total,
        sdlgl / total,
    ]
}
