//! Gray level size zone matrix features (16).
//!
//! Zones are 8-connected components of equal gray level; the matrix is
//! direction-free. Shares the level/size statistics of the run-length
//! family, reordered to this family's feature names. Formula reference:
//! `docs/features.md`.

use super::discretize::DiscretizedImage;
use super::glrlm::size_distribution_features;

pub const GLSZM_FEATURE_NAMES: [&str; 16] = [
    "GrayLevelNonUniformity",
    "GrayLevelNonUniformityNormalized",
    "GrayLevelVariance",
    "HighGrayLevelZoneEmphasis",
    "LargeAreaEmphasis",
    "LargeAreaHighGrayLevelEmphasis",
    "LargeAreaLowGrayLevelEmphasis",
    "LowGrayLevelZoneEmphasis",
    "SizeZoneNonUniformity",
    "SizeZoneNonUniformityNormalized",
    "SmallAreaEmphasis",
    "SmallAreaHighGrayLevelEmphasis",
    "SmallAreaLowGrayLevelEmphasis",
    "ZoneEntropy",
    "ZonePercentage",
    "ZoneVariance",
];

/// Zone counts `S[level][size]` via iterative 8-connected flood fill.
pub fn size_zone_matrix(d: &DiscretizedImage) -> Vec<Vec<f64>> {
    let (h, w) = d.levels.dim();
    let np = h * w;
    let b = d.bin_count as usize;
    let mut m = vec![vec![0.0f64; np + 1]; b + 1];
    let mut visited = vec![false; np];
    let mut stack = Vec::new();

    for start in 0..np {
        if visited[start] {
            continue;
        }
        let level = d.levels[(start / w, start % w)];
        let mut size = 0usize;
        visited[start] = true;
        stack.push(start);
        while let Some(pos) = stack.pop() {
            size += 1;
            let (r, c) = (pos / w, pos % w);
            for dr in -1isize..=1 {
                for dc in -1isize..=1 {
                    if dr == 0 && dc == 0 {
                        continue;
                    }
                    let (nr, nc) = (r as isize + dr, c as isize + dc);
                    if nr < 0 || nr >= h as isize || nc < 0 || nc >= w as isize {
                        continue;
                    }
                    let npos = nr as usize * w + nc as usize;
                    if !visited[npos] && d.levels[(nr as usize, nc as usize)] == level {
                        visited[npos] = true;
                        stack.push(npos);
                    }
                }
            }
        }
        m[level as usize][size] += 1.0;
    }
    m
}

pub fn glszm_features(d: &DiscretizedImage) -> [f64; 16] {
    let m = size_zone_matrix(d);
    let f = size_distribution_features(&m, d.pixel_count() as f64);
    // Reorder from the run-length feature layout to this family's names.
    [
        f[0],  // GrayLevelNonUniformity
        f[1],  // GrayLevelNonUniformityNormalized
        f[2],  // GrayLevelVariance
        f[3],  // HighGrayLevelZoneEmphasis
        f[4],  // LargeAreaEmphasis
        f[5],  // LargeAreaHighGrayLevelEmphasis
        f[6],  // LargeAreaLowGrayLevelEmphasis
        f[7],  // LowGrayLevelZoneEmphasis
        f[9],  // SizeZoneNonUniformity
        f[10], // SizeZoneNonUniformityNormalized
        f[13], // SmallAreaEmphasis
        f[14], // SmallAreaHighGrayLevelEmphasis
        f[15], // SmallAreaLowGrayLevelEmphasis
        f[8],  // ZoneEntropy
        f[11], // ZonePercentage
        f[12], // ZoneVariance
    ]
}
