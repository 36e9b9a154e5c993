//! Neighborhood gray tone difference matrix features (5).
//!
//! For each pixel, the absolute difference between its level and the mean
//! level of its in-bounds 8-neighbors is accumulated per level (`s_i`).
//! Formula reference: `docs/features.md`.

use super::discretize::DiscretizedImage;

pub const NGTDM_FEATURE_NAMES: [&str; 5] = [
    "Busyness",
    "Coarseness",
    "Complexity",
    "Contrast",
    "Strength",
];

/// Coarseness cap when the weighted difference sum vanishes.
pub const COARSENESS_CAP: f64 = 1e6;

/// Per-level occurrence counts `n_i` and difference sums `s_i`.
pub fn ngtdm_accumulate(d: &DiscretizedImage) -> (Vec<f64>, Vec<f64>) {
    let (h, w) = d.levels.dim();
    let b = d.bin_count as usize;
    let mut n = vec![0.0f64; b + 1];
    let mut s = vec![0.0f64; b + 1];
    for r in 0..h {
        for c in 0..w {
            let level = d.levels[(r, c)];
            let mut sum = 0.0;
            let mut count = 0.0;
            for dr in -1isize..=1 {
                for dc in -1isize..=1 {
                    if dr == 0 && dc == 0 {
                        continue;
                    }
                    let (nr, nc) = (r as isize + dr, c as isize + dc);
                    if nr < 0 || nr >= h as isize || nc < 0 || nc >= w as isize {
                        continue;
                    }
                    sum += f64::from(d.levels[(nr as usize, nc as usize)]);
                    count += 1.0;
                }
            }
            n[level as usize] += 1.0;
            if count > 0.0 {
                s[level as usize] += (f64::from(level) - sum / count).abs();
            }
        }
    }
    (n, s)
}

pub fn ngtdm_features(d: &DiscretizedImage) -> [f64; 5] {
    let (n, s) = ngtdm_accumulate(d);
    let nvp: f64 = n.iter().sum();
    let present: Vec<usize> = (0..n.len()).filter(|&i| n[i] > 0.0).collect();
    let ngp = present.len() as f64;
    let p = |i: usize| n[i] / nvp;

    let weighted_sum: f64 = present.iter().map(|&i| p(i) * s[i]).sum();
    let s_total: f64 = present.iter().map(|&i| s[i]).sum();

    let coarseness = if weighted_sum > 0.0 {
        (1.0 / weighted_sum).min(COARSENESS_CAP)
    } else {
        COARSENESS_CAP
    };

    let contrast = if ngp > 1.0 {
        let mut pair = 0.0;
        for &i in &present {
            for &j in &present {
                pair += p(i) * p(j) * (i as f64 - j as f64) * (i as f64 - j as f64);
            }
        }
        pair / (ngp * (ngp - 1.0)) * (s_total / nvp)
    } else {
        0.0
    };

    let mut busy_den = 0.0;
    let mut complexity = 0.0;
    let mut strength_num = 0.0;
    for &i in &present {
        for &j in &present {
            let (fi, fj) = (i as f64, j as f64);
            busy_den += (fi * p(i) - fj * p(j)).abs();
            complexity += (fi - fj).abs() * (p(i) * s[i] + p(j) * s[j]) / (p(i) + p(j));
            strength_num += (p(i) + p(j)) * (fi - fj) * (fi - fj);
        }
    }
    let busyness = if busy_den > 0.0 { weighted_sum / busy_den } else { 0.0 };
    complexity /= nvp;
    let strength = if s_total > 0.0 { strength_num / s_total } else { 0.0 };

    [busyness, coarseness, complexity, contrast, strength]
}
