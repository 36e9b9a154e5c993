//! Gray level run length matrix features (16).
//!
//! Runs are maximal same-level segments along each of the four directions;
//! the 16 features are computed per direction and averaged. Formula
//! reference: `docs/features.md`.

use super::discretize::DiscretizedImage;

pub const GLRLM_FEATURE_NAMES: [&str; 16] = [
    "GrayLevelNonUniformity",
    "GrayLevelNonUniformityNormalized",
    "GrayLevelVariance",
    "HighGrayLevelRunEmphasis",
    "LongRunEmphasis",
    "LongRunHighGrayLevelEmphasis",
    "LongRunLowGrayLevelEmphasis",
    "LowGrayLevelRunEmphasis",
    "RunEntropy",
    "RunLengthNonUniformity",
    "RunLengthNonUniformityNormalized",
    "RunPercentage",
    "RunVariance",
    "ShortRunEmphasis",
    "ShortRunHighGrayLevelEmphasis",
    "ShortRunLowGrayLevelEmphasis",
];

pub const GLRLM_DIRECTIONS: [(isize, isize); 4] = [(0, 1), (1, 1), (1, 0), (1, -1)];

/// Run-length counts `R[level][length]` for one direction (index 0 unused on
/// both axes).
pub fn run_length_matrix(d: &DiscretizedImage, dir: (isize, isize)) -> Vec<Vec<f64>> {
    let (h, w) = d.levels.dim();
    let max_len = h.max(w);
    let b = d.bin_count as usize;
    let mut m = vec![vec![0.0f64; max_len + 1]; b + 1];

    for line in direction_lines((h, w), dir) {
        let mut run_level = d.levels[line[0]];
        let mut run_len = 1usize;
        for &pos in &line[1..] {
            let l = d.levels[pos];
            if l == run_level {
                run_len += 1;
            } else {
                m[run_level as usize][run_len] += 1.0;
                run_level = l;
                run_len = 1;
            }
        }
        m[run_level as usize][run_len] += 1.0;
    }
    m
}

/// Pixel coordinates grouped into scan lines along `dir`, covering each
/// pixel exactly once.
pub fn direction_lines((h, w): (usize, usize), dir: (isize, isize)) -> Vec<Vec<(usize, usize)>> {
    let starts: Vec<(usize, usize)> = match dir {
        (0, 1) => (0..h).map(|r| (r, 0)).collect(),
        (1, 0) => (0..w).map(|c| (0, c)).collect(),
        (1, 1) => (0..w)
            .map(|c| (0, c))
            .chain((1..h).map(|r| (r, 0)))
            .collect(),
        (1, -1) => (0..w)
            .map(|c| (0, c))
            .chain((1..h).map(|r| (r, w - 1)))
            .collect(),
        other => panic!("unsupported direction {other:?}"),
    };
    starts
        .into_iter()
        .map(|(mut r, mut c)| {
            let mut line = Vec::new();
            loop {
                line.push((r, c));
                let nr = r as isize + dir.0;
                let nc = c as isize + dir.1;
                if nr < 0 || nr >= h as isize || nc < 0 || nc >= w as isize {
                    break;
                }
                r = nr as usize;
                c = nc as usize;
            }
            line
        })
        .collect()
}

pub fn glrlm_features(d: &DiscretizedImage) -> [f64; 16] {
    let np = d.pixel_count() as f64;
    let mut acc = [0.0f64; 16];
    for dir in GLRLM_DIRECTIONS {
        let m = run_length_matrix(d, dir);
        let f = size_distribution_features(&m, np);
        for (a, v) in acc.iter_mut().zip(f) {
            *a += v;
        }
    }
    for a in &mut acc {
        *a /= GLRLM_DIRECTIONS.len() as f64;
    }
    acc
}

/// The 16 level/size statistics shared by the run-length and size-zone
/// families, computed from a `[level][size]` count matrix.
pub(super) fn size_distribution_features(m: &[Vec<f64>], np: f64) -> [f64; 16] {
    let total: f64 = m.iter().map(|row| row.iter().sum::<f64>()).sum();
    if total == 0.0 {
        return [0.0; 16];
    }

    let mut by_level = vec![0.0f64; m.len()];
    let mut by_size = vec![0.0f64; m[0].len()];
    let mut mu_level = 0.0;
    let mut mu_size = 0.0;
    let mut entropy = 0.0;
    let mut sre = 0.0;
    let mut lre = 0.0;
    let mut lgl = 0.0;
    let mut hgl = 0.0;
    let mut srlgl = 0.0;
    let mut srhgl = 0.0;
    let mut lrlgl = 0.0;
    let mut lrhgl = 0.0;
    for (i, row) in m.iter().enumerate() {
        for (s, &v) in row.iter().enumerate() {
            if v <= 0.0 {
                continue;
            }
            let (fi, fs) = (i as f64, s as f64);
            let p = v / total;
            by_level[i] += v;
            by_size[s] += v;
            mu_level += p * fi;
            mu_size += p * fs;
            entropy -= p * p.log2();
            sre += v / (fs * fs);
            lre += v * fs * fs;
            lgl += v / (fi * fi);
            hgl += v * fi * fi;
            srlgl += v / (fi * fi * fs * fs);
            srhgl += v * fi * fi / (fs * fs);
            lrlgl += v * fs * fs / (fi * fi);
            lrhgl += v * fi * fi * fs * fs;
        }
    }
    let mut var_level = 0.0;
    let mut var_size = 0.0;
    for (i, row) in m.iter().enumerate() {
        for (s, &v) in row.iter().enumerate() {
            if v > 0.0 {
                let p = v / total;
                var_level += p * (i as f64 - mu_level) * (i as f64 - mu_level);
                var_size += p * (s as f64 - mu_size) * (s as f64 - mu_size);
            }
        }
    }
    let gln: f64 = by_level.iter().map(|v| v * v).sum::<f64>() / total;
    let szn: f64 = by_size.iter().map(|v| v * v).sum::<f64>() / total;

    [
        gln,
        gln / total,
        var_level,
        hgl / total,
        lre / total,
        lrhgl / total,
        lrlgl / total,
        lgl / total,
        entropy,
        szn,
        szn / total,
        total / np,
        var_size,
        sre / total,
        srhgl / total,
        srlgl / total,
    ]
}
