//! Brute-force oracles, written independently of the library code paths
//! they check: matrices are re-derived by direct enumeration and features
//! by direct textbook loops. The only shared third-party primitive is
//! basic arithmetic; even the eigenvalues needed by the co-occurrence MCC
//! feature come from a hand-rolled Jacobi sweep here.

#![allow(dead_code)]

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use frd_core::radiomics::{FeatureCatalog, FeatureMatrix};

// ---------------------------------------------------------------------
// helpers

pub fn random_grid(seed: u64, h: usize, w: usize) -> Array2<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Array2::from_shape_fn((h, w), |_| rng.random::<f64>())
}

/// Wraps raw rows in a feature matrix with a catalog prefix of matching
/// width (for metric-level tests that don't care about feature semantics).
pub fn matrix_from_rows(rows: &Array2<f64>) -> FeatureMatrix {
    let full = FeatureCatalog::full();
    let catalog = FeatureCatalog {
        entries: full.entries.into_iter().take(rows.ncols()).collect(),
    };
    let ids = (0..rows.nrows()).map(|i| format!("img{i:05}")).collect();
    FeatureMatrix::new(ids, rows.clone(), catalog).unwrap()
}

// ---------------------------------------------------------------------
// bilinear resize oracle

pub fn oracle_bilinear(grid: &Array2<f64>, out_h: usize, out_w: usize) -> Array2<f64> {
    let (h, w) = grid.dim();
    let mut out = Array2::zeros((out_h, out_w));
    for r in 0..out_h {
        for c in 0..out_w {
            let y = if out_h > 1 {
                r as f64 * (h - 1) as f64 / (out_h - 1) as f64
            } else {
                0.0
            };
            let x = if out_w > 1 {
                c as f64 * (w - 1) as f64 / (out_w - 1) as f64
            } else {
                0.0
            };
            let (y0, x0) = (y.floor() as usize, x.floor() as usize);
            let (y1, x1) = ((y0 + 1).min(h - 1), (x0 + 1).min(w - 1));
            let (fy, fx) = (y - y0 as f64, x - x0 as f64);
            out[(r, c)] = grid[(y0, x0)] * (1.0 - fy) * (1.0 - fx)
                + grid[(y0, x1)] * (1.0 - fy) * fx
                + grid[(y1, x0)] * fy * (1.0 - fx)
                + grid[(y1, x1)] * fy * fx;
        }
    }
    out
}

// ---------------------------------------------------------------------
// wavelet oracle: dense 2D convolution over an explicitly mirrored grid

fn mirror_idx(mut i: isize, n: usize) -> usize {
    let n = n as isize;
    loop {
        if i < 0 {
            i = -i - 1;
        } else if i >= n {
            i = 2 * n - 1 - i;
        } else {
            return i as usize;
        }
    }
}

/// Dense separable convolution: for each output pixel, sum the full 2D
/// tensor-product kernel over the mirrored input.
pub fn oracle_conv2_separable(
    grid: &Array2<f64>,
    row_taps: &[f64],
    col_taps: &[f64],
) -> Array2<f64> {
    let (h, w) = grid.dim();
    let ro = row_taps.len() as isize / 2 - 1;
    let co = col_taps.len() as isize / 2 - 1;
    let mut out = Array2::zeros((h, w));
    for r in 0..h {
        for c in 0..w {
            let mut acc = 0.0;
            for (ty, kc) in col_taps.iter().enumerate() {
                for (tx, kr) in row_taps.iter().enumerate() {
                    let sr = mirror_idx(r as isize + ty as isize - co, h);
                    let sc = mirror_idx(c as isize + tx as isize - ro, w);
                    acc += kc * kr * grid[(sr, sc)];
                }
            }
            out[(r, c)] = acc;
        }
    }
    out
}

/// The five variants via the dense oracle, in catalog order
/// (Original, LL, LH, HL, HH); tag letter 1 filters rows, letter 2 columns.
pub fn oracle_filter_bank(grid: &Array2<f64>, low: &[f64], high: &[f64]) -> Vec<Array2<f64>> {
    vec![
        grid.clone(),
        oracle_conv2_separable(grid, low, low),
        oracle_conv2_separable(grid, low, high),
        oracle_conv2_separable(grid, high, low),
        oracle_conv2_separable(grid, high, high),
    ]
}

// ---------------------------------------------------------------------
// discretization oracle

pub fn oracle_discretize(grid: &Array2<f64>, bins: u32) -> Array2<u32> {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for &v in grid.iter() {
        min = min.min(v);
        max = max.max(v);
    }
    grid.mapv(|p| {
        if max == min {
            1
        } else {
            let raw = ((p - min) / (max - min) * bins as f64).floor() as u32 + 1;
            raw.min(bins)
        }
    })
}

pub fn distinct_levels(levels: &Array2<u32>) -> u32 {
    let mut seen = std::collections::BTreeSet::new();
    for &l in levels.iter() {
        seen.insert(l);
    }
    seen.len() as u32
}

// ---------------------------------------------------------------------
// Jacobi eigenvalues (cyclic sweeps) for small symmetric matrices

pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    if n == 0 {
        return Vec::new();
    }
    for _sweep in 0..200 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p][q] * a[p][q];
            }
        }
        if off < 1e-26 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let tau = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

// ---------------------------------------------------------------------
// GLCM oracle

const DIRS: [(isize, isize); 4] = [(0, 1), (1, 1), (1, 0), (1, -1)];

fn glcm_matrix(levels: &Array2<u32>, bins: usize, d: (isize, isize)) -> Vec<Vec<f64>> {
    let (h, w) = levels.dim();
    let mut m = vec![vec![0.0; bins + 1]; bins + 1];
    let mut total = 0.0;
    for r in 0..h {
        for c in 0..w {
            for sign in [1isize, -1] {
                let nr = r as isize + sign * d.0;
                let nc = c as isize + sign * d.1;
                if nr >= 0 && nr < h as isize && nc >= 0 && nc < w as isize {
                    m[levels[(r, c)] as usize][levels[(nr as usize, nc as usize)] as usize] += 1.0;
                    total += 1.0;
                }
            }
        }
    }
    for row in &mut m {
        for v in row.iter_mut() {
            *v /= total;
        }
    }
    m
}

/// Feature order matches `GLCM_FEATURE_NAMES`.
pub fn oracle_glcm(levels: &Array2<u32>, bins: usize) -> [f64; 24] {
    let ng = f64::from(distinct_levels(levels));
    let mut acc = [0.0f64; 24];
    for d in DIRS {
        let p = glcm_matrix(levels, bins, d);
        let f = oracle_glcm_direction(&p, ng);
        for (a, v) in acc.iter_mut().zip(f) {
            *a += v;
        }
    }
    acc.map(|v| v / 4.0)
}

fn oracle_glcm_direction(p: &[Vec<f64>], ng: f64) -> [f64; 24] {
    let nb = p.len() - 1;
    let idx = 1..=nb;

    let px: Vec<f64> = (0..=nb).map(|i| p[i].iter().sum()).collect();
    let mu: f64 = idx.clone().map(|i| i as f64 * px[i]).sum();
    let sigma2: f64 = idx.clone().map(|i| (i as f64 - mu) * (i as f64 - mu) * px[i]).sum();

    let sum2 = |f: &dyn Fn(usize, usize, f64) -> f64| -> f64 {
        let mut acc = 0.0;
        for i in 1..=nb {
            for j in 1..=nb {
                if p[i][j] > 0.0 {
                    acc += f(i, j, p[i][j]);
                }
            }
        }
        acc
    };

    let autocorrelation = sum2(&|i, j, v| i as f64 * j as f64 * v);
    let cluster_prominence = sum2(&|i, j, v| (i as f64 + j as f64 - 2.0 * mu).powi(4) * v);
    let cluster_shade = sum2(&|i, j, v| (i as f64 + j as f64 - 2.0 * mu).powi(3) * v);
    let cluster_tendency = sum2(&|i, j, v| (i as f64 + j as f64 - 2.0 * mu).powi(2) * v);
    let contrast = sum2(&|i, j, v| (i as f64 - j as f64).powi(2) * v);
    let correlation = if sigma2 > 0.0 {
        (autocorrelation - mu * mu) / sigma2
    } else {
        1.0
    };
    let joint_energy = sum2(&|_, _, v| v * v);
    let joint_entropy = -sum2(&|_, _, v| v * v.log2());
    let max_prob = {
        let mut m = 0.0f64;
        for i in 1..=nb {
            for j in 1..=nb {
                m = m.max(p[i][j]);
            }
        }
        m
    };
    let sum_squares = sum2(&|i, _, v| (i as f64 - mu).powi(2) * v);

    // sum / difference marginals
    let mut psum = vec![0.0; 2 * nb + 1];
    let mut pdiff = vec![0.0; nb];
    for i in 1..=nb {
        for j in 1..=nb {
            psum[i + j] += p[i][j];
            pdiff[i.abs_diff(j)] += p[i][j];
        }
    }
    let sum_average: f64 = psum.iter().enumerate().map(|(k, v)| k as f64 * v).sum();
    let sum_entropy: f64 = -psum
        .iter()
        .filter(|v| **v > 0.0)
        .map(|v| v * v.log2())
        .sum::<f64>();
    let diff_average: f64 = pdiff.iter().enumerate().map(|(k, v)| k as f64 * v).sum();
    let diff_entropy: f64 = -pdiff
        .iter()
        .filter(|v| **v > 0.0)
        .map(|v| v * v.log2())
        .sum::<f64>();
    let diff_variance: f64 = pdiff
        .iter()
        .enumerate()
        .map(|(k, v)| (k as f64 - diff_average).powi(2) * v)
        .sum();
    let id: f64 = pdiff.iter().enumerate().map(|(k, v)| v / (1.0 + k as f64)).sum();
    let idm: f64 = pdiff
        .iter()
        .enumerate()
        .map(|(k, v)| v / (1.0 + (k * k) as f64))
        .sum();
    let idmn: f64 = pdiff
        .iter()
        .enumerate()
        .map(|(k, v)| v / (1.0 + (k * k) as f64 / (ng * ng)))
        .sum();
    let idn: f64 = pdiff
        .iter()
        .enumerate()
        .map(|(k, v)| v / (1.0 + k as f64 / ng))
        .sum();
    let inverse_variance: f64 = pdiff
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, v)| v / ((k * k) as f64))
        .sum();

    let hx: f64 = -px
        .iter()
        .filter(|v| **v > 0.0)
        .map(|v| v * v.log2())
        .sum::<f64>();
    let hxy1 = -sum2(&|i, j, v| v * (px[i] * px[j]).log2());
    let mut hxy2 = 0.0;
    for i in 1..=nb {
        for j in 1..=nb {
            let q = px[i] * px[j];
            if q > 0.0 {
                hxy2 -= q * q.log2();
            }
        }
    }
    let imc1 = if hx > 0.0 { (joint_entropy - hxy1) / hx } else { 0.0 };
    let imc2 = (1.0 - (-2.0 * (hxy2 - joint_entropy)).exp()).max(0.0).sqrt();

    // MCC: textbook Q matrix over occupied levels, symmetrized by the
    // diagonal similarity D^{1/2} Q D^{-1/2}, eigenvalues by Jacobi.
    let occupied: Vec<usize> = (1..=nb).filter(|&i| px[i] > 0.0).collect();
    let mcc = if occupied.len() < 2 {
        1.0
    } else {
        let n = occupied.len();
        let mut q = vec![vec![0.0; n]; n];
        for (a, &i) in occupied.iter().enumerate() {
            for (b, &j) in occupied.iter().enumerate() {
                let mut acc = 0.0;
                for &k in &occupied {
                    acc += p[i][k] * p[j][k] / (px[i] * px[k]);
                }
                q[a][b] = acc;
            }
        }
        let mut s = vec![vec![0.0; n]; n];
        for a in 0..n {
            for b in 0..n {
                s[a][b] = (px[occupied[a]] / px[occupied[b]]).sqrt() * q[a][b];
            }
        }
        // Enforce exact symmetry before the Jacobi sweep.
        for a in 0..n {
            for b in (a + 1)..n {
                let v = 0.5 * (s[a][b] + s[b][a]);
                s[a][b] = v;
                s[b][a] = v;
            }
        }
        let mut eig = jacobi_eigenvalues(s);
        eig.sort_by(|x, y| y.partial_cmp(x).unwrap());
        eig[1].max(0.0).sqrt()
    };

    [
        autocorrelation,
        cluster_prominence,
        cluster_shade,
        cluster_tendency,
        contrast,
        correlation,
        diff_average,
        diff_entropy,
        diff_variance,
        id,
        idm,
        idmn,
        idn,
        imc1,
        imc2,
        inverse_variance,
        mu,
        joint_energy,
        joint_entropy,
        mcc,
        max_prob,
        sum_average,
        sum_entropy,
        sum_squares,
    ]
}

// ---------------------------------------------------------------------
// GLRLM oracle: run-start detection + forward walk

fn glrlm_matrix(levels: &Array2<u32>, bins: usize, d: (isize, isize)) -> Vec<Vec<f64>> {
    let (h, w) = levels.dim();
    let max_len = h.max(w);
    let mut m = vec![vec![0.0; max_len + 1]; bins + 1];
    for r in 0..h {
        for c in 0..w {
            // Run start: the predecessor along d is out of bounds or differs.
            let pr = r as isize - d.0;
            let pc = c as isize - d.1;
            let is_start = pr < 0
                || pr >= h as isize
                || pc < 0
                || pc >= w as isize
                || levels[(pr as usize, pc as usize)] != levels[(r, c)];
            if !is_start {
                continue;
            }
            let mut len = 1usize;
            let (mut nr, mut nc) = (r as isize + d.0, c as isize + d.1);
            while nr >= 0
                && nr < h as isize
                && nc >= 0
                && nc < w as isize
                && levels[(nr as usize, nc as usize)] == levels[(r, c)]
            {
                len += 1;
                nr += d.0;
                nc += d.1;
            }
            m[levels[(r, c)] as usize][len] += 1.0;
        }
    }
    m
}

/// The 16 level/size statistics in GLRLM name order, by direct loops.
fn oracle_size_stats(m: &[Vec<f64>], np: f64) -> [f64; 16] {
    let nr: f64 = m.iter().map(|r| r.iter().sum::<f64>()).sum();
    let mut gln = 0.0;
    for row in m {
        let s: f64 = row.iter().sum();
        gln += s * s;
    }
    let cols = m[0].len();
    let mut rln = 0.0;
    for j in 0..cols {
        let s: f64 = m.iter().map(|row| row[j]).sum();
        rln += s * s;
    }
    let mut sre = 0.0;
    let mut lre = 0.0;
    let mut lgl = 0.0;
    let mut hgl = 0.0;
    let mut srlgl = 0.0;
    let mut srhgl = 0.0;
    let mut lrlgl = 0.0;
    let mut lrhgl = 0.0;
    let mut entropy = 0.0;
    let mut mu_i = 0.0;
    let mut mu_j = 0.0;
    for (i, row) in m.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v <= 0.0 {
                continue;
            }
            let (fi, fj) = (i as f64, j as f64);
            sre += v / (fj * fj);
            lre += v * fj * fj;
            lgl += v / (fi * fi);
            hgl += v * fi * fi;
            srlgl += v / (fi * fi * fj * fj);
            srhgl += v * fi * fi / (fj * fj);
            lrlgl += v * fj * fj / (fi * fi);
            lrhgl += v * fi * fi * fj * fj;
            let q = v / nr;
            entropy -= q * q.log2();
            mu_i += q * fi;
            mu_j += q * fj;
        }
    }
    let mut var_i = 0.0;
    let mut var_j = 0.0;
    for (i, row) in m.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v > 0.0 {
                let q = v / nr;
                var_i += q * (i as f64 - mu_i) * (i as f64 - mu_i);
                var_j += q * (j as f64 - mu_j) * (j as f64 - mu_j);
            }
        }
    }
    [
        gln / nr,
        gln / (nr * nr),
        var_i,
        hgl / nr,
        lre / nr,
        lrhgl / nr,
        lrlgl / nr,
        lgl / nr,
        entropy,
        rln / nr,
        rln / (nr * nr),
        nr / np,
        var_j,
        sre / nr,
        srhgl / nr,
        srlgl / nr,
    ]
}

pub fn oracle_glrlm(levels: &Array2<u32>, bins: usize) -> [f64; 16] {
    let np = levels.len() as f64;
    let mut acc = [0.0f64; 16];
    for d in DIRS {
        let m = glrlm_matrix(levels, bins, d);
        let f = oracle_size_stats(&m, np);
        for (a, v) in acc.iter_mut().zip(f) {
            *a += v;
        }
    }
    acc.map(|v| v / 4.0)
}

/// Single-direction run-length statistics (the averaged form above is the
/// catalog feature).
pub fn oracle_glrlm_direction(levels: &Array2<u32>, bins: usize, d: (isize, isize)) -> [f64; 16] {
    let m = glrlm_matrix(levels, bins, d);
    oracle_size_stats(&m, levels.len() as f64)
}

// ---------------------------------------------------------------------
// GLSZM oracle: BFS flood fill

pub fn oracle_glszm(levels: &Array2<u32>, bins: usize) -> [f64; 16] {
    use std::collections::VecDeque;
    let (h, w) = levels.dim();
    let np = (h * w) as f64;
    let mut m = vec![vec![0.0; h * w + 1]; bins + 1];
    let mut seen = Array2::from_elem((h, w), false);
    for sr in 0..h {
        for sc in 0..w {
            if seen[(sr, sc)] {
                continue;
            }
            let level = levels[(sr, sc)];
            let mut queue = VecDeque::new();
            queue.push_back((sr, sc));
            seen[(sr, sc)] = true;
            let mut size = 0usize;
            while let Some((r, c)) = queue.pop_front() {
                size += 1;
                for dr in -1isize..=1 {
                    for dc in -1isize..=1 {
                        let (nr, nc) = (r as isize + dr, c as isize + dc);
                        if (dr != 0 || dc != 0)
                            && nr >= 0
                            && nr < h as isize
                            && nc >= 0
                            && nc < w as isize
                            && !seen[(nr as usize, nc as usize)]
                            && levels[(nr as usize, nc as usize)] == level
                        {
                            seen[(nr as usize, nc as usize)] = true;
                            queue.push_back((nr as usize, nc as usize));
                        }
                    }
                }
            }
            m[level as usize][size] += 1.0;
        }
    }
    // Reorder the shared level/size stats into GLSZM name order.
    let f = oracle_size_stats(&m, np);
    [
        f[0], f[1], f[2], f[3], f[4], f[5], f[6], f[7], f[9], f[10], f[13], f[14], f[15], f[8],
        f[11], f[12],
    ]
}

// ---------------------------------------------------------------------
// GLDM oracle

pub fn oracle_gldm(levels: &Array2<u32>, bins: usize) -> [f64; 14] {
    let (h, w) = levels.dim();
    let mut m = vec![vec![0.0; 10]; bins + 1];
    for r in 0..h {
        for c in 0..w {
            let mut dep = 1usize;
            for dr in -1isize..=1 {
                for dc in -1isize..=1 {
                    if dr == 0 && dc == 0 {
                        continue;
                    }
                    let (nr, nc) = (r as isize + dr, c as isize + dc);
                    if nr >= 0
                        && nr < h as isize
                        && nc >= 0
                        && nc < w as isize
                        && levels[(nr as usize, nc as usize)] == levels[(r, c)]
                    {
                        dep += 1;
                    }
                }
            }
            m[levels[(r, c)] as usize][dep] += 1.0;
        }
    }
    let nz: f64 = m.iter().map(|r| r.iter().sum::<f64>()).sum();
    let mut gln = 0.0;
    for row in &m {
        let s: f64 = row.iter().sum();
        gln += s * s;
    }
    let mut dn = 0.0;
    for j in 0..10 {
        let s: f64 = m.iter().map(|row| row[j]).sum();
        dn += s * s;
    }
    let mut entropy = 0.0;
    let mut mu_i = 0.0;
    let mut mu_j = 0.0;
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
            let q = v / nz;
            entropy -= q * q.log2();
            mu_i += q * fi;
            mu_j += q * fj;
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
    let mut var_i = 0.0;
    let mut var_j = 0.0;
    for (i, row) in m.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v > 0.0 {
                let q = v / nz;
                var_i += q * (i as f64 - mu_i) * (i as f64 - mu_i);
                var_j += q * (j as f64 - mu_j) * (j as f64 - mu_j);
            }
        }
    }
    [
        entropy,
        dn / nz,
        dn / (nz * nz),
        var_j,
        gln / nz,
        var_i,
        hgl / nz,
        lde / nz,
        ldhgl / nz,
        ldlgl / nz,
        lgl / nz,
        sde / nz,
        sdhgl / nz,
        sdlgl / nz,
    ]
}

// ---------------------------------------------------------------------
// NGTDM oracle

pub fn oracle_ngtdm(levels: &Array2<u32>, bins: usize) -> [f64; 5] {
    let (h, w) = levels.dim();
    let mut n = vec![0.0f64; bins + 1];
    let mut s = vec![0.0f64; bins + 1];
    for r in 0..h {
        for c in 0..w {
            let mut sum = 0.0;
            let mut cnt = 0.0;
            for dr in -1isize..=1 {
                for dc in -1isize..=1 {
                    if dr == 0 && dc == 0 {
                        continue;
                    }
                    let (nr, nc) = (r as isize + dr, c as isize + dc);
                    if nr >= 0 && nr < h as isize && nc >= 0 && nc < w as isize {
                        sum += f64::from(levels[(nr as usize, nc as usize)]);
                        cnt += 1.0;
                    }
                }
            }
            let i = levels[(r, c)] as usize;
            n[i] += 1.0;
            s[i] += (f64::from(levels[(r, c)]) - sum / cnt).abs();
        }
    }
    let nvp: f64 = n.iter().sum();
    let occupied: Vec<usize> = (0..=bins).filter(|&i| n[i] > 0.0).collect();
    let ngp = occupied.len() as f64;
    let psum: f64 = occupied.iter().map(|&i| n[i] / nvp * s[i]).sum();
    let stot: f64 = occupied.iter().map(|&i| s[i]).sum();

    let coarseness = if psum > 0.0 { (1.0 / psum).min(1e6) } else { 1e6 };
    let contrast = if ngp > 1.0 {
        let mut pair = 0.0;
        for &i in &occupied {
            for &j in &occupied {
                pair += (n[i] / nvp) * (n[j] / nvp) * ((i as f64 - j as f64).powi(2));
            }
        }
        pair / (ngp * (ngp - 1.0)) * stot / nvp
    } else {
        0.0
    };
    let mut busy_den = 0.0;
    let mut complexity = 0.0;
    let mut strength = 0.0;
    for &i in &occupied {
        for &j in &occupied {
            let (pi, pj) = (n[i] / nvp, n[j] / nvp);
            busy_den += (i as f64 * pi - j as f64 * pj).abs();
            complexity += (i as f64 - j as f64).abs() * (pi * s[i] + pj * s[j]) / (pi + pj);
            strength += (pi + pj) * (i as f64 - j as f64).powi(2);
        }
    }
    let busyness = if busy_den > 0.0 { psum / busy_den } else { 0.0 };
    complexity /= nvp;
    let strength = if stot > 0.0 { strength / stot } else { 0.0 };
    [busyness, coarseness, complexity, contrast, strength]
}

// ---------------------------------------------------------------------
// first-order oracle

pub fn oracle_first_order(grid: &Array2<f64>, bins: u32) -> [f64; 18] {
    let mut v: Vec<f64> = grid.iter().copied().collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len() as f64;
    let pct = |p: f64| -> f64 {
        if v.len() == 1 {
            return v[0];
        }
        let r = p / 100.0 * (v.len() - 1) as f64;
        let lo = r.floor() as usize;
        let hi = (lo + 1).min(v.len() - 1);
        v[lo] + (r - lo as f64) * (v[hi] - v[lo])
    };
    let energy: f64 = v.iter().map(|x| x * x).sum();
    let mean = if v[0] == v[v.len() - 1] {
        v[0]
    } else {
        v.iter().sum::<f64>() / n
    };
    let variance = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    let mad = v.iter().map(|x| (x - mean).abs()).sum::<f64>() / n;
    let (p10, p90) = (pct(10.0), pct(90.0));
    let trimmed: Vec<f64> = v.iter().copied().filter(|x| *x >= p10 && *x <= p90).collect();
    let rmad = if trimmed.is_empty() {
        0.0
    } else {
        let tm = trimmed.iter().sum::<f64>() / trimmed.len() as f64;
        trimmed.iter().map(|x| (x - tm).abs()).sum::<f64>() / trimmed.len() as f64
    };
    let (skew, kurt) = if variance > 1e-28 {
        let m3 = v.iter().map(|x| (x - mean).powi(3)).sum::<f64>() / n;
        let m4 = v.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n;
        (m3 / variance.powf(1.5), m4 / (variance * variance))
    } else {
        (0.0, 0.0)
    };
    let levels = oracle_discretize(grid, bins);
    let mut hist = vec![0.0f64; bins as usize + 1];
    for &l in levels.iter() {
        hist[l as usize] += 1.0;
    }
    let mut entropy = 0.0;
    let mut uniformity = 0.0;
    for &c in &hist {
        if c > 0.0 {
            let p = c / n;
            entropy -= p * p.log2();
            uniformity += p * p;
        }
    }
    [
        energy,
        energy,
        entropy,
        v[0],
        p10,
        p90,
        v[v.len() - 1],
        mean,
        pct(50.0),
        pct(75.0) - pct(25.0),
        v[v.len() - 1] - v[0],
        mad,
        rmad,
        (energy / n).sqrt(),
        skew,
        kurt,
        variance,
        uniformity,
    ]
}

// ---------------------------------------------------------------------
// full-pipeline oracle: all 465 features of one image, in catalog order

pub fn oracle_full_features(grid: &Array2<f64>, bins: u32, low: &[f64], high: &[f64]) -> Vec<f64> {
    let bank = oracle_filter_bank(grid, low, high);
    let mut out = Vec::with_capacity(465);
    for variant_grid in &bank {
        let levels = oracle_discretize(variant_grid, bins);
        out.extend(oracle_first_order(variant_grid, bins));
        out.extend(oracle_glcm(&levels, bins as usize));
        out.extend(oracle_glrlm(&levels, bins as usize));
        out.extend(oracle_glszm(&levels, bins as usize));
        out.extend(oracle_gldm(&levels, bins as usize));
        out.extend(oracle_ngtdm(&levels, bins as usize));
    }
    out
}

/// Exhaustive pair-counting AUC.
pub fn oracle_auc(pos: &[f64], neg: &[f64]) -> f64 {
    let mut acc = 0.0;
    for &p in pos {
        for &q in neg {
            if p > q {
                acc += 1.0;
            } else if p == q {
                acc += 0.5;
            }
        }
    }
    acc / (pos.len() as f64 * neg.len() as f64)
}
