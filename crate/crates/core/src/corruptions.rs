//! Severity-parameterized, seeded image degradations.
//!
//! Four kinds, each controlled by a severity percentage `p ∈ [0, 100]` with
//! `p = 0` being the identity: additive Gaussian noise, Gaussian blur,
//! random patch swaps and a multiplicative low-frequency bias field. Every
//! output is a pure function of `(image, spec)`: the per-image random stream
//! is ChaCha8 seeded with `spec.seed XOR fnv1a64(image.id)`, so results are
//! reproducible across platforms and independent of how a set is
//! parallelized.

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imageio::{Image, ImageSet};

/// Side length of the square patches moved by [`CorruptionKind::RandomSwap`].
pub const SWAP_PATCH_SIZE: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CorruptionKind {
    GaussianNoise,
    GaussianBlur,
    RandomSwap,
    BiasField,
}

impl CorruptionKind {
    pub fn from_label(label: &str) -> Option<Self> {
        match label {
            "noise" => Some(Self::GaussianNoise),
            "blur" => Some(Self::GaussianBlur),
            "swap" => Some(Self::RandomSwap),
            "bias" => Some(Self::BiasField),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorruptionSpec {
    pub kind: CorruptionKind,
    /// Severity percentage in `[0, 100]`.
    pub severity: f64,
    pub seed: u64,
}

/// FNV-1a 64-bit hash; restated here so seeds stay stable across toolchains.
fn fnv1a64(data: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in data {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

fn image_rng(spec: &CorruptionSpec, id: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(spec.seed ^ fnv1a64(id.as_bytes()))
}

/// Applies the corruption; the output keeps the input's id.
pub fn apply(img: &Image, spec: &CorruptionSpec) -> Result<Image> {
    if !(0.0..=100.0).contains(&spec.severity) || !spec.severity.is_finite() {
        return Err(Error::ParamError(format!(
            "severity must be in [0, 100], got {}",
            spec.severity
        )));
    }
    if spec.severity == 0.0 {
        return Ok(img.clone());
    }
    let mut rng = image_rng(spec, &img.id);
    let pixels = match spec.kind {
        CorruptionKind::GaussianNoise => gaussian_noise(&img.pixels, spec.severity, &mut rng),
        CorruptionKind::GaussianBlur => gaussian_blur(&img.pixels, spec.severity),
        CorruptionKind::RandomSwap => random_swap(&img.pixels, spec.severity, &mut rng),
        CorruptionKind::BiasField => bias_field(&img.pixels, spec.severity, &mut rng),
    };
    Image::new(img.id.clone(), pixels)
}

/// Parallel [`apply`] over a set; per-image seeds make the result
/// independent of scheduling.
pub fn apply_set(set: &ImageSet, spec: &CorruptionSpec) -> Result<ImageSet> {
    let images = set
        .images
        .par_iter()
        .map(|img| apply(img, spec))
        .collect::<Result<Vec<_>>>()?;
    ImageSet::new(set.name.clone(), images)
}

/// `x ← clip(x + (p/100)·ε, [0,1])` with per-pixel standard normal draws in
/// row-major order.
fn gaussian_noise(grid: &Array2<f64>, p: f64, rng: &mut ChaCha8Rng) -> Array2<f64> {
    let scale = p / 100.0;
    grid.mapv(|v| {
        let eps: f64 = rng.sample(StandardNormal);
        (v + scale * eps).clamp(0.0, 1.0)
    })
}

/// Nearest odd integer, rounding half away from zero.
fn nearest_odd(x: f64) -> isize {
    2 * (((x - 1.0) / 2.0).round() as isize) + 1
}

/// Gaussian blur with kernel size `k = nearest odd of (p/100)·max(H, W)` and
/// `σ = k/6`; `k < 3` is the identity. Separable convolution with symmetric
/// padding.
fn gaussian_blur(grid: &Array2<f64>, p: f64) -> Array2<f64> {
    let (h, w) = grid.dim();
    let k = nearest_odd(p / 100.0 * h.max(w) as f64);
    if k < 3 {
        return grid.clone();
    }
    let k = k as usize;
    let sigma = k as f64 / 6.0;
    let half = (k / 2) as isize;
    let mut taps: Vec<f64> = (-half..=half)
        .map(|t| (-((t * t) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = taps.iter().sum();
    taps.iter_mut().for_each(|t| *t /= sum);

    let mirror = |mut idx: isize, n: usize| -> usize {
        let n = n as isize;
        loop {
            if idx < 0 {
                idx = -idx - 1;
            } else if idx >= n {
                idx = 2 * n - 1 - idx;
            } else {
                return idx as usize;
            }
        }
    };

    let mut rows_done = Array2::zeros((h, w));
    for r in 0..h {
        for c in 0..w {
            let mut acc = 0.0;
            for (t, tap) in taps.iter().enumerate() {
                acc += tap * grid[(r, mirror(c as isize + t as isize - half, w))];
            }
            rows_done[(r, c)] = acc;
        }
    }
    let mut out = Array2::zeros((h, w));
    for r in 0..h {
        for c in 0..w {
            let mut acc = 0.0;
            for (t, tap) in taps.iter().enumerate() {
                acc += tap * rows_done[(mirror(r as isize + t as isize - half, h), c)];
            }
            out[(r, c)] = acc;
        }
    }
    out
}

/// Swaps `round(p)` pairs of 15×15 patches at uniform in-bounds positions.
/// Patch pairs are redrawn until disjoint so each swap is a true pixel
/// permutation; images smaller than a patch are returned unchanged (no
/// valid placement).
fn random_swap(grid: &Array2<f64>, p: f64, rng: &mut ChaCha8Rng) -> Array2<f64> {
    let (h, w) = grid.dim();
    let k = SWAP_PATCH_SIZE;
    if h < k || w < k {
        return grid.clone();
    }
    let mut out = grid.clone();
    let swaps = p.round() as usize;
    for _ in 0..swaps {
        let mut pair = None;
        for _ in 0..64 {
            let r1 = rng.random_range(0..=h - k);
            let c1 = rng.random_range(0..=w - k);
            let r2 = rng.random_range(0..=h - k);
            let c2 = rng.random_range(0..=w - k);
            let overlap = r1.abs_diff(r2) < k && c1.abs_diff(c2) < k;
            if !overlap {
                pair = Some((r1, c1, r2, c2));
                break;
            }
        }
        // Give up on this swap if the image leaves no room for two
        // disjoint patches.
        let Some((r1, c1, r2, c2)) = pair else { continue };
        for dr in 0..k {
            for dc in 0..k {
                let a = out[(r1 + dr, c1 + dc)];
                out[(r1 + dr, c1 + dc)] = out[(r2 + dr, c2 + dc)];
                out[(r2 + dr, c2 + dc)] = a;
            }
        }
    }
    out
}

/// Multiplies by a random degree-3 polynomial field over normalized
/// coordinates in `[-1, 1]²`, coefficients uniform in `[-c, c]` with
/// `c = (p/100)·0.5`. The field is shifted to mean 1 (a mean-division would
/// be singular for near-zero-mean polynomials) and the product is clipped to
/// `[0,1]`.
fn bias_field(grid: &Array2<f64>, p: f64, rng: &mut ChaCha8Rng) -> Array2<f64> {
    let (h, w) = grid.dim();
    let c = p / 100.0 * 0.5;
    // Coefficients for x^i·y^j, i + j ≤ 3, drawn in fixed (i, j) order.
    let mut coeffs = Vec::with_capacity(10);
    for i in 0..=3usize {
        for j in 0..=(3 - i) {
            let u: f64 = rng.random();
            coeffs.push(((i, j), c * (2.0 * u - 1.0)));
        }
    }
    let coord = |idx: usize, n: usize| -> f64 {
        if n > 1 {
            2.0 * idx as f64 / (n - 1) as f64 - 1.0
        } else {
            0.0
        }
    };
    let mut field = Array2::zeros((h, w));
    for r in 0..h {
        let y = coord(r, h);
        for col in 0..w {
            let x = coord(col, w);
            let mut v = 0.0;
            for &((i, j), a) in &coeffs {
                v += a * x.powi(i as i32) * y.powi(j as i32);
            }
            field[(r, col)] = v;
        }
    }
    let mean = field.sum() / field.len() as f64;
    field.mapv_inplace(|v| v - mean + 1.0);
    let mut out = grid * &field;
    out.mapv_inplace(|v| v.clamp(0.0, 1.0));
    out
}
