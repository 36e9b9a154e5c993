//! Single-level undecimated wavelet filter bank.
//!
//! Each image expands into five variants: the original grid plus the four
//! sub-bands obtained by separable low/high-pass filtering along rows then
//! columns. The transform is undecimated (outputs keep the input shape) and
//! uses half-sample symmetric boundary padding, so a constant image yields a
//! constant LL band and exactly-zero LH/HL/HH bands.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imageio::Image;

/// The five filter variants, in fixed catalog order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FilterVariant {
    Original,
    LL,
    LH,
    HL,
    HH,
}

impl FilterVariant {
    pub const ALL: [FilterVariant; 5] = [
        FilterVariant::Original,
        FilterVariant::LL,
        FilterVariant::LH,
        FilterVariant::HL,
        FilterVariant::HH,
    ];

    /// Catalog label, e.g. `original` or `wavelet-LH`.
    pub fn label(self) -> &'static str {
        match self {
            FilterVariant::Original => "original",
            FilterVariant::LL => "wavelet-LL",
            FilterVariant::LH => "wavelet-LH",
            FilterVariant::HL => "wavelet-HL",
            FilterVariant::HH => "wavelet-HH",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|v| v.label() == label)
    }
}

/// A low/high-pass filter pair. The high-pass taps are derived from the
/// low-pass by the quadrature-mirror rule `g[k] = (-1)^k · h[L-1-k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletKernel {
    pub name: String,
    pub low: Vec<f64>,
    pub high: Vec<f64>,
}

impl WaveletKernel {
    /// Builds a kernel from low-pass taps; fails unless they are
    /// L2-normalized (`Σ h²  = 1` within 1e-8).
    pub fn from_lowpass(name: impl Into<String>, low: Vec<f64>) -> Result<Self> {
        let name = name.into();
        let norm: f64 = low.iter().map(|h| h * h).sum();
        if low.len() < 2 || (norm - 1.0).abs() > 1e-8 {
            return Err(Error::KernelError(format!(
                "kernel '{name}': low-pass taps must be L2-normalized (got Σh² = {norm})"
            )));
        }
        let len = low.len();
        let high = (0..len)
            .map(|k| if k % 2 == 0 { low[len - 1 - k] } else { -low[len - 1 - k] })
            .collect();
        Ok(Self { name, low, high })
    }

    /// Haar pair: `L = (1/√2, 1/√2)`, `H = (1/√2, −1/√2)`.
    pub fn haar() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_lowpass("haar", vec![s, s]).expect("haar taps are normalized")
    }

    /// Coiflet-1 decomposition pair (6 taps).
    pub fn coif1() -> Self {
        Self::from_lowpass(
            "coif1",
            vec![
                -0.015655728135464787,
                -0.07273261951285390,
                0.38486484686420286,
                0.85257202021225542,
                0.33789766245780922,
                -0.07273261951285390,
            ],
        )
        .expect("coif1 taps are normalized")
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "haar" => Ok(Self::haar()),
            "coif1" => Ok(Self::coif1()),
            other => Err(Error::KernelError(format!("unknown wavelet '{other}'"))),
        }
    }
}

/// One filtered grid; not clipped to `[0,1]`.
#[derive(Debug, Clone)]
pub struct FilterBankOutput {
    pub variant: FilterVariant,
    pub pixels: Array2<f64>,
}

/// Half-sample symmetric mirror of an out-of-range index, folded as many
/// times as needed (`-1 → 0`, `n → n-1`, ...).
fn mirror(mut idx: isize, n: usize) -> usize {
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
}

/// 1D undecimated convolution along a slice:
/// `out[i] = Σ_t k[t] · x_sym[i + t − L/2 + 1]`.
fn convolve_line(line: &[f64], taps: &[f64], out: &mut [f64]) {
    let n = line.len();
    let offset = taps.len() as isize / 2 - 1;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (t, k) in taps.iter().enumerate() {
            acc += k * line[mirror(i as isize + t as isize - offset, n)];
        }
        *o = acc;
    }
}

fn filter_rows(grid: &Array2<f64>, taps: &[f64]) -> Array2<f64> {
    let (h, w) = grid.dim();
    let mut out = Array2::zeros((h, w));
    let mut buf = vec![0.0; w];
    for r in 0..h {
        let row: Vec<f64> = grid.row(r).to_vec();
        convolve_line(&row, taps, &mut buf);
        out.row_mut(r).iter_mut().zip(&buf).for_each(|(o, v)| *o = *v);
    }
    out
}

fn filter_cols(grid: &Array2<f64>, taps: &[f64]) -> Array2<f64> {
    let (h, w) = grid.dim();
    let mut out = Array2::zeros((h, w));
    let mut buf = vec![0.0; h];
    for c in 0..w {
        let col: Vec<f64> = grid.column(c).to_vec();
        convolve_line(&col, taps, &mut buf);
        out.column_mut(c).iter_mut().zip(&buf).for_each(|(o, v)| *o = *v);
    }
    out
}

/// Produces the five variants of `img` in fixed order
/// (Original, LL, LH, HL, HH). For tag `XY`, filter `X` is applied along
/// rows and `Y` along columns.
pub fn filter_bank(img: &Image, kernel: &WaveletKernel) -> Vec<FilterBankOutput> {
    filter_bank_grid(&img.pixels, kernel)
}

/// [`filter_bank`] on a bare grid.
pub fn filter_bank_grid(grid: &Array2<f64>, kernel: &WaveletKernel) -> Vec<FilterBankOutput> {
    let low_rows = filter_rows(grid, &kernel.low);
    let high_rows = filter_rows(grid, &kernel.high);
    let outputs = [
        (FilterVariant::Original, grid.clone()),
        (FilterVariant::LL, filter_cols(&low_rows, &kernel.low)),
        (FilterVariant::LH, filter_cols(&low_rows, &kernel.high)),
        (FilterVariant::HL, filter_cols(&high_rows, &kernel.low)),
        (FilterVariant::HH, filter_cols(&high_rows, &kernel.high)),
    ];
    outputs
        .into_iter()
        .map(|(variant, pixels)| FilterBankOutput { variant, pixels })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;

    fn bank_of(grid: Array2<f64>) -> Vec<FilterBankOutput> {
        filter_bank_grid(&grid, &WaveletKernel::haar())
    }

    #[test]
    fn haar_high_pass_follows_qmf() {
        let k = WaveletKernel::haar();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((k.high[0] - s).abs() < 1e-15);
        assert!((k.high[1] + s).abs() < 1e-15);
    }

    #[test]
    fn unnormalized_kernel_rejected() {
        match WaveletKernel::from_lowpass("bad", vec![0.5, 0.5]) {
            Err(Error::KernelError(_)) => {}
            other => panic!("expected KernelError, got {other:?}"),
        }
    }

    #[test]
    fn constant_image_bands() {
        let c = 0.37;
        let bank = bank_of(Array2::from_elem((8, 8), c));
        // LL = c·(Σ low taps)² = 2c; the high-pass bands vanish.
        assert!(bank[1].pixels.iter().all(|v| (v - 2.0 * c).abs() < 1e-12));
        for b in &bank[2..] {
            assert!(b.pixels.iter().all(|v| v.abs() < 1e-12), "{:?}", b.variant);
        }
    }

    #[test]
    fn variant_order_is_fixed() {
        let bank = bank_of(Array2::zeros((4, 4)));
        let tags: Vec<_> = bank.iter().map(|b| b.variant).collect();
        assert_eq!(tags, FilterVariant::ALL);
    }

    #[test]
    fn step_edge_hl_support_is_edge_adjacent() {
        // Columns 0..4 are 0, columns 4..8 are 1. HL = high along rows: the
        // response must vanish away from the columns touching the edge.
        let grid = Array2::from_shape_fn((8, 8), |(_, c)| if c >= 4 { 1.0 } else { 0.0 });
        let bank = bank_of(grid);
        let hl = &bank[3].pixels;
        for ((_, c), v) in hl.indexed_iter() {
            if !(3..=5).contains(&c) {
                assert!(v.abs() < 1e-12, "column {c} unexpectedly nonzero: {v}");
            }
        }
        assert!(hl.iter().any(|v| v.abs() > 0.1));
    }

    #[test]
    fn linearity_spot_check() {
        let a = Array2::from_shape_fn((6, 6), |(r, c)| ((r * 7 + c * 3) % 11) as f64 / 11.0);
        let b = Array2::from_shape_fn((6, 6), |(r, c)| ((r * 5 + c) % 13) as f64 / 13.0);
        let combined = bank_of(2.0 * &a + 3.0 * &b);
        let (ba, bb) = (bank_of(a), bank_of(b));
        for i in 0..5 {
            let expect = 2.0 * &ba[i].pixels + 3.0 * &bb[i].pixels;
            let err = (&combined[i].pixels - &expect)
                .iter()
                .map(|v| v.abs())
                .fold(0.0f64, f64::max);
            assert!(err < 1e-9);
        }
    }
}
