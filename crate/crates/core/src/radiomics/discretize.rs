//! Fixed-bin-count gray-level discretization.

use ndarray::Array2;

/// A grid quantized to integer gray levels `1..=bin_count`.
#[derive(Debug, Clone)]
pub struct DiscretizedImage {
    pub levels: Array2<u32>,
    /// Number of distinct levels actually present.
    pub ng: u32,
    pub bin_count: u32,
}

/// Quantizes with the grid's own min/max:
/// `level(p) = min(⌊(p − min)/(max − min) · bins⌋ + 1, bins)`;
/// a constant grid maps entirely to level 1.
pub fn discretize(grid: &Array2<f64>, bin_count: u32) -> DiscretizedImage {
    assert!(bin_count >= 2, "bin_count must be ≥ 2");
    let min = grid.iter().copied().fold(f64::INFINITY, f64::min);
    let max = grid.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let levels = if max > min {
        let scale = bin_count as f64 / (max - min);
        grid.mapv(|p| (((p - min) * scale).floor() as u32 + 1).min(bin_count))
    } else {
        Array2::from_elem(grid.dim(), 1)
    };
    let mut seen = vec![false; bin_count as usize + 1];
    for &l in levels.iter() {
        seen[l as usize] = true;
    }
    let ng = seen.iter().filter(|s| **s).count() as u32;
    DiscretizedImage {
        levels,
        ng,
        bin_count,
    }
}

impl DiscretizedImage {
    /// Histogram over levels; index 0 unused.
    pub fn histogram(&self) -> Vec<u64> {
        let mut h = vec![0u64; self.bin_count as usize + 1];
        for &l in self.levels.iter() {
            h[l as usize] += 1;
        }
        h
    }

    pub fn pixel_count(&self) -> usize {
        self.levels.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_grid_maps_to_level_one() {
        let d = discretize(&Array2::from_elem((4, 4), 0.3), 32);
        assert!(d.levels.iter().all(|&l| l == 1));
        assert_eq!(d.ng, 1);
    }

    #[test]
    fn three_values_two_bins() {
        let grid = Array2::from_shape_vec((1, 3), vec![0.0, 0.5, 1.0]).unwrap();
        let d = discretize(&grid, 2);
        assert_eq!(d.levels.as_slice().unwrap(), &[1, 2, 2]);
        assert_eq!(d.ng, 2);
    }

    #[test]
    fn max_value_clamps_into_top_bin() {
        let grid = Array2::from_shape_vec((1, 4), vec![0.0, 0.25, 0.75, 1.0]).unwrap();
        let d = discretize(&grid, 4);
        assert_eq!(d.levels.as_slice().unwrap(), &[1, 2, 4, 4]);
    }
}
