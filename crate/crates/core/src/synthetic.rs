//! Deterministic synthetic texture corpora for tests and benchmarks.
//!
//! Two visually distinct families: `Smooth` images are sums of a few random
//! low-frequency waves; `Grain` images are high-frequency pixel noise with a
//! per-image intensity window. Every image is a pure function of
//! `(family, index, seed, size)`.

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::imageio::{Image, ImageSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TextureFamily {
    Smooth,
    Grain,
}

impl TextureFamily {
    fn label(self) -> &'static str {
        match self {
            TextureFamily::Smooth => "smooth",
            TextureFamily::Grain => "grain",
        }
    }

    fn tag(self) -> u64 {
        match self {
            TextureFamily::Smooth => 0x51,
            TextureFamily::Grain => 0xA7,
        }
    }
}

pub fn texture_image(family: TextureFamily, index: u64, seed: u64, size: usize) -> Image {
    let mut rng = ChaCha8Rng::seed_from_u64(
        seed ^ family.tag().wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03),
    );
    let pixels = match family {
        TextureFamily::Smooth => smooth(&mut rng, size),
        TextureFamily::Grain => grain(&mut rng, size),
    };
    Image::new(format!("{}{index:05}", family.label()), pixels).expect("generated pixels in range")
}

pub fn texture_set(
    family: TextureFamily,
    count: usize,
    seed: u64,
    size: usize,
    name: &str,
) -> ImageSet {
    let images = (0..count as u64)
        .map(|i| texture_image(family, i, seed, size))
        .collect();
    ImageSet::new(name, images).expect("generated ids are unique")
}

fn smooth(rng: &mut ChaCha8Rng, size: usize) -> Array2<f64> {
    const WAVES: usize = 4;
    let mut params = Vec::with_capacity(WAVES);
    let mut amp_total = 0.0;
    for _ in 0..WAVES {
        let fx = 0.5 + 2.5 * rng.random::<f64>();
        let fy = 0.5 + 2.5 * rng.random::<f64>();
        let phase = std::f64::consts::TAU * rng.random::<f64>();
        let amp = 0.5 + 0.5 * rng.random::<f64>();
        amp_total += amp;
        params.push((fx, fy, phase, amp));
    }
    Array2::from_shape_fn((size, size), |(r, c)| {
        let x = c as f64 / size as f64;
        let y = r as f64 / size as f64;
        let mut v = 0.0;
        for &(fx, fy, phase, amp) in &params {
            v += amp * (std::f64::consts::TAU * (fx * x + fy * y) + phase).cos();
        }
        (0.5 + 0.5 * v / amp_total).clamp(0.0, 1.0)
    })
}

fn grain(rng: &mut ChaCha8Rng, size: usize) -> Array2<f64> {
    let offset = 0.2 * rng.random::<f64>();
    let amp = 0.7 + 0.3 * rng.random::<f64>();
    Array2::from_shape_fn((size, size), |_| {
        (offset + amp * rng.random::<f64>()).clamp(0.0, 1.0)
    })
}
