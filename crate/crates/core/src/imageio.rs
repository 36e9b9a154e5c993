//! Loading, canonicalization and writing of grayscale image sets.
//!
//! Supported on-disk formats: 8/16-bit grayscale PNG and PGM, plus a raw
//! float grid (`.rawf32`: two little-endian `u32` for height and width,
//! followed by `height·width` little-endian `f32`, row-major). Loaded
//! intensities are divided by the format maximum (255 or 65535; raw floats
//! are clipped to `[0,1]`) and every image is resampled to a square
//! `target_size` grid with corner-aligned bilinear interpolation.

use std::fs;
use std::path::{Path, PathBuf};

use image::{DynamicImage, ImageReader};
use ndarray::Array2;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// A single canonicalized grayscale image: intensities in `[0,1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    /// Stable identifier, derived from the file stem.
    pub id: String,
    /// Row-major `(height, width)` grid.
    pub pixels: Array2<f64>,
}

impl Image {
    /// Builds an image, validating that every pixel is finite and in `[0,1]`.
    pub fn new(id: impl Into<String>, pixels: Array2<f64>) -> Result<Self> {
        let id = id.into();
        if pixels.iter().any(|p| !p.is_finite() || *p < 0.0 || *p > 1.0) {
            return Err(Error::NumericError(format!(
                "image '{id}' contains pixels outside [0,1]"
            )));
        }
        Ok(Self { id, pixels })
    }

    pub fn height(&self) -> usize {
        self.pixels.nrows()
    }

    pub fn width(&self) -> usize {
        self.pixels.ncols()
    }
}

/// An ordered set of images, sorted lexicographically by id.
#[derive(Debug, Clone)]
pub struct ImageSet {
    pub name: String,
    pub images: Vec<Image>,
}

impl ImageSet {
    /// Builds a set from unordered images: sorts by id and rejects duplicates.
    pub fn new(name: impl Into<String>, mut images: Vec<Image>) -> Result<Self> {
        images.sort_by(|a, b| a.id.cmp(&b.id));
        for pair in images.windows(2) {
            if pair[0].id == pair[1].id {
                return Err(Error::FileError {
                    path: PathBuf::from(&pair[1].id),
                    message: "duplicate image id".into(),
                });
            }
        }
        Ok(Self {
            name: name.into(),
            images,
        })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn ids(&self) -> Vec<String> {
        self.images.iter().map(|i| i.id.clone()).collect()
    }
}

fn supported_extension(path: &Path) -> bool {
    matches!(
        path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref(),
        Some("png" | "pgm" | "rawf32")
    )
}

/// Loads every supported file under `path` and canonicalizes to
/// `target_size × target_size`.
///
/// `bit_depth_hint` overrides the normalization divisor for integer formats
/// (divisor `2^bits − 1`), for containers that carry fewer significant bits
/// than their storage width.
pub fn load_image_set(
    path: impl AsRef<Path>,
    target_size: usize,
    bit_depth_hint: Option<u32>,
) -> Result<ImageSet> {
    let dir = path.as_ref();
    if target_size == 0 {
        return Err(Error::ParamError("target_size must be positive".into()));
    }
    let entries = fs::read_dir(dir).map_err(|e| Error::FileError {
        path: dir.to_path_buf(),
        message: e.to_string(),
    })?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && supported_extension(p))
        .collect();
    if files.is_empty() {
        return Err(Error::EmptyInput(format!(
            "no supported image files (.png/.pgm/.rawf32) in {}",
            dir.display()
        )));
    }
    // Sort before the parallel map so the work list itself is deterministic;
    // the set constructor re-sorts by id regardless.
    files.sort();

    let images: Vec<Image> = files
        .par_iter()
        .map(|f| load_image(f, target_size, bit_depth_hint))
        .collect::<Result<_>>()?;

    let name = dir
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| dir.display().to_string());
    ImageSet::new(name, images)
}

/// Loads and canonicalizes a single image file.
pub fn load_image(path: &Path, target_size: usize, bit_depth_hint: Option<u32>) -> Result<Image> {
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase)
        .unwrap_or_default();

    let grid = match ext.as_str() {
        "rawf32" => read_rawf32(path)?,
        "png" | "pgm" => read_integer_grayscale(path, bit_depth_hint)?,
        other => {
            return Err(Error::FileError {
                path: path.to_path_buf(),
                message: format!("unsupported extension '{other}'"),
            })
        }
    };

    Image::new(id, resize_bilinear(&grid, target_size, target_size))
}

fn read_integer_grayscale(path: &Path, bit_depth_hint: Option<u32>) -> Result<Array2<f64>> {
    let file_err = |message: String| Error::FileError {
        path: path.to_path_buf(),
        message,
    };
    let img = ImageReader::open(path)
        .map_err(|e| file_err(e.to_string()))?
        .decode()
        .map_err(|e| file_err(e.to_string()))?;

    let (w, h) = (img.width() as usize, img.height() as usize);
    let (buf16, native_bits): (Vec<u16>, u32) = match img {
        DynamicImage::ImageLuma8(b) => (b.into_raw().into_iter().map(u16::from).collect(), 8),
        DynamicImage::ImageLuma16(b) => (b.into_raw(), 16),
        other => {
            return Err(Error::ChannelError {
                path: path.to_path_buf(),
                channels: other.color().channel_count(),
            })
        }
    };
    let bits = bit_depth_hint.unwrap_or(native_bits);
    if bits == 0 || bits > 16 {
        return Err(Error::ParamError(format!(
            "bit_depth_hint must be in 1..=16, got {bits}"
        )));
    }
    let max = f64::from((1u32 << bits) - 1);

    let grid = Array2::from_shape_vec((h, w), buf16)
        .expect("decoded buffer length matches dimensions")
        .mapv(|v| (f64::from(v) / max).clamp(0.0, 1.0));
    Ok(grid)
}

fn read_rawf32(path: &Path) -> Result<Array2<f64>> {
    let file_err = |message: String| Error::FileError {
        path: path.to_path_buf(),
        message,
    };
    let bytes = fs::read(path).map_err(|e| file_err(e.to_string()))?;
    if bytes.len() < 8 {
        return Err(file_err("truncated header".into()));
    }
    let h = u32::from_le_bytes(bytes[0..4].try_into().unwrap()) as usize;
    let w = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    let expected = 8 + h * w * 4;
    if bytes.len() != expected {
        return Err(file_err(format!(
            "expected {expected} bytes for {h}x{w} grid, found {}",
            bytes.len()
        )));
    }
    let mut data = Vec::with_capacity(h * w);
    for chunk in bytes[8..].chunks_exact(4) {
        let v = f32::from_le_bytes(chunk.try_into().unwrap());
        if !v.is_finite() {
            return Err(file_err("non-finite pixel value".into()));
        }
        data.push(f64::from(v).clamp(0.0, 1.0));
    }
    Ok(Array2::from_shape_vec((h, w), data).expect("length checked above"))
}

/// Writes an image; the format is chosen by extension. PNG and PGM are
/// written as 16-bit (quantization error ≤ 1/65535); `.rawf32` round-trips
/// exactly (pixels already fit in f32 after loading).
pub fn write_image(img: &Image, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file_err = |message: String| Error::FileError {
        path: path.to_path_buf(),
        message,
    };
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase)
        .unwrap_or_default();
    let (h, w) = (img.height(), img.width());
    match ext.as_str() {
        "rawf32" => {
            let mut bytes = Vec::with_capacity(8 + h * w * 4);
            bytes.extend_from_slice(&(h as u32).to_le_bytes());
            bytes.extend_from_slice(&(w as u32).to_le_bytes());
            for p in img.pixels.iter() {
                bytes.extend_from_slice(&(*p as f32).to_le_bytes());
            }
            fs::write(path, bytes).map_err(|e| file_err(e.to_string()))
        }
        "png" | "pgm" => {
            let raw: Vec<u16> = img
                .pixels
                .iter()
                .map(|p| (p * 65535.0).round().clamp(0.0, 65535.0) as u16)
                .collect();
            let buf = image::ImageBuffer::<image::Luma<u16>, _>::from_raw(w as u32, h as u32, raw)
                .expect("buffer length matches dimensions");
            buf.save(path).map_err(|e| file_err(e.to_string()))
        }
        other => Err(file_err(format!("unsupported extension '{other}'"))),
    }
}

/// Corner-aligned bilinear resampling.
///
/// Output corners sample input corners exactly; interior coordinates scale by
/// `(in−1)/(out−1)`. A 1-pixel output dimension samples coordinate 0.
pub fn resize_bilinear(grid: &Array2<f64>, out_h: usize, out_w: usize) -> Array2<f64> {
    let (in_h, in_w) = grid.dim();
    if (in_h, in_w) == (out_h, out_w) {
        return grid.clone();
    }
    let scale = |out_n: usize, in_n: usize| -> f64 {
        if out_n > 1 {
            (in_n - 1) as f64 / (out_n - 1) as f64
        } else {
            0.0
        }
    };
    let sy = scale(out_h, in_h);
    let sx = scale(out_w, in_w);
    Array2::from_shape_fn((out_h, out_w), |(r, c)| {
        let y = r as f64 * sy;
        let x = c as f64 * sx;
        let y0 = (y.floor() as usize).min(in_h - 1);
        let x0 = (x.floor() as usize).min(in_w - 1);
        let y1 = (y0 + 1).min(in_h - 1);
        let x1 = (x0 + 1).min(in_w - 1);
        let fy = y - y0 as f64;
        let fx = x - x0 as f64;
        grid[(y0, x0)] * (1.0 - fy) * (1.0 - fx)
            + grid[(y0, x1)] * (1.0 - fy) * fx
            + grid[(y1, x0)] * fy * (1.0 - fx)
            + grid[(y1, x1)] * fy * fx
    })
}
