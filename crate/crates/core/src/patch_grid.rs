//! Screenshots and the regular patch grids laid over them.
//!
//! A screenshot of `H x W` pixels tokenized with an effective patch edge `c`
//! yields `floor(H / c) x floor(W / c)` patch nodes. Pixels past the last
//! full patch row or column are dropped. Each node is represented by the
//! per-channel mean of its `c x c` block.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default vision-encoder patch edge in pixels.
pub const DEFAULT_BASE_PATCH: u32 = 14;
/// Default spatial merge factor applied on top of the base patch.
pub const DEFAULT_MERGE_FACTOR: u32 = 2;

/// An 8-bit RGB screenshot stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Screenshot {
    width: u32,
    height: u32,
    pixels: Vec<u8>,
    source_id: String,
}

impl Screenshot {
    pub fn new(width: u32, height: u32, pixels: Vec<u8>, source_id: impl Into<String>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::MalformedImage(format!(
                "image dimensions must be non-zero, got {width}x{height}"
            )));
        }
        let expected = width as usize * height as usize * 3;
        if pixels.len() != expected {
            return Err(Error::MalformedImage(format!(
                "pixel buffer holds {} bytes, {width}x{height} RGB needs {expected}",
                pixels.len()
            )));
        }
        Ok(Self {
            width,
            height,
            pixels,
            source_id: source_id.into(),
        })
    }

    /// Fills a screenshot with a single color.
    pub fn solid(width: u32, height: u32, rgb: [u8; 3]) -> Result<Self> {
        let pixels = rgb
            .iter()
            .copied()
            .cycle()
            .take(width as usize * height as usize * 3)
            .collect();
        Self::new(width, height, pixels, format!("solid-{width}x{height}"))
    }

    /// Decodes an encoded image (PNG). Alpha is dropped.
    pub fn decode(bytes: &[u8], source_id: impl Into<String>) -> Result<Self> {
        let img = image::load_from_memory(bytes)?.to_rgb8();
        let (w, h) = img.dimensions();
        Self::new(w, h, img.into_raw(), source_id)
    }

    /// Loads a PNG from disk. The path becomes the source id.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::decode(&bytes, path.display().to_string())
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn source_id(&self) -> &str {
        &self.source_id
    }

    pub fn pixel(&self, x: u32, y: u32) -> [u8; 3] {
        let i = (y as usize * self.width as usize + x as usize) * 3;
        [self.pixels[i], self.pixels[i + 1], self.pixels[i + 2]]
    }
}

/// A `grid_h x grid_w` lattice of patch nodes with mean-RGB representatives.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatchGrid {
    pub grid_h: usize,
    pub grid_w: usize,
    pub patch_size: u32,
    /// Row-major representatives, one `[r, g, b]` per node.
    pub representatives: Vec<[f64; 3]>,
    #[serde(default)]
    pub source_id: String,
}

impl PatchGrid {
    /// Builds a grid directly from representatives, e.g. for synthetic tests.
    pub fn from_representatives(
        grid_h: usize,
        grid_w: usize,
        patch_size: u32,
        representatives: Vec<[f64; 3]>,
    ) -> Result<Self> {
        if grid_h == 0 || grid_w == 0 {
            return Err(Error::InvalidParameter(format!(
                "grid must be non-empty, got {grid_h}x{grid_w}"
            )));
        }
        if representatives.len() != grid_h * grid_w {
            return Err(Error::LengthMismatch {
                expected: grid_h * grid_w,
                actual: representatives.len(),
            });
        }
        if let Some(bad) = representatives
            .iter()
            .flatten()
            .find(|v| !(0.0..=255.0).contains(*v))
        {
            return Err(Error::InvalidParameter(format!(
                "representative channel {bad} outside [0, 255]"
            )));
        }
        Ok(Self {
            grid_h,
            grid_w,
            patch_size,
            representatives,
            source_id: String::new(),
        })
    }

    pub fn token_count(&self) -> usize {
        token_count(self)
    }

    #[inline]
    pub fn node(&self, row: usize, col: usize) -> [f64; 3] {
        self.representatives[row * self.grid_w + col]
    }
}

/// Grid dimensions `(grid_h, grid_w)` for an image tokenized with edge `patch`.
pub fn grid_shape(width: u32, height: u32, patch: u32) -> Result<(usize, usize)> {
    if patch == 0 {
        return Err(Error::InvalidParameter("patch size must be at least 1".into()));
    }
    if patch > width || patch > height {
        return Err(Error::ZeroDimension {
            patch,
            width,
            height,
        });
    }
    Ok(((height / patch) as usize, (width / patch) as usize))
}

/// Divides `shot` into patches of edge `base_patch * merge_factor`.
pub fn build_grid(shot: &Screenshot, base_patch: u32, merge_factor: u32) -> Result<PatchGrid> {
    if base_patch == 0 || merge_factor == 0 {
        return Err(Error::InvalidParameter(format!(
            "base patch and merge factor must be at least 1, got {base_patch} and {merge_factor}"
        )));
    }
    let c = base_patch.checked_mul(merge_factor).ok_or_else(|| {
        Error::InvalidParameter("effective patch size overflows".into())
    })?;
    let (grid_h, grid_w) = grid_shape(shot.width, shot.height, c)?;

    // Column sums, one pixel row at a time in memory order.
    let width = shot.width as usize;
    let c = c as usize;
    let mut sums = vec![[0u64; 3]; grid_h * grid_w];
    for y in 0..grid_h * c {
        let row = &shot.pixels[y * width * 3..(y * width + grid_w * c) * 3];
        let base = (y / c) * grid_w;
        for (x, px) in row.chunks_exact(3).enumerate() {
            let acc = &mut sums[base + x / c];
            acc[0] += px[0] as u64;
            acc[1] += px[1] as u64;
            acc[2] += px[2] as u64;
        }
    }

    let area = (c * c) as f64;
    let representatives = sums
        .into_iter()
        .map(|s| [s[0] as f64 / area, s[1] as f64 / area, s[2] as f64 / area])
        .collect();

    Ok(PatchGrid {
        grid_h,
        grid_w,
        patch_size: c as u32,
        representatives,
        source_id: shot.source_id.clone(),
    })
}

/// Number of visual tokens the grid produces.
pub fn token_count(grid: &PatchGrid) -> usize {
    grid.grid_h * grid.grid_w
}
