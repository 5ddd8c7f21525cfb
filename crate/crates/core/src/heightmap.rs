//! Dense per-pixel pixel-height maps over an object mask.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HeightMapError {
    #[error("buffer length {got} does not match {width}x{height}")]
    BufferSize { width: u32, height: u32, got: usize },
    #[error("height at ({x}, {y}) is not finite")]
    NonFinite { x: u32, y: u32 },
    #[error("height at ({x}, {y}) is negative ({value})")]
    Negative { x: u32, y: u32, value: f32 },
    #[error("offset {delta} would push the minimum height {min} below zero")]
    NegativeHeightResult { delta: f64, min: f64 },
    #[error("dimension mismatch: expected {expected:?}, got {got:?}")]
    DimensionMismatch { expected: (u32, u32), got: (u32, u32) },
}

/// Pixel heights (in pixels) over an object mask. Values outside the mask
/// are stored as zero and never read.
#[derive(Debug, Clone, PartialEq)]
pub struct HeightMap {
    width: u32,
    height: u32,
    mask: Vec<bool>,
    h: Vec<f32>,
}

impl HeightMap {
    /// A map with an empty mask.
    pub fn empty(width: u32, height: u32) -> Self {
        let n = width as usize * height as usize;
        Self {
            width,
            height,
            mask: vec![false; n],
            h: vec![0.0; n],
        }
    }

    /// Builds a map from a closure returning `Some(h)` for masked pixels.
    pub fn from_fn(width: u32, height: u32, mut f: impl FnMut(u32, u32) -> Option<f32>) -> Self {
        let mut map = Self::empty(width, height);
        for y in 0..height {
            for x in 0..width {
                if let Some(v) = f(x, y) {
                    map.set(x, y, v);
                }
            }
        }
        map
    }

    pub fn from_parts(width: u32, height: u32, mask: Vec<bool>, h: Vec<f32>) -> Result<Self, HeightMapError> {
        let n = width as usize * height as usize;
        for len in [mask.len(), h.len()] {
            if len != n {
                return Err(HeightMapError::BufferSize {
                    width,
                    height,
                    got: len,
                });
            }
        }
        let mut map = Self { width, height, mask, h };
        for (m, v) in map.mask.iter().zip(map.h.iter_mut()) {
            if !m {
                *v = 0.0;
            }
        }
        map.validate()?;
        Ok(map)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn dimensions(&self) -> (u32, u32) {
        (self.width, self.height)
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    /// Raw row-major heights; zero outside the mask.
    pub fn heights(&self) -> &[f32] {
        &self.h
    }

    #[inline]
    fn index(&self, x: u32, y: u32) -> usize {
        y as usize * self.width as usize + x as usize
    }

    #[inline]
    pub fn is_masked(&self, x: u32, y: u32) -> bool {
        self.mask[self.index(x, y)]
    }

    /// Height at a pixel, `None` outside the mask.
    #[inline]
    pub fn get(&self, x: u32, y: u32) -> Option<f32> {
        let i = self.index(x, y);
        self.mask[i].then(|| self.h[i])
    }

    /// Height at a possibly out-of-range pixel index.
    #[inline]
    pub fn get_signed(&self, x: i64, y: i64) -> Option<f32> {
        if x < 0 || y < 0 || x >= self.width as i64 || y >= self.height as i64 {
            return None;
        }
        self.get(x as u32, y as u32)
    }

    pub fn set(&mut self, x: u32, y: u32, value: f32) {
        let i = self.index(x, y);
        self.mask[i] = true;
        self.h[i] = value;
    }

    pub fn clear(&mut self, x: u32, y: u32) {
        let i = self.index(x, y);
        self.mask[i] = false;
        self.h[i] = 0.0;
    }

    /// Replaces the mask. Newly masked pixels get height zero.
    pub fn with_mask(mut self, mask: &[bool]) -> Result<Self, HeightMapError> {
        if mask.len() != self.mask.len() {
            return Err(HeightMapError::BufferSize {
                width: self.width,
                height: self.height,
                got: mask.len(),
            });
        }
        for ((m, v), &new) in self.mask.iter_mut().zip(self.h.iter_mut()).zip(mask) {
            if !new || !*m {
                *v = 0.0;
            }
            *m = new;
        }
        Ok(self)
    }

    pub fn masked_count(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    /// Iterates `(x, y, h)` over masked pixels in row-major order.
    pub fn iter_masked(&self) -> impl Iterator<Item = (u32, u32, f32)> + '_ {
        let w = self.width as usize;
        self.mask
            .iter()
            .zip(&self.h)
            .enumerate()
            .filter(|(_, (m, _))| **m)
            .map(move |(i, (_, &v))| ((i % w) as u32, (i / w) as u32, v))
    }

    pub fn max_height(&self) -> Option<f32> {
        self.iter_masked().map(|(_, _, v)| v).reduce(f32::max)
    }

    pub fn min_height(&self) -> Option<f32> {
        self.iter_masked().map(|(_, _, v)| v).reduce(f32::min)
    }

    /// Mean position of masked pixel centers.
    pub fn mask_centroid(&self) -> Option<(f64, f64)> {
        let (mut sx, mut sy, mut n) = (0.0f64, 0.0f64, 0usize);
        for (x, y, _) in self.iter_masked() {
            sx += x as f64;
            sy += y as f64;
            n += 1;
        }
        (n > 0).then(|| (sx / n as f64, sy / n as f64))
    }

    /// Inclusive pixel bounding box `(x0, y0, x1, y1)` of the mask.
    pub fn mask_bounds(&self) -> Option<(u32, u32, u32, u32)> {
        self.iter_masked().fold(None, |acc, (x, y, _)| {
            Some(match acc {
                None => (x, y, x, y),
                Some((x0, y0, x1, y1)) => (x0.min(x), y0.min(y), x1.max(x), y1.max(y)),
            })
        })
    }

    /// Checks the map invariants: finite, non-negative heights on the mask.
    pub fn validate(&self) -> Result<(), HeightMapError> {
        for (x, y, v) in self.iter_masked() {
            if !v.is_finite() {
                return Err(HeightMapError::NonFinite { x, y });
            }
            if v < 0.0 {
                return Err(HeightMapError::Negative { x, y, value: v });
            }
        }
        Ok(())
    }

    /// Every masked height multiplied by `k`.
    pub fn scaled(&self, k: f32) -> Self {
        let mut out = self.clone();
        for (m, v) in out.mask.iter().zip(out.h.iter_mut()) {
            if *m {
                *v *= k;
            }
        }
        out
    }
}

/// Raises (or lowers) the whole object by `delta` pixels, modelling a
/// floating object whose shadow detaches from it.
pub fn offset_height(map: &HeightMap, delta: f64) -> Result<HeightMap, HeightMapError> {
    let min = map.min_height().unwrap_or(0.0) as f64;
    if delta < -min {
        return Err(HeightMapError::NegativeHeightResult { delta, min });
    }
    let mut out = map.clone();
    for (m, v) in out.mask.iter().zip(out.h.iter_mut()) {
        if *m {
            *v = (*v as f64 + delta).max(0.0) as f32;
        }
    }
    Ok(out)
}
