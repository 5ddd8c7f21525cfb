//! Hard shadows on planar and height-mapped receivers, and ground
//! reflections.

mod generic;
mod planar;
mod reflection;
pub(crate) mod surface;

pub(crate) use generic::render_generic_on;
pub use generic::{render_hard_generic, MARCH_STEP};
pub use planar::render_hard_planar;
pub(crate) use planar::render_planar_on;
pub use reflection::render_reflection;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ShadowError {
    #[error("dimension mismatch: expected {expected:?}, got {got:?}")]
    DimensionMismatch { expected: (u32, u32), got: (u32, u32) },
    #[error("invalid receiver height at ({x}, {y})")]
    InvalidReceiver { x: u32, y: u32 },
    #[error("buffer length {got} does not match {width}x{height}")]
    BufferSize { width: u32, height: u32, got: usize },
}

pub(crate) fn check_dims(expected: (u32, u32), got: (u32, u32)) -> Result<(), ShadowError> {
    if expected != got {
        return Err(ShadowError::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// Single-channel occlusion in `[0, 1]`; `1` means fully shadowed.
#[derive(Debug, Clone, PartialEq)]
pub struct ShadowMap {
    width: u32,
    height: u32,
    v: Vec<f32>,
}

impl ShadowMap {
    pub fn zeros(width: u32, height: u32) -> Self {
        Self {
            width,
            height,
            v: vec![0.0; width as usize * height as usize],
        }
    }

    pub fn from_values(width: u32, height: u32, v: Vec<f32>) -> Result<Self, ShadowError> {
        if v.len() != width as usize * height as usize {
            return Err(ShadowError::BufferSize {
                width,
                height,
                got: v.len(),
            });
        }
        Ok(Self {
            width,
            height,
            v: v.into_iter().map(|x| x.clamp(0.0, 1.0)).collect(),
        })
    }

    pub fn from_fn(width: u32, height: u32, mut f: impl FnMut(u32, u32) -> f32) -> Self {
        let mut v = Vec::with_capacity(width as usize * height as usize);
        for y in 0..height {
            for x in 0..width {
                v.push(f(x, y).clamp(0.0, 1.0));
            }
        }
        Self { width, height, v }
    }

    pub(crate) fn from_binary(width: u32, height: u32, bits: impl IntoIterator<Item = bool>) -> Self {
        let v: Vec<f32> = bits.into_iter().map(|b| if b { 1.0 } else { 0.0 }).collect();
        debug_assert_eq!(v.len(), width as usize * height as usize);
        Self { width, height, v }
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

    pub fn values(&self) -> &[f32] {
        &self.v
    }

    pub fn get(&self, x: u32, y: u32) -> f32 {
        self.v[y as usize * self.width as usize + x as usize]
    }

    pub fn is_binary(&self) -> bool {
        self.v.iter().all(|&x| x == 0.0 || x == 1.0)
    }

    /// Pixels with `v == 1`.
    pub fn umbra(&self) -> Vec<bool> {
        self.v.iter().map(|&x| x == 1.0).collect()
    }

    /// Number of pixels with `0.01 < v < 0.99`.
    pub fn penumbra_area(&self) -> usize {
        self.v.iter().filter(|&&x| x > 0.01 && x < 0.99).count()
    }

    /// Number of pixels with `v > 0`.
    pub fn coverage(&self) -> usize {
        self.v.iter().filter(|&&x| x > 0.0).count()
    }
}

/// Pixel heights of the surface receiving the shadow; zero is the ground.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceiverMap {
    width: u32,
    height: u32,
    h: Vec<f32>,
}

impl ReceiverMap {
    /// The flat ground plane.
    pub fn ground(width: u32, height: u32) -> Self {
        Self {
            width,
            height,
            h: vec![0.0; width as usize * height as usize],
        }
    }

    pub fn from_values(width: u32, height: u32, h: Vec<f32>) -> Result<Self, ShadowError> {
        if h.len() != width as usize * height as usize {
            return Err(ShadowError::BufferSize {
                width,
                height,
                got: h.len(),
            });
        }
        if let Some(i) = h.iter().position(|v| !v.is_finite() || *v < 0.0) {
            return Err(ShadowError::InvalidReceiver {
                x: (i % width as usize) as u32,
                y: (i / width as usize) as u32,
            });
        }
        Ok(Self { width, height, h })
    }

    pub fn from_fn(width: u32, height: u32, mut f: impl FnMut(u32, u32) -> f32) -> Result<Self, ShadowError> {
        let mut h = Vec::with_capacity(width as usize * height as usize);
        for y in 0..height {
            for x in 0..width {
                h.push(f(x, y));
            }
        }
        Self::from_values(width, height, h)
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

    pub fn values(&self) -> &[f32] {
        &self.h
    }

    pub fn get(&self, x: u32, y: u32) -> f32 {
        self.h[y as usize * self.width as usize + x as usize]
    }
}
