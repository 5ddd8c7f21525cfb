//! Compositing shadows and reflections under a cutout onto a background.

use image::{Rgb, RgbImage, RgbaImage};
use thiserror::Error;

use crate::shadow::ShadowMap;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CompositeError {
    #[error("dimension mismatch: background {background:?}, layer {layer:?}")]
    DimensionMismatch { background: (u32, u32), layer: (u32, u32) },
    #[error("{0} must lie in [0, 1]")]
    OutOfRange(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositeParams {
    pub shadow_opacity: f64,
    /// RGB in `[0, 1]`.
    pub shadow_color: [f64; 3],
    pub reflection_opacity: f64,
}

impl Default for CompositeParams {
    fn default() -> Self {
        Self {
            shadow_opacity: 0.6,
            shadow_color: [0.0; 3],
            reflection_opacity: 0.3,
        }
    }
}

impl CompositeParams {
    pub fn validate(&self) -> Result<(), CompositeError> {
        let unit = |v: f64| (0.0..=1.0).contains(&v);
        if !unit(self.shadow_opacity) {
            return Err(CompositeError::OutOfRange("shadow opacity"));
        }
        if !self.shadow_color.iter().all(|&c| unit(c)) {
            return Err(CompositeError::OutOfRange("shadow color"));
        }
        if !unit(self.reflection_opacity) {
            return Err(CompositeError::OutOfRange("reflection opacity"));
        }
        Ok(())
    }
}

fn check(bg: &RgbImage, layer: (u32, u32)) -> Result<(), CompositeError> {
    if bg.dimensions() != layer {
        return Err(CompositeError::DimensionMismatch {
            background: bg.dimensions(),
            layer,
        });
    }
    Ok(())
}

fn to_u8(v: f64) -> u8 {
    v.round().clamp(0.0, 255.0) as u8
}

fn blend(base: [f64; 3], over: [f64; 3], a: f64) -> [f64; 3] {
    [0, 1, 2].map(|k| base[k] * (1.0 - a) + over[k] * a)
}

/// Draws `cutout` over `layer(x, y, background)` and rounds to 8 bits.
fn compose(bg: &RgbImage, cutout: &RgbaImage, mut layer: impl FnMut(u32, u32, [f64; 3]) -> [f64; 3]) -> RgbImage {
    RgbImage::from_fn(bg.width(), bg.height(), |x, y| {
        let b = bg.get_pixel(x, y).0.map(f64::from);
        let under = layer(x, y, b);
        let c = cutout.get_pixel(x, y).0;
        let alpha = c[3] as f64 / 255.0;
        let out = blend(under, [c[0], c[1], c[2]].map(f64::from), alpha);
        Rgb(out.map(to_u8))
    })
}

/// Darkens `bg` toward the shadow color by `opacity * v`, then draws the
/// cutout on top.
pub fn composite_shadow(
    bg: &RgbImage,
    shadow: &ShadowMap,
    cutout: &RgbaImage,
    p: &CompositeParams,
) -> Result<RgbImage, CompositeError> {
    p.validate()?;
    check(bg, shadow.dimensions())?;
    check(bg, cutout.dimensions())?;
    let color = p.shadow_color.map(|c| c * 255.0);
    Ok(compose(bg, cutout, |x, y, b| {
        blend(b, color, p.shadow_opacity * shadow.get(x, y) as f64)
    }))
}

/// Blends the reflection image over `bg` at `reflection_opacity` times its
/// alpha, then draws the cutout on top.
pub fn composite_reflection(
    bg: &RgbImage,
    reflection: &RgbaImage,
    cutout: &RgbaImage,
    p: &CompositeParams,
) -> Result<RgbImage, CompositeError> {
    p.validate()?;
    check(bg, reflection.dimensions())?;
    check(bg, cutout.dimensions())?;
    Ok(compose(bg, cutout, |x, y, b| {
        let r = reflection.get_pixel(x, y).0;
        blend(
            b,
            [r[0], r[1], r[2]].map(f64::from),
            p.reflection_opacity * r[3] as f64 / 255.0,
        )
    }))
}
