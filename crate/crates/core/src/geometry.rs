//! Image-space coordinates and the closed-form point-level shadow math.
//!
//! Pixel `(i, j)` has its center at the continuous coordinate `(i, j)`; the
//! origin is the upper-left corner of the image, `x` grows rightward and `y`
//! grows downward. A point with pixel height `h` has its footpoint at
//! `(x, y + h)`.

use thiserror::Error;

/// Default tolerance on `|H - h|` below which the light ray is treated as
/// parallel to the ground.
pub const DEFAULT_EPS_DEN: f64 = 1e-9;

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum GeometryError {
    #[error("light ray is parallel to the ground (|H - h| below tolerance)")]
    DegenerateRay,
    #[error("ray from the light through the point never meets the ground (h > H > 0)")]
    NoGroundIntersection,
    #[error("collinearity ratio along {axis} is undefined (zero denominator)")]
    UndefinedRatio { axis: Axis },
    #[error("light lies exactly on the horizon")]
    DegenerateLight,
    #[error("light pixel height must be non-zero and finite, got {0}")]
    InvalidLightHeight(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PixelCoord {
    pub x: f64,
    pub y: f64,
}

impl PixelCoord {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: PixelCoord) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn offset(self, dx: f64, dy: f64) -> Self {
        Self::new(self.x + dx, self.y + dy)
    }

    /// Index of the pixel whose center is nearest, rounding half up.
    pub fn nearest_pixel(self) -> (i64, i64) {
        ((self.x + 0.5).floor() as i64, (self.y + 0.5).floor() as i64)
    }
}

/// An object point together with its pixel height.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeightPixel {
    pub pos: PixelCoord,
    pub h: f64,
}

impl HeightPixel {
    pub const fn new(x: f64, y: f64, h: f64) -> Self {
        Self {
            pos: PixelCoord::new(x, y),
            h,
        }
    }

    pub fn footpoint(self) -> PixelCoord {
        PixelCoord::new(self.pos.x, self.pos.y + self.h)
    }
}

/// A point light in image space. `height` is the signed pixel height `H`
/// of the light; a negative value places the light behind the camera.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointLight {
    pub pos: PixelCoord,
    pub height: f64,
}

impl PointLight {
    pub fn new(x: f64, y: f64, height: f64) -> Result<Self, GeometryError> {
        if height == 0.0 || !height.is_finite() {
            return Err(GeometryError::InvalidLightHeight(height));
        }
        Ok(Self {
            pos: PixelCoord::new(x, y),
            height,
        })
    }

    pub fn footpoint(self) -> PixelCoord {
        PixelCoord::new(self.pos.x, self.pos.y + self.height)
    }

    /// Same light with its image position moved, keeping `H`.
    pub fn moved_to(self, pos: PixelCoord) -> Self {
        Self { pos, ..self }
    }
}

/// Image row of the horizon line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HorizonSpec {
    pub y: f64,
}

/// Ground shadow of `a` cast by `light`, with the default parallel-ray
/// tolerance.
pub fn project_shadow_point(a: HeightPixel, light: PointLight) -> Result<PixelCoord, GeometryError> {
    project_shadow_point_eps(a, light, DEFAULT_EPS_DEN)
}

/// Ground shadow of `a` cast by `light`.
///
/// Evaluated as `C = P + (A - P) * H / (H - h)`, which is the usual
/// `(H*A - h*P) / (H - h)` rearranged so that the result is exactly
/// translation equivariant for pixel-aligned inputs.
pub fn project_shadow_point_eps(a: HeightPixel, light: PointLight, eps_den: f64) -> Result<PixelCoord, GeometryError> {
    let big_h = light.height;
    let h = a.h;
    if h == 0.0 {
        return Ok(a.pos);
    }
    let den = big_h - h;
    if den.abs() < eps_den {
        return Err(GeometryError::DegenerateRay);
    }
    if h > big_h && big_h > 0.0 {
        return Err(GeometryError::NoGroundIntersection);
    }
    let scale = big_h / den;
    Ok(PixelCoord::new(
        light.pos.x + (a.pos.x - light.pos.x) * scale,
        light.pos.y + (a.pos.y - light.pos.y) * scale,
    ))
}

/// The two similar-triangle ratios `(x_c - x_a)/(x_c - x_p)` and
/// `(y_c - y_a)/(y_c - y_p)`. Both equal `h / H` when `c` is the true
/// shadow point of `a`.
pub fn collinearity_ratio(a: HeightPixel, light: PointLight, c: PixelCoord) -> Result<(f64, f64), GeometryError> {
    let dx = c.x - light.pos.x;
    let dy = c.y - light.pos.y;
    if dx == 0.0 {
        return Err(GeometryError::UndefinedRatio { axis: Axis::X });
    }
    if dy == 0.0 {
        return Err(GeometryError::UndefinedRatio { axis: Axis::Y });
    }
    Ok(((c.x - a.pos.x) / dx, (c.y - a.pos.y) / dy))
}

/// A light at infinity whose footpoint sits on the horizon: `H = Z - y_p`.
pub fn light_from_horizon(pos: PixelCoord, horizon: HorizonSpec) -> Result<PointLight, GeometryError> {
    if horizon.y == pos.y {
        return Err(GeometryError::DegenerateLight);
    }
    PointLight::new(pos.x, pos.y, horizon.y - pos.y)
}

/// Mirror of `a` across its footpoint, where a ground mirror shows it.
pub fn reflect_point(a: HeightPixel) -> PixelCoord {
    PixelCoord::new(a.pos.x, a.pos.y + 2.0 * a.h)
}
