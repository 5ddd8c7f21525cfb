//! Procedural objects and lights for demos, tests and benchmarks.

use image::{Rgba, RgbaImage};
use rand::Rng;

use crate::geometry::PointLight;
use crate::heightmap::HeightMap;

/// A vertical bar of width `x0..=x1` standing on row `base`, reaching up to
/// row `top`. Heights grow linearly from zero at the base.
pub fn bar(width: u32, height: u32, x0: u32, x1: u32, top: u32, base: u32) -> HeightMap {
    HeightMap::from_fn(width, height, |x, y| {
        ((x0..=x1).contains(&x) && (top..=base).contains(&y)).then(|| (base - y) as f32)
    })
}

/// An upright ellipse of semi-axes `(rx, ry)` centered at `(cx, cy)` whose
/// heights rise from zero at its lowest row.
pub fn standing_ellipse(width: u32, height: u32, cx: f64, cy: f64, rx: f64, ry: f64) -> HeightMap {
    let base = cy + ry;
    HeightMap::from_fn(width, height, |x, y| {
        let (dx, dy) = ((x as f64 - cx) / rx, (y as f64 - cy) / ry);
        (dx * dx + dy * dy <= 1.0).then(|| (base - y as f64).max(0.0) as f32)
    })
}

/// A random upright blob on a `size` x `size` canvas: an ellipse whose
/// heights rise from its lowest row with a random slope and a sinusoidal
/// ripple, clamped at zero.
pub fn random_blob(rng: &mut impl Rng, size: u32) -> HeightMap {
    let n = size as f64;
    let cx = rng.random_range(0.375..0.625) * n;
    let cy = rng.random_range(0.375..0.625) * n;
    let rx = rng.random_range(0.05..0.16) * n;
    let ry = rng.random_range(0.075..0.22) * n;
    let slope = rng.random_range(0.5..1.5);
    let bump = rng.random_range(0.0..6.0);
    let freq = rng.random_range(0.1..0.4);
    let base = cy + ry;
    HeightMap::from_fn(size, size, |x, y| {
        let (dx, dy) = ((x as f64 - cx) / rx, (y as f64 - cy) / ry);
        if dx * dx + dy * dy > 1.0 {
            return None;
        }
        Some(((base - y as f64) * slope + bump * (freq * x as f64).sin()).max(0.0) as f32)
    })
}

/// A random light for `obj`: equally likely in front of or behind the
/// camera, at 1.5 to 4 times the object's height in front or 0.5 to 4 times
/// behind, anywhere in a margin around the canvas.
pub fn random_light(rng: &mut impl Rng, obj: &HeightMap) -> PointLight {
    let hmax = obj.max_height().unwrap_or(1.0).max(1.0) as f64;
    let n = obj.width().max(obj.height()) as f64;
    let height = if rng.random_bool(0.5) {
        -rng.random_range(0.5..4.0) * hmax
    } else {
        rng.random_range(1.5..4.0) * hmax
    };
    let x = rng.random_range(-0.25..1.25) * n;
    let y = rng.random_range(-0.375..1.25) * n;
    PointLight::new(x, y, height).expect("non-zero light height")
}

/// The 512x512 timing scene: a tall ellipse lit from the upper left.
pub fn benchmark_scene() -> (HeightMap, PointLight) {
    let obj = standing_ellipse(512, 512, 256.0, 300.0, 70.0, 160.0);
    (obj, PointLight::new(120.0, 40.0, 700.0).expect("valid light"))
}

/// An opaque cutout of the object's mask with a vertical color gradient.
pub fn cutout_for(obj: &HeightMap) -> RgbaImage {
    let (w, h) = obj.dimensions();
    RgbaImage::from_fn(w, h, |x, y| {
        if obj.is_masked(x, y) {
            let t = (255 * y / h.max(1)) as u8;
            Rgba([220, 120u8.saturating_add(t / 2), 40 + t / 3, 255])
        } else {
            Rgba([0; 4])
        }
    })
}
