use rayon::prelude::*;

use super::surface::{Surface, BLOCK};
use super::{check_dims, ReceiverMap, ShadowError, ShadowMap};
use crate::geometry::{PixelCoord, PointLight};
use crate::heightmap::HeightMap;

/// Image-space distance between consecutive samples when testing isolated
/// object pixels, in pixels.
pub const MARCH_STEP: f64 = 0.5;

/// Hard shadow of `obj` on an arbitrary receiver given by its own pixel
/// heights.
///
/// Each receiver pixel `R` with height `h_r` and the light are lifted to
/// `(x, y + h, h)`. The straight lifted segment between them projects to
/// the straight image segment from `R` to the light, with the ray height
/// varying linearly along it. For a light behind the camera (`H < 0`) the
/// occluders lie on the extension of the segment beyond `R`, away from the
/// light's image.
///
/// The object is the same piecewise-linear sheet the planar renderer
/// splats: two triangles per 2x2 block of masked pixel centers. The march
/// walks the pixel cells the segment crosses and `R` is shadowed as soon as
/// the ray height crosses the sheet height inside a triangle. Masked pixels
/// that belong to no triangle are tested at samples every [`MARCH_STEP`]
/// pixels, hitting when the ray height is within
/// `max(1, per-step height change)` of theirs.
pub fn render_hard_generic(
    obj: &HeightMap,
    receiver: &ReceiverMap,
    light: PointLight,
) -> Result<ShadowMap, ShadowError> {
    render_generic_on(&Surface::new(obj), receiver, light)
}

pub(crate) fn render_generic_on(
    surface: &Surface,
    receiver: &ReceiverMap,
    light: PointLight,
) -> Result<ShadowMap, ShadowError> {
    let obj = surface.obj();
    let (w, h) = obj.dimensions();
    check_dims((w, h), receiver.dimensions())?;

    let (Some((bx0, by0, bx1, by1)), Some(h_min), Some(h_max)) =
        (obj.mask_bounds(), obj.min_height(), obj.max_height())
    else {
        return Ok(ShadowMap::zeros(w, h));
    };
    let marcher = Marcher {
        surface,
        light,
        // Isolated pixels are found by rounding to the nearest center, so
        // samples half a pixel outside the mask bounds still matter.
        bounds: [bx0 as f64 - 0.5, by0 as f64 - 0.5, bx1 as f64 + 0.5, by1 as f64 + 0.5],
        h_range: (h_min as f64, h_max as f64),
    };

    let wu = w as usize;
    let mut bits = vec![false; wu * h as usize];
    bits.par_chunks_mut(wu).enumerate().for_each(|(y, row)| {
        for (x, out) in row.iter_mut().enumerate() {
            let hr = receiver.get(x as u32, y as u32) as f64;
            *out = marcher.is_shadowed(PixelCoord::new(x as f64, y as f64), hr);
        }
    });
    Ok(ShadowMap::from_binary(w, h, bits))
}

struct Marcher<'a> {
    surface: &'a Surface<'a>,
    light: PointLight,
    bounds: [f64; 4],
    h_range: (f64, f64),
}

/// The march in terms of `s >= 0`: image point `origin + s * dir`, ray
/// height `h0 + s * dh`.
struct Ray {
    origin: [f64; 2],
    dir: [f64; 2],
    h0: f64,
    dh: f64,
}

impl Ray {
    fn at(&self, s: f64) -> [f64; 2] {
        [self.origin[0] + s * self.dir[0], self.origin[1] + s * self.dir[1]]
    }

    fn height(&self, s: f64) -> f64 {
        self.h0 + s * self.dh
    }
}

impl Marcher<'_> {
    fn is_shadowed(&self, r: PixelCoord, hr: f64) -> bool {
        let big_h = self.light.height;
        let dx = self.light.pos.x - r.x;
        let dy = self.light.pos.y - r.y;
        if dx == 0.0 && dy == 0.0 {
            return false;
        }
        let sign = if big_h > 0.0 { 1.0 } else { -1.0 };
        let ray = Ray {
            origin: [r.x, r.y],
            dir: [sign * dx, sign * dy],
            h0: hr,
            dh: sign * (big_h - hr),
        };

        let mut lo = 0.0f64;
        let mut hi = if big_h > 0.0 { 1.0 } else { f64::INFINITY };
        for axis in 0..2 {
            let (min, max) = (self.bounds[axis], self.bounds[axis + 2]);
            if !clip_linear(ray.origin[axis], ray.dir[axis], min, max, &mut lo, &mut hi) {
                return false;
            }
        }
        let step = MARCH_STEP / dx.hypot(dy);
        let eps = f64::max(1.0, (ray.dh * step).abs());
        let pad = if self.surface.has_isolated() { eps } else { 0.0 };
        if !clip_linear(
            ray.h0,
            ray.dh,
            self.h_range.0 - pad,
            self.h_range.1 + pad,
            &mut lo,
            &mut hi,
        ) {
            return false;
        }
        if !hi.is_finite() {
            return false;
        }

        // The ray may touch the sheet only at its start, on a vertex whose
        // triangles all lie behind it.
        let touches_start = lo == 0.0 && self.surface.vertex_height(r.x as i64, r.y as i64) == Some(hr);
        touches_start || self.crosses_sheet(&ray, lo, hi) || self.hits_isolated(&ray, lo, hi, step, eps)
    }

    /// Walks the blocks crossed by the ray on `[lo, hi]`, descending into
    /// those whose sheet height range meets the ray's heights there.
    fn crosses_sheet(&self, ray: &Ray, lo: f64, hi: f64) -> bool {
        let b = BLOCK as f64;
        let origin = [ray.origin[0] / b, ray.origin[1] / b];
        let dir = [ray.dir[0] / b, ray.dir[1] / b];
        walk_grid(origin, dir, lo, hi, |s0, s1, i, j| {
            self.surface.block_range(i, j).is_some_and(|(bmin, bmax)| {
                let (ha, hb) = (ray.height(s0), ray.height(s1));
                ha.max(hb) >= bmin && ha.min(hb) <= bmax && self.crosses_cells(ray, s0, s1)
            })
        })
    }

    /// Walks the cells crossed by the ray on `[lo, hi]` and checks every
    /// sheet triangle for a sign change of `sheet height - ray height`.
    fn crosses_cells(&self, ray: &Ray, lo: f64, hi: f64) -> bool {
        walk_grid(ray.origin, ray.dir, lo, hi, |s0, s1, i, j| {
            self.cell_crossed(ray, i, j, s0, s1)
        })
    }

    fn cell_crossed(&self, ray: &Ray, i: i64, j: i64, s0: f64, s1: f64) -> bool {
        let Some((cmin, cmax)) = self.surface.cell_range(i, j) else {
            return false;
        };
        let (ha, hb) = (ray.height(s0), ray.height(s1));
        if ha.max(hb) < cmin || ha.min(hb) > cmax {
            return false;
        }
        self.surface.cell_triangles(i, j).into_iter().flatten().any(|tri| {
            tri.clip_ray(ray, s0, s1).is_some_and(|(a, b)| {
                let fa = tri.height_at(ray.at(a)) - ray.height(a);
                let fb = tri.height_at(ray.at(b)) - ray.height(b);
                fa * fb <= 0.0
            })
        })
    }

    fn hits_isolated(&self, ray: &Ray, lo: f64, hi: f64, step: f64, eps: f64) -> bool {
        if !self.surface.has_isolated() {
            return false;
        }
        let k_lo = (lo / step).ceil().max(0.0) as u64;
        let k_hi = (hi / step).floor();
        if k_hi < k_lo as f64 {
            return false;
        }
        for k in k_lo..=k_hi as u64 {
            let s = k as f64 * step;
            let q = ray.at(s);
            let (px, py) = PixelCoord::new(q[0], q[1]).nearest_pixel();
            if let Some(ho) = self.surface.isolated_height(px, py) {
                if (ho - ray.height(s)).abs() <= eps {
                    return true;
                }
            }
        }
        false
    }
}

/// Visits the unit cells met by `origin + s * dir` for `s` in `[lo, hi]`
/// in order, as `visit(s0, s1, i, j)` with the span spent in cell `(i, j)`.
/// Stops as soon as `visit` returns true.
fn walk_grid(
    origin: [f64; 2],
    dir: [f64; 2],
    lo: f64,
    hi: f64,
    mut visit: impl FnMut(f64, f64, i64, i64) -> bool,
) -> bool {
    let mut xs = GridCrossings::new(origin[0], dir[0], lo, hi);
    let mut ys = GridCrossings::new(origin[1], dir[1], lo, hi);
    let mut s0 = lo;
    loop {
        let next = match (xs.peek(), ys.peek()) {
            (Some(a), Some(b)) if a <= b => xs.take(),
            (Some(_), Some(_)) => ys.take(),
            (Some(_), None) => xs.take(),
            (None, Some(_)) => ys.take(),
            (None, None) => hi,
        };
        let s1 = next.min(hi);
        if s1 >= s0 {
            let sm = 0.5 * (s0 + s1);
            let mid = [origin[0] + sm * dir[0], origin[1] + sm * dir[1]];
            let (ci, cj) = (mid[0].floor() as i64, mid[1].floor() as i64);
            // A ray running along a grid line touches the cells on both sides.
            let di = if mid[0] == ci as f64 { -1 } else { 0 };
            let dj = if mid[1] == cj as f64 { -1 } else { 0 };
            for i in ci + di..=ci {
                for j in cj + dj..=cj {
                    if visit(s0, s1, i, j) {
                        return true;
                    }
                }
            }
        }
        if s1 >= hi {
            return false;
        }
        s0 = s1;
    }
}

/// Parameters `s` in `(lo, hi)` where `origin + s * delta` crosses an
/// integer, in increasing order.
struct GridCrossings {
    origin: f64,
    delta: f64,
    next_line: f64,
    line_step: f64,
    hi: f64,
}

impl GridCrossings {
    fn new(origin: f64, delta: f64, lo: f64, hi: f64) -> Self {
        let start = origin + lo * delta;
        let (next_line, line_step) = if delta > 0.0 {
            (start.floor() + 1.0, 1.0)
        } else if delta < 0.0 {
            (start.ceil() - 1.0, -1.0)
        } else {
            (f64::NAN, 0.0)
        };
        Self {
            origin,
            delta,
            next_line,
            line_step,
            hi,
        }
    }

    fn peek(&self) -> Option<f64> {
        if self.line_step == 0.0 {
            return None;
        }
        let s = (self.next_line - self.origin) / self.delta;
        (s < self.hi).then_some(s)
    }

    fn take(&mut self) -> f64 {
        let s = (self.next_line - self.origin) / self.delta;
        self.next_line += self.line_step;
        s
    }
}

/// Narrows `[lo, hi]` to the `s` where `min <= origin + s * delta <= max`.
/// Returns `false` when the interval becomes empty.
fn clip_linear(origin: f64, delta: f64, min: f64, max: f64, lo: &mut f64, hi: &mut f64) -> bool {
    if delta == 0.0 {
        return origin >= min && origin <= max && lo <= hi;
    }
    let a = (min - origin) / delta;
    let b = (max - origin) / delta;
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    *lo = lo.max(a);
    *hi = hi.min(b);
    lo <= hi
}

impl super::surface::Triangle {
    /// Sub-interval of `[s0, s1]` where the ray's image point is inside the
    /// triangle (edges included).
    fn clip_ray(&self, ray: &Ray, s0: f64, s1: f64) -> Option<(f64, f64)> {
        let (mut lo, mut hi) = (s0, s1);
        let v = self.vertices;
        let orient = edge(v[0], v[1], v[2]).signum();
        for (a, b) in [(v[0], v[1]), (v[1], v[2]), (v[2], v[0])] {
            // orient * edge(a, b, q(s)) >= 0, linear in s.
            let c0 = orient * edge(a, b, ray.origin);
            let c1 = orient * ((b[0] - a[0]) * ray.dir[1] - (b[1] - a[1]) * ray.dir[0]);
            if c1 == 0.0 {
                if c0 < 0.0 {
                    return None;
                }
            } else if c1 > 0.0 {
                lo = lo.max(-c0 / c1);
            } else {
                hi = hi.min(-c0 / c1);
            }
            if lo > hi {
                return None;
            }
        }
        Some((lo, hi))
    }
}

#[inline]
fn edge(a: [f64; 2], b: [f64; 2], p: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{project_shadow_point, HeightPixel};
    use crate::shadow::render_hard_planar;

    fn light(x: f64, y: f64, h: f64) -> PointLight {
        PointLight::new(x, y, h).unwrap()
    }

    fn iou(a: &ShadowMap, b: &ShadowMap) -> f64 {
        let inter = a
            .values()
            .iter()
            .zip(b.values())
            .filter(|(p, q)| **p == 1.0 && **q == 1.0)
            .count();
        let union = a
            .values()
            .iter()
            .zip(b.values())
            .filter(|(p, q)| **p == 1.0 || **q == 1.0)
            .count();
        if union == 0 {
            1.0
        } else {
            inter as f64 / union as f64
        }
    }

    #[test]
    fn dimension_mismatch() {
        let obj = HeightMap::empty(4, 4);
        let rec = ReceiverMap::ground(4, 5);
        assert!(matches!(
            render_hard_generic(&obj, &rec, light(0.0, 0.0, 1.0)),
            Err(ShadowError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn lone_occluder_on_ground_and_on_raised_receiver() {
        let mut obj = HeightMap::empty(8, 8);
        obj.set(3, 2, 2.0);
        let l = light(0.0, 0.0, 4.0);

        let ground = render_hard_generic(&obj, &ReceiverMap::ground(8, 8), l).unwrap();
        assert_eq!(ground.get(6, 4), 1.0);

        // Lifted ray through A reaches height 1 at lifted (4.5, 4, 1), i.e.
        // image point (4.5, 3). A receiver raised to height 1 there is hit.
        let raised = ReceiverMap::from_fn(8, 8, |x, y| if y == 3 && (4..=5).contains(&x) { 1.0 } else { 0.0 }).unwrap();
        let s = render_hard_generic(&obj, &raised, l).unwrap();
        assert!(s.get(4, 3) == 1.0 || s.get(5, 3) == 1.0);
        assert_eq!(s.get(6, 4), 1.0);
    }

    #[test]
    fn high_light_shadows_near_footpoint() {
        let mut obj = HeightMap::empty(64, 64);
        obj.set(30, 20, 10.0);
        for big_h in [200.0, 1000.0, 5000.0] {
            // Lifted light (30, 30 - H + H, H) sits straight above the
            // occluder's lifted point (30, 30, 10).
            let l = light(30.0, 30.0 - big_h, big_h);
            let s = render_hard_generic(&obj, &ReceiverMap::ground(64, 64), l).unwrap();
            let c = project_shadow_point(HeightPixel::new(30.0, 20.0, 10.0), l).unwrap();
            assert!(c.distance(PixelCoord::new(30.0, 30.0)) < 1e-9);
            assert_eq!(s.get(30, 30), 1.0);
            for y in 0..64 {
                for x in 0..64 {
                    if s.get(x, y) == 1.0 {
                        assert!(
                            (x as f64 - c.x).abs() <= 1.0 && (y as f64 - c.y).abs() <= 2.5,
                            "({x},{y})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn matches_planar_on_a_bar() {
        let obj = HeightMap::from_fn(64, 64, |x, y| {
            ((28..=35).contains(&x) && (20..=44).contains(&y)).then(|| (44 - y) as f32)
        });
        for l in [light(10.0, 4.0, 80.0), light(50.0, 60.0, -40.0), light(20.0, 5.0, 60.0)] {
            let a = render_hard_planar(&obj, l);
            let b = render_hard_generic(&obj, &ReceiverMap::ground(64, 64), l).unwrap();
            assert!(iou(&a, &b) > 0.97, "iou {}", iou(&a, &b));
        }
    }

    #[test]
    fn raised_receiver_moves_shadow_only_where_raised() {
        let obj = HeightMap::from_fn(64, 64, |x, y| {
            ((10..=14).contains(&x) && (10..=30).contains(&y)).then(|| (30 - y) as f32)
        });
        let l = light(0.0, 0.0, 60.0);
        let ground = render_hard_generic(&obj, &ReceiverMap::ground(64, 64), l).unwrap();
        let wall = ReceiverMap::from_fn(64, 64, |x, _| if (18..=22).contains(&x) { 6.0 } else { 0.0 }).unwrap();
        let walled = render_hard_generic(&obj, &wall, l).unwrap();
        let mut changed = 0;
        for y in 0..64 {
            for x in 0..64 {
                if (18..=22).contains(&x) {
                    changed += (walled.get(x, y) != ground.get(x, y)) as usize;
                } else {
                    assert_eq!(walled.get(x, y), ground.get(x, y));
                }
            }
        }
        assert!(changed > 0);
        assert!((0..64).any(|y| (18..=22).any(|x| walled.get(x, y) == 1.0)));
    }
}
