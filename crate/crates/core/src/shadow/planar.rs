use std::sync::atomic::{AtomicBool, Ordering};

use rayon::prelude::*;

use super::surface::{cell_corner_triangles, Surface, C00, C01, C10, C11};
use super::ShadowMap;
use crate::geometry::{project_shadow_point, HeightPixel, PixelCoord, PointLight};
use crate::heightmap::HeightMap;
use crate::raster::{fill_triangle, FillRule};

/// Hard shadow of `obj` on the ground plane.
///
/// Every masked pixel center is projected to the ground. Each 2x2 block of
/// pixel centers contributes the sheet triangles spanned by its masked
/// corners; the projected triangles are filled edges included. A masked
/// pixel that is a corner of no triangle marks the pixel its projection
/// lands in. Points with no ground intersection
/// or a parallel ray contribute nothing. All positions are kept relative to
/// the pixel containing the light so that integer translations of the scene
/// translate the output exactly.
pub fn render_hard_planar(obj: &HeightMap, light: PointLight) -> ShadowMap {
    render_planar_on(&Surface::new(obj), light)
}

pub(crate) fn render_planar_on(surface: &Surface, light: PointLight) -> ShadowMap {
    let obj = surface.obj();
    let (w, h) = obj.dimensions();
    let Some((x0, y0, x1, y1)) = obj.mask_bounds() else {
        return ShadowMap::zeros(w, h);
    };
    let origin = (light.pos.x.floor() as i64, light.pos.y.floor() as i64);
    let rel_light = light.moved_to(PixelCoord::new(
        light.pos.x - origin.0 as f64,
        light.pos.y - origin.1 as f64,
    ));

    // Projections of the pixels in the mask's bounding box, row-major.
    let bw = (x1 - x0 + 1) as usize;
    let projected: Vec<Option<[f64; 2]>> = (y0..=y1)
        .into_par_iter()
        .flat_map_iter(|y| {
            (x0..=x1).map(move |x| {
                let hv = obj.get(x, y)?;
                let a = HeightPixel::new((x as i64 - origin.0) as f64, (y as i64 - origin.1) as f64, hv as f64);
                project_shadow_point(a, rel_light).ok().map(|c| [c.x, c.y])
            })
        })
        .collect();

    let wu = w as usize;
    let out: Vec<AtomicBool> = (0..wu * h as usize).map(|_| AtomicBool::new(false)).collect();
    let mark = |x: u32, y: u32| out[y as usize * wu + x as usize].store(true, Ordering::Relaxed);

    (y0..=y1).into_par_iter().for_each(|y| {
        for x in x0..=x1 {
            let i = (y - y0) as usize * bw + (x - x0) as usize;
            if let (true, Some(c)) = (surface.is_isolated(x, y), projected[i]) {
                let (px, py) = PixelCoord::new(c[0], c[1]).nearest_pixel();
                let (px, py) = (px + origin.0, py + origin.1);
                if px >= 0 && py >= 0 && px < w as i64 && py < h as i64 {
                    mark(px as u32, py as u32);
                }
            }
            if x + 1 > x1 || y + 1 > y1 {
                continue;
            }
            let corner = |(dx, dy): (u32, u32)| projected[i + dy as usize * bw + dx as usize];
            let masked = |c: (u32, u32)| obj.is_masked(x + c.0, y + c.1);
            let tris = cell_corner_triangles(masked(C00), masked(C10), masked(C01), masked(C11));
            for tri in tris.into_iter().flatten() {
                if let [Some(a), Some(b), Some(c)] = tri.map(corner) {
                    fill_triangle([a, b, c], FillRule::Closed, origin, w, h, mark);
                }
            }
        }
    });

    ShadowMap::from_binary(w, h, out.into_iter().map(AtomicBool::into_inner))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn light(x: f64, y: f64, h: f64) -> PointLight {
        PointLight::new(x, y, h).unwrap()
    }

    #[test]
    fn single_pixel_lands_on_projection() {
        let mut obj = HeightMap::empty(8, 8);
        obj.set(3, 2, 2.0);
        let s = render_hard_planar(&obj, light(0.0, 0.0, 4.0));
        assert_eq!(s.get(6, 4), 1.0);
        assert_eq!(s.coverage(), 1);
    }

    #[test]
    fn empty_mask_empty_shadow() {
        let s = render_hard_planar(&HeightMap::empty(16, 16), light(3.0, 3.0, 10.0));
        assert_eq!(s.coverage(), 0);
    }

    #[test]
    fn ground_object_is_its_own_shadow() {
        let obj = HeightMap::from_fn(32, 32, |x, y| {
            ((x as i32 - 12).pow(2) + (y as i32 - 20).pow(2) < 60).then_some(0.0)
        });
        for l in [light(3.5, -40.25, 90.0), light(31.0, 2.0, -15.0)] {
            let s = render_hard_planar(&obj, l);
            let bits: Vec<bool> = s.values().iter().map(|&v| v == 1.0).collect();
            assert_eq!(bits, obj.mask());
        }
    }

    #[test]
    fn too_high_pixels_cast_nothing() {
        let obj = HeightMap::from_fn(16, 16, |x, y| (x > 4 && x < 9 && y > 4 && y < 9).then_some(20.0));
        assert_eq!(render_hard_planar(&obj, light(2.0, 2.0, 10.0)).coverage(), 0);
        assert_eq!(render_hard_planar(&obj, light(2.0, 2.0, 20.0)).coverage(), 0);
    }

    #[test]
    fn output_is_binary_and_hole_free_for_a_bar() {
        // Vertical bar standing on row 40: h grows upward.
        let obj = HeightMap::from_fn(64, 64, |x, y| {
            ((30..=33).contains(&x) && (10..=40).contains(&y)).then(|| (40 - y) as f32)
        });
        let s = render_hard_planar(&obj, light(20.0, 5.0, 60.0));
        assert!(s.is_binary());
        // The shadow of the bar is a connected band along each column.
        for x in 0..64 {
            let rows: Vec<u32> = (0..64).filter(|&y| s.get(x, y) == 1.0).collect();
            if let (Some(&lo), Some(&hi)) = (rows.first(), rows.last()) {
                assert_eq!(rows.len() as u32, hi - lo + 1, "gap in column {x}");
            }
        }
    }
}
