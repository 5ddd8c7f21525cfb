use image::{Rgba, RgbaImage};

use super::{check_dims, ShadowError};
use crate::geometry::{reflect_point, HeightPixel};
use crate::heightmap::HeightMap;

/// Ground-mirror reflection of the cutout.
///
/// Each masked pixel's color is copied to its mirror position across its
/// footpoint. When several pixels land on one target the one with the
/// smallest pixel height wins; equal heights keep the first in row-major
/// order. Covered pixels get alpha 255, everything else is transparent.
pub fn render_reflection(obj: &HeightMap, cutout: &RgbaImage) -> Result<RgbaImage, ShadowError> {
    let (w, h) = obj.dimensions();
    check_dims((w, h), cutout.dimensions())?;

    let mut best = vec![f32::INFINITY; w as usize * h as usize];
    let mut out = RgbaImage::new(w, h);
    for (x, y, hv) in obj.iter_masked() {
        let (tx, ty) = reflect_point(HeightPixel::new(x as f64, y as f64, hv as f64)).nearest_pixel();
        if tx < 0 || ty < 0 || tx >= w as i64 || ty >= h as i64 {
            continue;
        }
        let i = ty as usize * w as usize + tx as usize;
        if hv < best[i] {
            best[i] = hv;
            let [r, g, b, _] = cutout.get_pixel(x, y).0;
            out.put_pixel(tx as u32, ty as u32, Rgba([r, g, b, 255]));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_pixel_mirrors_below_footpoint() {
        let mut obj = HeightMap::empty(512, 512);
        obj.set(300, 200, 100.0);
        let mut cut = RgbaImage::new(512, 512);
        cut.put_pixel(300, 200, Rgba([10, 20, 30, 255]));
        let r = render_reflection(&obj, &cut).unwrap();
        assert_eq!(r.get_pixel(300, 400).0, [10, 20, 30, 255]);
        assert_eq!(r.pixels().filter(|p| p.0[3] != 0).count(), 1);
    }

    #[test]
    fn ground_object_reflects_onto_itself() {
        let obj = HeightMap::from_fn(16, 16, |x, y| (x + y < 10).then_some(0.0));
        let cut = RgbaImage::from_fn(16, 16, |x, y| Rgba([x as u8, y as u8, 7, 255]));
        let r = render_reflection(&obj, &cut).unwrap();
        for (x, y, p) in r.enumerate_pixels() {
            if obj.is_masked(x, y) {
                assert_eq!(p.0, [x as u8, y as u8, 7, 255]);
            } else {
                assert_eq!(p.0[3], 0);
            }
        }
    }

    #[test]
    fn lowest_source_wins() {
        // (5, 60) with h=10 and (5, 0) with h=40 both land on row 80.
        for order in [[(5u32, 60u32, 10.0f32), (5, 0, 40.0)], [(5, 0, 40.0), (5, 60, 10.0)]] {
            let mut obj = HeightMap::empty(10, 100);
            let mut cut = RgbaImage::new(10, 100);
            for (x, y, h) in order {
                obj.set(x, y, h);
                cut.put_pixel(x, y, Rgba([h as u8, 0, 0, 255]));
            }
            let r = render_reflection(&obj, &cut).unwrap();
            assert_eq!(r.get_pixel(5, 80).0, [10, 0, 0, 255]);
        }
    }

    #[test]
    fn mismatched_cutout() {
        assert!(render_reflection(&HeightMap::empty(4, 4), &RgbaImage::new(4, 3)).is_err());
    }
}
