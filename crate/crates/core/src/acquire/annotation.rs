use rayon::prelude::*;
use spade::{DelaunayTriangulation, FloatTriangulation, HasPosition, HierarchyHintGenerator, Point2, Triangulation};
use thiserror::Error;

use crate::geometry::PixelCoord;
use crate::heightmap::HeightMap;

/// Feet further than this from vertical below their point trigger a warning.
pub const MAX_FOOT_SKEW: f64 = 2.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnnotationError {
    #[error("annotation has no samples")]
    EmptyAnnotation,
    #[error("sample {index} has its foot above the point")]
    NegativeHeightSample { index: usize },
    #[error("sample {index} has a non-finite coordinate")]
    NonFinite { index: usize },
    #[error("mask has {got} entries, expected {width}x{height}")]
    MaskSize { width: u32, height: u32, got: usize },
}

/// An annotated object point and its footpoint on the ground.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnotationSample {
    pub point: PixelCoord,
    pub foot: PixelCoord,
}

impl AnnotationSample {
    pub fn new(x: f64, y: f64, foot_x: f64, foot_y: f64) -> Self {
        Self {
            point: PixelCoord::new(x, y),
            foot: PixelCoord::new(foot_x, foot_y),
        }
    }

    pub fn height(&self) -> f64 {
        self.foot.y - self.point.y
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SparseAnnotation {
    width: u32,
    height: u32,
    mask: Vec<bool>,
    samples: Vec<AnnotationSample>,
}

impl SparseAnnotation {
    pub fn new(
        width: u32,
        height: u32,
        mask: Vec<bool>,
        samples: Vec<AnnotationSample>,
    ) -> Result<Self, AnnotationError> {
        if mask.len() != width as usize * height as usize {
            return Err(AnnotationError::MaskSize {
                width,
                height,
                got: mask.len(),
            });
        }
        for (index, s) in samples.iter().enumerate() {
            if ![s.point.x, s.point.y, s.foot.x, s.foot.y].iter().all(|v| v.is_finite()) {
                return Err(AnnotationError::NonFinite { index });
            }
            if s.height() < 0.0 {
                return Err(AnnotationError::NegativeHeightSample { index });
            }
            if (s.foot.x - s.point.x).abs() > MAX_FOOT_SKEW {
                log::warn!(
                    "sample {index}: foot is {:.2} px off vertical",
                    (s.foot.x - s.point.x).abs()
                );
            }
        }
        Ok(Self {
            width,
            height,
            mask,
            samples,
        })
    }

    pub fn dimensions(&self) -> (u32, u32) {
        (self.width, self.height)
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn samples(&self) -> &[AnnotationSample] {
        &self.samples
    }
}

#[derive(Debug, Clone, Copy)]
struct Site {
    pos: Point2<f64>,
    h: f64,
}

impl HasPosition for Site {
    type Scalar = f64;

    fn position(&self) -> Point2<f64> {
        self.pos
    }
}

type Delaunay = DelaunayTriangulation<Site, (), (), (), HierarchyHintGenerator<f64>>;

enum Interpolant {
    Constant(f64),
    /// Sites sorted by their coordinate along `dir`.
    Line {
        origin: [f64; 2],
        dir: [f64; 2],
        t: Vec<f64>,
        h: Vec<f64>,
    },
    Planar {
        tri: Box<Delaunay>,
        sites: Vec<Site>,
    },
}

impl Interpolant {
    fn build(sites: Vec<Site>) -> Self {
        if sites.len() == 1 {
            return Interpolant::Constant(sites[0].h);
        }
        let mut tri = Delaunay::new();
        for s in &sites {
            // Sites are finite and deduplicated, so insertion cannot fail.
            tri.insert(*s).expect("finite site");
        }
        if tri.num_inner_faces() > 0 {
            return Interpolant::Planar {
                tri: Box::new(tri),
                sites,
            };
        }

        // Collinear: parametrize along the line through the two extreme sites.
        let a = sites[0].pos;
        let b = sites[sites.len() - 1].pos;
        let len = ((b.x - a.x).powi(2) + (b.y - a.y).powi(2)).sqrt();
        let dir = [(b.x - a.x) / len, (b.y - a.y) / len];
        let mut along: Vec<(f64, f64)> = sites
            .iter()
            .map(|s| ((s.pos.x - a.x) * dir[0] + (s.pos.y - a.y) * dir[1], s.h))
            .collect();
        along.sort_by(|p, q| p.0.total_cmp(&q.0));
        Interpolant::Line {
            origin: [a.x, a.y],
            dir,
            t: along.iter().map(|p| p.0).collect(),
            h: along.iter().map(|p| p.1).collect(),
        }
    }

    fn eval(&self, q: [f64; 2], bary: Option<&spade::Barycentric<'_, Delaunay>>) -> f64 {
        match self {
            Interpolant::Constant(h) => *h,
            Interpolant::Line { origin, dir, t, h } => {
                let s = (q[0] - origin[0]) * dir[0] + (q[1] - origin[1]) * dir[1];
                let k = t.partition_point(|&ti| ti <= s);
                if k == 0 {
                    h[0]
                } else if k == t.len() {
                    h[t.len() - 1]
                } else {
                    let w = (s - t[k - 1]) / (t[k] - t[k - 1]);
                    h[k - 1] + w * (h[k] - h[k - 1])
                }
            }
            Interpolant::Planar { sites, .. } => {
                let p = Point2::new(q[0], q[1]);
                match bary.and_then(|b| b.interpolate(|v| v.data().h, p)) {
                    Some(h) => h,
                    None => nearest(sites, q),
                }
            }
        }
    }
}

/// Height of the closest site; the earliest site in sorted order wins ties.
fn nearest(sites: &[Site], q: [f64; 2]) -> f64 {
    let mut best = (f64::INFINITY, 0.0);
    for s in sites {
        let d = (s.pos.x - q[0]).powi(2) + (s.pos.y - q[1]).powi(2);
        if d < best.0 {
            best = (d, s.h);
        }
    }
    best.1
}

/// Dense height map over the annotation mask.
///
/// Heights are interpolated piecewise-linearly over a Delaunay triangulation
/// of the sample points and extended to the rest of the mask by the nearest
/// sample. One sample gives a constant map; collinear samples interpolate
/// along their line. Samples sharing a position keep the first one given.
/// The pixel nearest to each sample point takes that sample's height exactly.
pub fn interpolate_sparse(ann: &SparseAnnotation) -> Result<HeightMap, AnnotationError> {
    if ann.samples.is_empty() {
        return Err(AnnotationError::EmptyAnnotation);
    }
    let mut sites: Vec<Site> = ann
        .samples
        .iter()
        .map(|s| Site {
            pos: Point2::new(s.point.x, s.point.y),
            h: s.height(),
        })
        .collect();
    sites.sort_by(|a, b| a.pos.x.total_cmp(&b.pos.x).then(a.pos.y.total_cmp(&b.pos.y)));
    sites.dedup_by(|b, a| a.pos == b.pos);

    let interp = Interpolant::build(sites.clone());
    let (w, h) = (ann.width, ann.height);
    let wu = w as usize;

    let mut values: Vec<f32> = (0..h)
        .into_par_iter()
        .flat_map_iter(|y| {
            let interp = &interp;
            let mask = &ann.mask;
            let tri = match interp {
                Interpolant::Planar { tri, .. } => Some(tri.barycentric()),
                _ => None,
            };
            (0..w)
                .map(move |x| {
                    if mask[y as usize * wu + x as usize] {
                        interp.eval([x as f64, y as f64], tri.as_ref()).max(0.0) as f32
                    } else {
                        0.0
                    }
                })
                .collect::<Vec<_>>()
        })
        .collect();

    // Exact values at the sample sites regardless of sub-pixel placement.
    for s in sites.iter().rev() {
        let (px, py) = PixelCoord::new(s.pos.x, s.pos.y).nearest_pixel();
        if px >= 0 && py >= 0 && px < w as i64 && py < h as i64 {
            let i = py as usize * wu + px as usize;
            if ann.mask[i] {
                values[i] = s.h.max(0.0) as f32;
            }
        }
    }

    Ok(
        HeightMap::from_parts(w, h, ann.mask.clone(), values)
            .expect("interpolated heights are finite and non-negative"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn full(w: u32, h: u32, samples: Vec<AnnotationSample>) -> SparseAnnotation {
        SparseAnnotation::new(w, h, vec![true; (w * h) as usize], samples).unwrap()
    }

    #[test]
    fn barycentric_mean_at_centroid() {
        let ann = full(
            40,
            40,
            vec![
                AnnotationSample::new(0.0, 0.0, 0.0, 0.0),
                AnnotationSample::new(30.0, 0.0, 30.0, 60.0),
                AnnotationSample::new(0.0, 30.0, 0.0, 150.0),
            ],
        );
        let map = interpolate_sparse(&ann).unwrap();
        assert!((map.get(10, 10).unwrap() - 60.0).abs() < 1e-4);
    }

    #[test]
    fn two_samples_are_linear_and_clamped_at_the_ends() {
        let ann = full(
            30,
            5,
            vec![
                AnnotationSample::new(5.0, 2.0, 5.0, 2.0),
                AnnotationSample::new(25.0, 2.0, 25.0, 102.0),
            ],
        );
        let map = interpolate_sparse(&ann).unwrap();
        assert!((map.get(15, 2).unwrap() - 50.0).abs() < 1e-4);
        assert!((map.get(15, 4).unwrap() - 50.0).abs() < 1e-4);
        assert_eq!(map.get(0, 0), Some(0.0));
        assert_eq!(map.get(29, 0), Some(100.0));
    }

    #[test]
    fn one_sample_is_constant() {
        let ann = full(6, 6, vec![AnnotationSample::new(120.0, 80.0, 120.0, 180.0)]);
        let map = interpolate_sparse(&ann).unwrap();
        assert!(map.heights().iter().all(|&v| v == 100.0));
    }

    #[test]
    fn sample_height_is_exact_at_its_pixel() {
        let mut samples = vec![AnnotationSample::new(120.0, 80.0, 120.0, 180.0)];
        samples.push(AnnotationSample::new(10.0, 10.0, 10.0, 20.0));
        samples.push(AnnotationSample::new(150.0, 20.0, 151.0, 90.0));
        let map = interpolate_sparse(&full(160, 100, samples)).unwrap();
        assert_eq!(map.get(120, 80), Some(100.0));
        assert_eq!(map.get(150, 20), Some(70.0));
    }

    #[test]
    fn outside_hull_takes_nearest_sample() {
        let samples = vec![
            AnnotationSample::new(10.0, 10.0, 10.0, 20.0),
            AnnotationSample::new(20.0, 10.0, 20.0, 30.0),
            AnnotationSample::new(10.0, 20.0, 10.0, 40.0),
        ];
        let map = interpolate_sparse(&full(40, 40, samples)).unwrap();
        assert_eq!(map.get(39, 5), Some(20.0));
        assert_eq!(map.get(0, 39), Some(20.0));
    }

    #[test]
    fn masked_out_pixels_stay_empty() {
        let mask: Vec<bool> = (0..100).map(|i| i % 10 < 5).collect();
        let ann = SparseAnnotation::new(10, 10, mask.clone(), vec![AnnotationSample::new(1.0, 1.0, 1.0, 5.0)]).unwrap();
        let map = interpolate_sparse(&ann).unwrap();
        assert_eq!(map.mask(), &mask[..]);
        assert_eq!(map.get(7, 7), None);
    }

    #[test]
    fn errors() {
        assert_eq!(
            interpolate_sparse(&full(4, 4, vec![])).unwrap_err(),
            AnnotationError::EmptyAnnotation
        );
        assert_eq!(
            SparseAnnotation::new(4, 4, vec![true; 16], vec![AnnotationSample::new(1.0, 5.0, 1.0, 4.0)]).unwrap_err(),
            AnnotationError::NegativeHeightSample { index: 0 }
        );
        assert!(matches!(
            SparseAnnotation::new(4, 4, vec![true; 15], vec![]),
            Err(AnnotationError::MaskSize { .. })
        ));
    }

    #[test]
    fn duplicate_positions_keep_the_first() {
        let ann = full(
            8,
            8,
            vec![
                AnnotationSample::new(3.0, 3.0, 3.0, 7.0),
                AnnotationSample::new(3.0, 3.0, 3.0, 9.0),
            ],
        );
        let map = interpolate_sparse(&ann).unwrap();
        assert!(map.heights().iter().all(|&v| v == 4.0));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn reproduces_samples_at_integer_sites(
            pts in proptest::collection::btree_map((0u32..48, 0u32..48), 0u32..200, 1..24)
        ) {
            let samples: Vec<_> = pts
                .iter()
                .map(|(&(x, y), &h)| AnnotationSample::new(x as f64, y as f64, x as f64, (y + h) as f64))
                .collect();
            let map = interpolate_sparse(&full(48, 48, samples)).unwrap();
            for (&(x, y), &h) in &pts {
                prop_assert_eq!(map.get(x, y), Some(h as f32));
            }
            prop_assert!(map.validate().is_ok());
        }

        #[test]
        fn stays_within_sample_range(
            pts in proptest::collection::btree_map((0u32..32, 0u32..32), 0u32..100, 3..12)
        ) {
            let samples: Vec<_> = pts
                .iter()
                .map(|(&(x, y), &h)| AnnotationSample::new(x as f64, y as f64, x as f64, (y + h) as f64))
                .collect();
            let lo = *pts.values().min().unwrap() as f32;
            let hi = *pts.values().max().unwrap() as f32;
            let map = interpolate_sparse(&full(32, 32, samples)).unwrap();
            for &v in map.heights() {
                prop_assert!(v >= lo - 1e-3 && v <= hi + 1e-3);
            }
        }
    }
}
