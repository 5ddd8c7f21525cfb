use rayon::prelude::*;
use thiserror::Error;

use crate::geometry::PixelCoord;
use crate::heightmap::HeightMap;
use crate::raster::{fill_triangle_rows, FillRule};

/// Vertices may dip this far below the ground plane.
pub const GROUND_EPS: f64 = 1e-6;
/// Camera-space depth below which geometry is clipped away.
pub const NEAR_PLANE: f64 = 1e-6;

const UP: [f64; 3] = [0.0, 1.0, 0.0];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeshError {
    #[error("mesh has no triangles")]
    NoTriangles,
    #[error("triangle {triangle} references vertex {index}, but there are {count}")]
    IndexOutOfRange {
        triangle: usize,
        index: usize,
        count: usize,
    },
    #[error("vertex {0} lies below the ground plane")]
    BelowGround(usize),
    #[error("vertex {0} has a non-finite coordinate")]
    NonFinite(usize),
    #[error("invalid camera: {0}")]
    InvalidCamera(&'static str),
    #[error("no mesh triangle is visible")]
    NothingVisible,
}

/// Triangle soup in world space: +Y is up and the ground is `Y = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    vertices: Vec<[f64; 3]>,
    triangles: Vec<[usize; 3]>,
}

impl Mesh {
    pub fn new(vertices: Vec<[f64; 3]>, triangles: Vec<[usize; 3]>) -> Result<Self, MeshError> {
        if triangles.is_empty() {
            return Err(MeshError::NoTriangles);
        }
        for (i, v) in vertices.iter().enumerate() {
            if !v.iter().all(|c| c.is_finite()) {
                return Err(MeshError::NonFinite(i));
            }
            if v[1] < -GROUND_EPS {
                return Err(MeshError::BelowGround(i));
            }
        }
        for (t, tri) in triangles.iter().enumerate() {
            if let Some(&index) = tri.iter().find(|&&i| i >= vertices.len()) {
                return Err(MeshError::IndexOutOfRange {
                    triangle: t,
                    index,
                    count: vertices.len(),
                });
            }
        }
        Ok(Self { vertices, triangles })
    }

    pub fn vertices(&self) -> &[[f64; 3]] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn translated(&self, d: [f64; 3]) -> Result<Self, MeshError> {
        Self::new(
            self.vertices
                .iter()
                .map(|v| [v[0] + d[0], v[1] + d[1], v[2] + d[2]])
                .collect(),
            self.triangles.clone(),
        )
    }
}

/// Upright pinhole camera. Pitch and yaw are free; roll is always zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Camera {
    position: [f64; 3],
    forward: [f64; 3],
    right: [f64; 3],
    down: [f64; 3],
    focal: f64,
    principal: PixelCoord,
    width: u32,
    height: u32,
}

impl Camera {
    pub fn new(
        position: [f64; 3],
        forward: [f64; 3],
        focal: f64,
        principal: PixelCoord,
        width: u32,
        height: u32,
    ) -> Result<Self, MeshError> {
        if !position.iter().all(|c| c.is_finite()) || position[1] <= 0.0 {
            return Err(MeshError::InvalidCamera("position must be finite and above the ground"));
        }
        if !(focal.is_finite() && focal > 0.0) {
            return Err(MeshError::InvalidCamera("focal length must be positive"));
        }
        if !(principal.x.is_finite() && principal.y.is_finite()) {
            return Err(MeshError::InvalidCamera("principal point must be finite"));
        }
        let forward = normalize(forward).ok_or(MeshError::InvalidCamera("forward must be a non-zero vector"))?;
        let right = normalize(cross(UP, forward)).ok_or(MeshError::InvalidCamera("forward must not be vertical"))?;
        let down = cross(right, forward);
        Ok(Self {
            position,
            forward,
            right,
            down,
            focal,
            principal,
            width,
            height,
        })
    }

    pub fn dimensions(&self) -> (u32, u32) {
        (self.width, self.height)
    }

    /// Camera-space coordinates `(right, down, depth)`.
    fn camera_coords(&self, w: [f64; 3]) -> [f64; 3] {
        let d = sub(w, self.position);
        [dot(d, self.right), dot(d, self.down), dot(d, self.forward)]
    }

    fn project_camera(&self, c: [f64; 3]) -> [f64; 2] {
        [
            self.principal.x + self.focal * c[0] / c[2],
            self.principal.y + self.focal * c[1] / c[2],
        ]
    }

    /// Image position of a world point in front of the camera.
    pub fn project(&self, w: [f64; 3]) -> Option<PixelCoord> {
        let c = self.camera_coords(w);
        (c[2] > NEAR_PLANE).then(|| {
            let p = self.project_camera(c);
            PixelCoord::new(p[0], p[1])
        })
    }

    /// Camera-space direction through the image point `(u, v)`, with unit depth.
    fn ray(&self, u: f64, v: f64) -> [f64; 3] {
        [
            (u - self.principal.x) / self.focal,
            (v - self.principal.y) / self.focal,
            1.0,
        ]
    }

    fn world_coords(&self, c: [f64; 3]) -> [f64; 3] {
        std::array::from_fn(|k| self.position[k] + c[0] * self.right[k] + c[1] * self.down[k] + c[2] * self.forward[k])
    }
}

/// A visible triangle in camera space with its image projection.
struct Clipped {
    cam: [[f64; 3]; 3],
    img: [[f64; 2]; 3],
    normal: [f64; 3],
}

fn clip_near(tri: [[f64; 3]; 3]) -> Vec<[[f64; 3]; 3]> {
    let mut poly: Vec<[f64; 3]> = Vec::with_capacity(4);
    for k in 0..3 {
        let (a, b) = (tri[k], tri[(k + 1) % 3]);
        let (ina, inb) = (a[2] >= NEAR_PLANE, b[2] >= NEAR_PLANE);
        if ina {
            poly.push(a);
        }
        if ina != inb {
            let t = (NEAR_PLANE - a[2]) / (b[2] - a[2]);
            poly.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), NEAR_PLANE]);
        }
    }
    (1..poly.len().saturating_sub(1))
        .map(|k| [poly[0], poly[k], poly[k + 1]])
        .collect()
}

/// Pixel heights of a mesh seen through `cam`.
///
/// The mesh is z-buffered at image resolution without culling. For every
/// covered pixel the visible world point `W` is recovered exactly by
/// intersecting the pixel's ray with its triangle, and the height is the
/// image-row distance between `W` and its ground footpoint `(W.x, 0, W.z)`.
/// Pixels whose footpoint falls behind the camera are left uncovered.
pub fn height_from_mesh(mesh: &Mesh, cam: &Camera) -> Result<HeightMap, MeshError> {
    let (w, h) = cam.dimensions();
    let pixels: Vec<Option<f32>> = visible_points(mesh, cam)
        .into_par_iter()
        .enumerate()
        .map(|(i, wp)| {
            let foot = cam.project([wp?[0], 0.0, wp?[2]])?;
            Some((foot.y - (i / w as usize) as f64).max(0.0) as f32)
        })
        .collect();
    if pixels.iter().all(Option::is_none) {
        return Err(MeshError::NothingVisible);
    }
    let mask = pixels.iter().map(Option::is_some).collect();
    let values = pixels.into_iter().map(|p| p.unwrap_or(0.0)).collect();
    Ok(HeightMap::from_parts(w, h, mask, values).expect("mesh heights are finite and non-negative"))
}

/// World point seen at each pixel, row-major.
pub(crate) fn visible_points(mesh: &Mesh, cam: &Camera) -> Vec<Option<[f64; 3]>> {
    let (w, h) = cam.dimensions();
    let tris: Vec<Clipped> = mesh
        .triangles
        .iter()
        .flat_map(|t| clip_near(t.map(|i| cam.camera_coords(mesh.vertices[i]))))
        .filter_map(|cam_tri| {
            let normal = cross(sub(cam_tri[1], cam_tri[0]), sub(cam_tri[2], cam_tri[0]));
            if dot(normal, normal) == 0.0 {
                return None;
            }
            Some(Clipped {
                cam: cam_tri,
                img: cam_tri.map(|c| cam.project_camera(c)),
                normal,
            })
        })
        .collect();

    let bands = rayon::current_num_threads().max(1) as u32 * 4;
    let band_h = h.div_ceil(bands).max(1);
    let wu = w as usize;

    (0..h.div_ceil(band_h))
        .into_par_iter()
        .flat_map_iter(|b| {
            let rows = b * band_h..((b + 1) * band_h).min(h);
            let mut depth = vec![f64::INFINITY; wu * rows.len()];
            let mut world = vec![[0.0; 3]; wu * rows.len()];
            for t in &tris {
                fill_triangle_rows(t.img, FillRule::TopLeft, (0, 0), w, rows.clone(), |x, y| {
                    let dir = cam.ray(x as f64, y as f64);
                    let denom = dot(t.normal, dir);
                    if denom == 0.0 {
                        return;
                    }
                    let s = dot(t.normal, t.cam[0]) / denom;
                    if s.is_nan() || s <= 0.0 {
                        return;
                    }
                    let i = (y - rows.start) as usize * wu + x as usize;
                    if s < depth[i] {
                        depth[i] = s;
                        world[i] = cam.world_coords([dir[0] * s, dir[1] * s, s]);
                    }
                });
            }
            depth
                .into_iter()
                .zip(world)
                .map(|(d, wp)| d.is_finite().then_some(wp))
                .collect::<Vec<_>>()
        })
        .collect()
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn normalize(a: [f64; 3]) -> Option<[f64; 3]> {
    let n = dot(a, a).sqrt();
    (n.is_finite() && n > 0.0).then(|| [a[0] / n, a[1] / n, a[2] / n])
}
