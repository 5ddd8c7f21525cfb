//! The object as a piecewise-linear sheet over its masked pixel centers.
//!
//! Cell `(i, j)` is the unit square with corners at pixel centers
//! `(i, j)`, `(i+1, j)`, `(i, j+1)`, `(i+1, j+1)`. A fully masked cell is
//! split along its `(i, j)`-`(i+1, j+1)` diagonal; a cell with exactly three
//! masked corners holds the one triangle they span.

use crate::heightmap::HeightMap;

/// Corner offsets within a cell.
pub(crate) const C00: (u32, u32) = (0, 0);
pub(crate) const C10: (u32, u32) = (1, 0);
pub(crate) const C01: (u32, u32) = (0, 1);
pub(crate) const C11: (u32, u32) = (1, 1);

/// Triangles of a cell given which corners are masked, as corner offsets.
pub(crate) fn cell_corner_triangles(m00: bool, m10: bool, m01: bool, m11: bool) -> [Option<[(u32, u32); 3]>; 2] {
    match (m00, m10, m01, m11) {
        (true, true, true, true) => [Some([C00, C10, C11]), Some([C00, C11, C01])],
        (true, true, true, false) => [Some([C00, C10, C01]), None],
        (true, true, false, true) => [Some([C00, C10, C11]), None],
        (true, false, true, true) => [Some([C00, C11, C01]), None],
        (false, true, true, true) => [Some([C10, C11, C01]), None],
        _ => [None, None],
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Triangle {
    pub vertices: [[f64; 2]; 3],
    origin_h: f64,
    grad: [f64; 2],
}

impl Triangle {
    fn new(vertices: [[f64; 2]; 3], heights: [f64; 3]) -> Self {
        let [a, b, c] = vertices;
        let (e1, e2) = ([b[0] - a[0], b[1] - a[1]], [c[0] - a[0], c[1] - a[1]]);
        let (d1, d2) = (heights[1] - heights[0], heights[2] - heights[0]);
        let det = e1[0] * e2[1] - e1[1] * e2[0];
        let grad = [(d1 * e2[1] - d2 * e1[1]) / det, (e1[0] * d2 - e2[0] * d1) / det];
        Self {
            vertices,
            origin_h: heights[0],
            grad,
        }
    }

    /// Linearly interpolated sheet height at image point `q`.
    pub fn height_at(&self, q: [f64; 2]) -> f64 {
        let a = self.vertices[0];
        self.origin_h + self.grad[0] * (q[0] - a[0]) + self.grad[1] * (q[1] - a[1])
    }
}

/// Side of the square blocks of cells that carry height bounds.
pub(crate) const BLOCK: u32 = 8;

pub(crate) struct Surface<'a> {
    obj: &'a HeightMap,
    /// Masked pixels that are a vertex of no triangle.
    isolated: Vec<bool>,
    any_isolated: bool,
    /// Per block of `BLOCK` x `BLOCK` cells, the range of its triangle
    /// vertex heights; empty ranges have `min > max`.
    block_range: Vec<(f32, f32)>,
    blocks_w: u32,
}

impl<'a> Surface<'a> {
    pub fn new(obj: &'a HeightMap) -> Self {
        let (w, h) = obj.dimensions();
        let mut isolated = obj.mask().to_vec();
        let blocks_w = w.div_ceil(BLOCK);
        let mut block_range = vec![(f32::INFINITY, f32::NEG_INFINITY); (blocks_w * h.div_ceil(BLOCK)) as usize];
        let (x0, y0, x1, y1) = obj.mask_bounds().unwrap_or((0, 0, 0, 0));
        for j in y0..y1.min(h.saturating_sub(1)) {
            for i in x0..x1.min(w.saturating_sub(1)) {
                let m = |(di, dj): (u32, u32)| obj.is_masked(i + di, j + dj);
                let range = &mut block_range[((j / BLOCK) * blocks_w + i / BLOCK) as usize];
                for tri in cell_corner_triangles(m(C00), m(C10), m(C01), m(C11))
                    .into_iter()
                    .flatten()
                {
                    for (di, dj) in tri {
                        let k = ((j + dj) * w + i + di) as usize;
                        isolated[k] = false;
                        range.0 = range.0.min(obj.heights()[k]);
                        range.1 = range.1.max(obj.heights()[k]);
                    }
                }
            }
        }
        let any_isolated = isolated.iter().any(|&b| b);
        Self {
            obj,
            isolated,
            any_isolated,
            block_range,
            blocks_w,
        }
    }

    pub fn obj(&self) -> &'a HeightMap {
        self.obj
    }

    /// Height range of the sheet over block `(bi, bj)`, if it has any.
    pub fn block_range(&self, bi: i64, bj: i64) -> Option<(f64, f64)> {
        let bh = self.block_range.len() as i64 / self.blocks_w.max(1) as i64;
        if bi < 0 || bj < 0 || bi >= self.blocks_w as i64 || bj >= bh {
            return None;
        }
        let (lo, hi) = self.block_range[(bj * self.blocks_w as i64 + bi) as usize];
        (lo <= hi).then_some((lo as f64, hi as f64))
    }

    pub fn has_isolated(&self) -> bool {
        self.any_isolated
    }

    pub fn is_isolated(&self, x: u32, y: u32) -> bool {
        self.isolated[(y * self.obj.width() + x) as usize]
    }

    /// Height of a masked pixel that is a vertex of some triangle.
    pub fn vertex_height(&self, x: i64, y: i64) -> Option<f64> {
        let (w, h) = self.obj.dimensions();
        if x < 0 || y < 0 || x >= w as i64 || y >= h as i64 || self.isolated[(y * w as i64 + x) as usize] {
            return None;
        }
        self.obj.get(x as u32, y as u32).map(f64::from)
    }

    pub fn isolated_height(&self, x: i64, y: i64) -> Option<f64> {
        let (w, h) = self.obj.dimensions();
        if x < 0 || y < 0 || x >= w as i64 || y >= h as i64 {
            return None;
        }
        if !self.isolated[(y * w as i64 + x) as usize] {
            return None;
        }
        self.obj.get(x as u32, y as u32).map(f64::from)
    }

    /// Height range of the masked corners of cell `(i, j)` when it holds
    /// at least one triangle.
    pub fn cell_range(&self, i: i64, j: i64) -> Option<(f64, f64)> {
        let (w, h) = self.obj.dimensions();
        if i < 0 || j < 0 || i + 1 >= w as i64 || j + 1 >= h as i64 {
            return None;
        }
        let (mut lo, mut hi, mut n) = (f32::INFINITY, f32::NEG_INFINITY, 0);
        for (di, dj) in [C00, C10, C01, C11] {
            if let Some(v) = self.obj.get(i as u32 + di, j as u32 + dj) {
                lo = lo.min(v);
                hi = hi.max(v);
                n += 1;
            }
        }
        (n >= 3).then_some((lo as f64, hi as f64))
    }

    pub fn cell_triangles(&self, i: i64, j: i64) -> [Option<Triangle>; 2] {
        let (w, h) = self.obj.dimensions();
        if i < 0 || j < 0 || i + 1 >= w as i64 || j + 1 >= h as i64 {
            return [None, None];
        }
        let (i, j) = (i as u32, j as u32);
        let m = |(di, dj): (u32, u32)| self.obj.is_masked(i + di, j + dj);
        cell_corner_triangles(m(C00), m(C10), m(C01), m(C11)).map(|tri| {
            tri.map(|corners| {
                let vertices = corners.map(|(di, dj)| [(i + di) as f64, (j + dj) as f64]);
                let heights = corners.map(|(di, dj)| self.obj.get(i + di, j + dj).unwrap_or(0.0) as f64);
                Triangle::new(vertices, heights)
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_through_vertices() {
        let t = Triangle::new([[2.0, 3.0], [3.0, 3.0], [3.0, 4.0]], [1.0, 5.0, -2.0]);
        for (v, h) in t.vertices.iter().zip([1.0, 5.0, -2.0]) {
            assert!((t.height_at(*v) - h).abs() < 1e-12);
        }
    }

    #[test]
    fn isolated_pixels() {
        let mut obj = HeightMap::from_fn(6, 6, |x, y| (x < 2 && y < 2).then_some(1.0));
        obj.set(4, 4, 3.0);
        obj.set(4, 0, 2.0);
        obj.set(5, 0, 2.0);
        let s = Surface::new(&obj);
        assert!(s.has_isolated());
        assert_eq!(s.isolated_height(4, 4), Some(3.0));
        assert_eq!(s.isolated_height(4, 0), Some(2.0));
        assert_eq!(s.isolated_height(0, 0), None);
        assert!(s.cell_triangles(0, 0).iter().all(Option::is_some));
        assert!(s.cell_triangles(3, 3).iter().all(Option::is_none));
        assert_eq!(s.block_range(0, 0), Some((1.0, 1.0)));
        assert_eq!(s.block_range(1, 0), None);
    }

    #[test]
    fn block_ranges_cover_their_cells() {
        let obj = HeightMap::from_fn(20, 12, |x, y| (x > 2).then(|| (x * 10 + y) as f32));
        let s = Surface::new(&obj);
        assert_eq!(s.block_range(0, 0), Some((30.0, 88.0)));
        assert_eq!(s.block_range(1, 0), Some((80.0, 168.0)));
        assert_eq!(s.block_range(2, 1), Some((168.0, 201.0)));
        assert_eq!(s.block_range(3, 0), None);
    }
}
