//! Triangle coverage on the pixel-center grid.

/// Which pixel centers lying exactly on a triangle edge are covered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FillRule {
    /// Only top and left edges, so triangles sharing an edge never cover
    /// the same pixel twice.
    TopLeft,
    /// Every edge and vertex.
    Closed,
}

/// Calls `visit(x, y)` for every image pixel whose center lies inside the
/// triangle `tri`, clipped to a `width` x `height` image.
///
/// Vertex coordinates are relative to `origin`: pixel `(x, y)` has its
/// center at `(x - origin.0, y - origin.1)`. Working relative to an integer
/// origin makes coverage exactly invariant to integer translations of the
/// whole scene.
pub fn fill_triangle(
    tri: [[f64; 2]; 3],
    rule: FillRule,
    origin: (i64, i64),
    width: u32,
    height: u32,
    visit: impl FnMut(u32, u32),
) {
    fill_triangle_rows(tri, rule, origin, width, 0..height, visit)
}

/// Like [`fill_triangle`] but only visits image rows in `rows`.
pub fn fill_triangle_rows(
    tri: [[f64; 2]; 3],
    rule: FillRule,
    origin: (i64, i64),
    width: u32,
    rows: std::ops::Range<u32>,
    mut visit: impl FnMut(u32, u32),
) {
    let [mut a, mut b, c] = tri;
    let mut area = edge(a, b, c);
    if !area.is_finite() || area == 0.0 {
        return;
    }
    if area < 0.0 {
        std::mem::swap(&mut a, &mut b);
        area = -area;
    }
    debug_assert!(area > 0.0);

    let min_x = a[0].min(b[0]).min(c[0]);
    let max_x = a[0].max(b[0]).max(c[0]);
    let min_y = a[1].min(b[1]).min(c[1]);
    let max_y = a[1].max(b[1]).max(c[1]);

    let x_lo = (min_x.ceil() as i64 + origin.0).max(0);
    let x_hi = (max_x.floor() as i64 + origin.0).min(width as i64 - 1);
    let y_lo = (min_y.ceil() as i64 + origin.1).max(rows.start as i64);
    let y_hi = (max_y.floor() as i64 + origin.1).min(rows.end as i64 - 1);
    if x_lo > x_hi || y_lo > y_hi {
        return;
    }

    let edges = [(a, b), (b, c), (c, a)];
    let bias = edges.map(|(p, q)| rule == FillRule::Closed || is_top_left(p, q));

    for y in y_lo..=y_hi {
        let py = (y - origin.1) as f64;
        for x in x_lo..=x_hi {
            let p = [(x - origin.0) as f64, py];
            let inside = edges.iter().zip(bias).all(|(&(s, t), tl)| {
                let e = edge(s, t, p);
                e > 0.0 || (e == 0.0 && tl)
            });
            if inside {
                visit(x as u32, y as u32);
            }
        }
    }
}

/// Signed area term; positive when `p` is on the interior side of `a -> b`
/// for a positively oriented triangle (y axis pointing down).
#[inline]
fn edge(a: [f64; 2], b: [f64; 2], p: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
}

#[inline]
fn is_top_left(a: [f64; 2], b: [f64; 2]) -> bool {
    let dx = b[0] - a[0];
    let dy = b[1] - a[1];
    (dy == 0.0 && dx > 0.0) || dy < 0.0
}
