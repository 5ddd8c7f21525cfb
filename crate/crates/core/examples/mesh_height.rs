//! Pixel heights of a rendered 3D box seen through a pinhole camera, and
//! the shadow they cast.
//!
//! `cargo run --release --example mesh_height [out_dir]`

use std::path::PathBuf;

use pixel_height::acquire::{height_from_mesh, Camera, Mesh};
use pixel_height::geometry::{PixelCoord, PointLight};
use pixel_height::io;
use pixel_height::shadow::render_hard_planar;

/// Axis-aligned box standing on the ground plane y = 0.
fn cuboid(x: [f64; 2], y: f64, z: [f64; 2]) -> Result<Mesh, pixel_height::acquire::MeshError> {
    let mut v = Vec::new();
    for &yy in &[0.0, y] {
        for &zz in &z {
            for &xx in &x {
                v.push([xx, yy, zz]);
            }
        }
    }
    // Corner index: x bit 0, z bit 1, y bit 2.
    let quads = [
        [0, 1, 3, 2],
        [4, 5, 7, 6],
        [0, 1, 5, 4],
        [2, 3, 7, 6],
        [0, 2, 6, 4],
        [1, 3, 7, 5],
    ];
    let f = quads.iter().flat_map(|&[a, b, c, d]| [[a, b, c], [a, c, d]]).collect();
    Mesh::new(v, f)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(std::env::temp_dir);
    let mesh = cuboid([-0.6, 0.4], 1.2, [4.0, 5.0])?;
    // Camera 1.5 units up, looking slightly down.
    let cam = Camera::new(
        [0.0, 1.5, 0.0],
        [0.0, -0.2, 1.0],
        400.0,
        PixelCoord::new(256.0, 256.0),
        512,
        512,
    )?;
    let map = height_from_mesh(&mesh, &cam)?;
    println!(
        "{} pixels covered, heights {:.1}..{:.1}",
        map.masked_count(),
        map.min_height().unwrap_or(0.0),
        map.max_height().unwrap_or(0.0)
    );

    io::write_phm(&map, out.join("box.phm"))?;
    io::export_height_png(&map, out.join("box_height.png"))?;
    let shadow = render_hard_planar(&map, PointLight::new(80.0, 60.0, 600.0)?);
    io::write_png(&io::encode_shadow_png(&shadow), out.join("box_shadow.png"))?;
    println!("written to {}", out.display());
    Ok(())
}
