//! Dense pixel heights from a handful of clicked (point, footpoint) pairs,
//! then a shadow from the result.
//!
//! `cargo run --example annotations [out_dir]`

use std::path::PathBuf;

use pixel_height::acquire::{interpolate_sparse, AnnotationSample, SparseAnnotation};
use pixel_height::geometry::PointLight;
use pixel_height::io;
use pixel_height::shadow::render_hard_planar;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(std::env::temp_dir);
    let (w, h) = (160, 160);
    // A leaning box: columns 50..110, rows 30..130.
    let mask: Vec<bool> = (0..w * h)
        .map(|i| (50..110).contains(&(i % w)) && (30..130).contains(&(i / w)))
        .collect();

    // Each sample is a point on the object and where it touches the
    // ground directly below; the height is their vertical distance.
    let samples = vec![
        AnnotationSample::new(50.0, 30.0, 50.0, 129.0),
        AnnotationSample::new(109.0, 30.0, 109.0, 120.0),
        AnnotationSample::new(50.0, 129.0, 50.0, 129.0),
        AnnotationSample::new(109.0, 129.0, 109.0, 129.0),
        AnnotationSample::new(80.0, 80.0, 80.0, 127.0),
    ];
    let ann = SparseAnnotation::new(w, h, mask, samples)?;
    let map = interpolate_sparse(&ann)?;
    for s in ann.samples() {
        let got = map.get(s.point.x as u32, s.point.y as u32).unwrap_or(f32::NAN);
        println!("sample ({}, {}) height {} -> {got}", s.point.x, s.point.y, s.height());
    }

    io::write_phm(&map, out.join("annotated.phm"))?;
    io::export_height_png(&map, out.join("annotated_height.png"))?;
    let shadow = render_hard_planar(&map, PointLight::new(0.0, 0.0, 250.0)?);
    io::write_png(&io::encode_shadow_png(&shadow), out.join("annotated_shadow.png"))?;
    println!("written to {}", out.display());
    Ok(())
}
