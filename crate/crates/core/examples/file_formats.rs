//! Writes and reads back the on-disk formats: PHM height maps, the 16-bit
//! height preview, gray shadow PNGs and an annotation file.
//!
//! `cargo run --example file_formats [out_dir]`

use std::path::PathBuf;

use pixel_height::geometry::PointLight;
use pixel_height::io;
use pixel_height::shadow::render_hard_planar;
use pixel_height::synthetic::{cutout_for, standing_ellipse};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(std::env::temp_dir);
    let obj = standing_ellipse(128, 128, 64.0, 70.0, 16.0, 40.0);

    let phm = out.join("object.phm");
    io::write_phm(&obj, &phm)?;
    let back = io::read_phm(&phm)?;
    println!(
        "{}: {} bytes, round trip equal: {}",
        phm.display(),
        std::fs::metadata(&phm)?.len(),
        back == obj
    );
    io::export_height_png(&obj, out.join("object_height.png"))?;

    let cutout = out.join("object.png");
    io::write_png(&io::encode_rgba_png(&cutout_for(&obj)), &cutout)?;
    let (_, _, mask) = io::read_mask(&cutout)?;
    println!("mask from cutout alpha: {} px", mask.iter().filter(|&&m| m).count());

    let shadow = render_hard_planar(&obj, PointLight::new(10.0, 10.0, 200.0)?);
    let png = out.join("object_shadow.png");
    io::write_png(&io::encode_shadow_png(&shadow), &png)?;
    println!(
        "shadow PNG decodes identically: {}",
        io::read_shadow_png(&png)? == shadow
    );

    let ann = out.join("object_annotation.json");
    std::fs::write(
        &ann,
        r#"{"mask": "object.png", "points": [{"x": 64, "y": 35, "foot_x": 64, "foot_y": 109}]}"#,
    )?;
    let parsed = io::read_annotation(&ann)?;
    println!(
        "annotation: {} sample(s), height {}",
        parsed.samples().len(),
        parsed.samples()[0].height()
    );
    Ok(())
}
