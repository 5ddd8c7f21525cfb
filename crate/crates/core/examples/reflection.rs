//! Ground reflection of a cutout, composited at reduced opacity.
//!
//! `cargo run --example reflection [out_dir]`

use std::path::PathBuf;

use image::{Rgb, RgbImage};
use pixel_height::composite::{composite_reflection, CompositeParams};
use pixel_height::io;
use pixel_height::shadow::render_reflection;
use pixel_height::synthetic::{cutout_for, standing_ellipse};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(std::env::temp_dir);
    let obj = standing_ellipse(200, 300, 100.0, 110.0, 30.0, 70.0);
    let cutout = cutout_for(&obj);
    let layer = render_reflection(&obj, &cutout)?;

    let bg = RgbImage::from_fn(200, 300, |_, y| Rgb([90, 110, (120 + y / 3) as u8]));
    let params = CompositeParams {
        reflection_opacity: 0.4,
        ..CompositeParams::default()
    };
    let img = composite_reflection(&bg, &layer, &cutout, &params)?;
    let path = out.join("reflection.png");
    io::write_png(&io::encode_rgb_png(&img), &path)?;
    println!("{}", path.display());
    Ok(())
}
