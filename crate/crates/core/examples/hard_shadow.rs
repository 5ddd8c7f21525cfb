//! Hard shadow of a standing ellipse on the ground, composited onto a
//! white background.
//!
//! `cargo run --example hard_shadow [out_dir]`

use std::path::PathBuf;

use image::{Rgb, RgbImage};
use pixel_height::composite::{composite_shadow, CompositeParams};
use pixel_height::geometry::PointLight;
use pixel_height::io;
use pixel_height::shadow::render_hard_planar;
use pixel_height::synthetic::{cutout_for, standing_ellipse};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(std::env::temp_dir);
    let obj = standing_ellipse(256, 256, 128.0, 140.0, 30.0, 80.0);
    let cutout = cutout_for(&obj);

    // A light up and to the left, in front of the camera...
    let front = PointLight::new(40.0, 20.0, 300.0)?;
    // ...and one behind the camera, which throws the shadow forward.
    let behind = PointLight::new(200.0, 30.0, -250.0)?;

    let bg = RgbImage::from_pixel(256, 256, Rgb([240, 236, 228]));
    for (name, light) in [("hard_front.png", front), ("hard_behind.png", behind)] {
        let shadow = render_hard_planar(&obj, light);
        let img = composite_shadow(&bg, &shadow, &cutout, &CompositeParams::default())?;
        let path = out.join(name);
        io::write_png(&io::encode_rgb_png(&img), &path)?;
        println!("{}: {} shadow pixels", path.display(), shadow.coverage());
    }
    Ok(())
}
