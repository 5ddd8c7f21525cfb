//! A shadow running across the floor and up a back wall. A vertical wall
//! standing on the image row `base` has pixel height `base - y` above it.
//!
//! `cargo run --example generic_receiver [out_dir]`

use std::path::PathBuf;

use pixel_height::geometry::PointLight;
use pixel_height::io;
use pixel_height::shadow::{render_hard_generic, render_hard_planar, ReceiverMap};
use pixel_height::synthetic::standing_ellipse;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(std::env::temp_dir);
    let obj = standing_ellipse(256, 256, 110.0, 170.0, 18.0, 60.0);

    let base = 150;
    let wall = ReceiverMap::from_fn(256, 256, |_, y| if y < base { (base - y) as f32 } else { 0.0 })?;
    // In front of the object and to the right, so the shadow falls back
    // toward the wall.
    let light = PointLight::new(200.0, 120.0, 230.0)?;

    let on_ground = render_hard_planar(&obj, light);
    let with_wall = render_hard_generic(&obj, &wall, light)?;
    io::write_png(&io::encode_shadow_png(&on_ground), out.join("receiver_ground.png"))?;
    io::write_png(&io::encode_shadow_png(&with_wall), out.join("receiver_wall.png"))?;

    let on_wall = (0..base)
        .flat_map(|y| (0..256).map(move |x| (x, y)))
        .filter(|&(x, y)| with_wall.get(x, y) == 1.0)
        .count();
    println!(
        "ground only: {} px; with the wall: {} px, {on_wall} of them on the wall",
        on_ground.coverage(),
        with_wall.coverage()
    );
    println!("written to {}", out.display());
    Ok(())
}
