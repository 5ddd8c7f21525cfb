//! Lights placed through the horizon line instead of a pixel height.
//! Raising the horizon raises the light and shortens the shadow.
//!
//! `cargo run --example horizon`

use pixel_height::geometry::{light_from_horizon, HorizonSpec, PixelCoord};
use pixel_height::shadow::render_hard_planar;
use pixel_height::synthetic::bar;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let obj = bar(128, 128, 60, 66, 50, 80);
    let pos = PixelCoord::new(40.0, -30.0);
    for z in [40.0, 50.0, 60.0, 75.0, 100.0, 150.0] {
        let light = light_from_horizon(pos, HorizonSpec { y: z })?;
        let shadow = render_hard_planar(&obj, light);
        let tip = (0..128u32)
            .rev()
            .find(|&y| (0..128).any(|x| shadow.get(x, y) == 1.0))
            .unwrap_or(0);
        println!("horizon {z:>5}: H = {:>6.1}, shadow reaches row {tip}", light.height);
    }
    // A light exactly on the horizon is at infinity in the wrong sense.
    println!("{:?}", light_from_horizon(pos, HorizonSpec { y: pos.y }));
    Ok(())
}
