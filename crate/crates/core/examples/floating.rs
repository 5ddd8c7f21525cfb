//! Raising an object off the ground detaches its shadow.
//!
//! `cargo run --example floating [out_dir]`

use std::path::PathBuf;

use pixel_height::geometry::PointLight;
use pixel_height::heightmap::offset_height;
use pixel_height::io;
use pixel_height::shadow::render_hard_planar;
use pixel_height::synthetic::standing_ellipse;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(std::env::temp_dir);
    let obj = standing_ellipse(256, 256, 128.0, 120.0, 24.0, 50.0);
    let light = PointLight::new(-40.0, 40.0, 260.0)?;
    for delta in [0.0, 15.0, 40.0] {
        let raised = offset_height(&obj, delta)?;
        let shadow = render_hard_planar(&raised, light);
        // Shadow pixels touching the object's own mask.
        let contact = (0..256)
            .flat_map(|y| (0..256).map(move |x| (x, y)))
            .filter(|&(x, y)| obj.is_masked(x, y) && shadow.get(x, y) == 1.0)
            .count();
        io::write_png(
            &io::encode_shadow_png(&shadow),
            out.join(format!("floating_{delta}.png")),
        )?;
        println!(
            "raised {delta:>4} px: {} shadow px, {contact} under the object",
            shadow.coverage()
        );
    }
    Ok(())
}
