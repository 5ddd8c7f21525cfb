//! Soft shadows at increasing softness. Prints umbra and penumbra sizes.
//!
//! `cargo run --release --example soft_shadow [out_dir]`

use std::path::PathBuf;

use pixel_height::geometry::PointLight;
use pixel_height::io;
use pixel_height::soft::{render_soft, SamplingConfig, SoftnessSpec};
use pixel_height::synthetic::standing_ellipse;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(std::env::temp_dir);
    let obj = standing_ellipse(256, 256, 128.0, 140.0, 30.0, 80.0);
    let light = PointLight::new(40.0, 20.0, 300.0)?;
    let cfg = SamplingConfig {
        n_samples: 128,
        seed: 1,
        stratified: true,
    };

    for s in [0.0, 0.05, 0.1, 0.2, 0.4] {
        let shadow = render_soft(&obj, None, light, SoftnessSpec::new(s)?, &cfg)?;
        let umbra = shadow.umbra().iter().filter(|&&u| u).count();
        let path = out.join(format!("soft_{s}.png"));
        io::write_png(&io::encode_shadow_png(&shadow), &path)?;
        println!(
            "s={s:<5} umbra {umbra:>6} px  penumbra {:>6} px  {}",
            shadow.penumbra_area(),
            path.display()
        );
    }
    Ok(())
}
