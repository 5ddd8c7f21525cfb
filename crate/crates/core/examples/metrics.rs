//! Compares soft shadows against the hard shadow and each other.
//!
//! `cargo run --release --example metrics`

use pixel_height::geometry::PointLight;
use pixel_height::metrics::{iou, metric_abs, metric_zncc};
use pixel_height::shadow::render_hard_planar;
use pixel_height::soft::{render_soft, SamplingConfig, SoftnessSpec};
use pixel_height::synthetic::standing_ellipse;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let obj = standing_ellipse(192, 192, 96.0, 100.0, 24.0, 60.0);
    let light = PointLight::new(30.0, 10.0, 240.0)?;
    let hard = render_hard_planar(&obj, light);
    let cfg = SamplingConfig::default();
    println!("{:>6} {:>8} {:>8} {:>8}", "s", "abs", "zncc", "iou");
    for s in [0.05, 0.1, 0.2, 0.4] {
        let soft = render_soft(&obj, None, light, SoftnessSpec::new(s)?, &cfg)?;
        println!(
            "{s:>6} {:>8.4} {:>8.4} {:>8.4}",
            metric_abs(&hard, &soft)?,
            metric_zncc(&hard, &soft)?,
            iou(&hard, &soft)?
        );
    }
    Ok(())
}
