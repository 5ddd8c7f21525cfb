//! Times the renderers on a 512x512 scene, reporting the median of three
//! runs after a warm-up.
//!
//! `cargo run --release --example benchmark`

use std::time::{Duration, Instant};

use pixel_height::shadow::{render_hard_generic, render_hard_planar, ReceiverMap};
use pixel_height::soft::{render_soft, SamplingConfig, SoftnessSpec};
use pixel_height::synthetic::benchmark_scene;

fn median_of_3(mut f: impl FnMut()) -> Duration {
    f();
    let mut t: Vec<Duration> = (0..3)
        .map(|_| {
            let start = Instant::now();
            f();
            start.elapsed()
        })
        .collect();
    t.sort();
    t[1]
}

fn main() {
    let (obj, light) = benchmark_scene();
    let ground = ReceiverMap::ground(512, 512);
    let soft = SoftnessSpec::new(0.1).unwrap();
    let cfg = SamplingConfig::default();

    println!("threads: {}", rayon::current_num_threads());
    let planar = median_of_3(|| {
        render_hard_planar(&obj, light);
    });
    println!("planar hard  {:>8.1} ms", planar.as_secs_f64() * 1e3);
    let generic = median_of_3(|| {
        render_hard_generic(&obj, &ground, light).unwrap();
    });
    println!("generic hard {:>8.1} ms", generic.as_secs_f64() * 1e3);
    let soft = median_of_3(|| {
        render_soft(&obj, None, light, soft, &cfg).unwrap();
    });
    println!("soft n=64    {:>8.1} ms", soft.as_secs_f64() * 1e3);
}
