//! Soft shadows by averaging hard shadows over point lights drawn from an
//! isotropic Gaussian area light centered on the user's light.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use thiserror::Error;

use crate::geometry::{PixelCoord, PointLight};
use crate::heightmap::HeightMap;
use crate::shadow::surface::Surface;
use crate::shadow::{render_generic_on, render_planar_on, ReceiverMap, ShadowError, ShadowMap};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SoftError {
    #[error("softness must lie in [0, 1], got {0}")]
    InvalidSoftness(f64),
    #[error("object mask is empty")]
    EmptyMask,
    #[error("at least one light sample is required")]
    ZeroSamples,
    #[error(transparent)]
    Shadow(#[from] ShadowError),
}

/// Size of the area light; `0` is a point light.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SoftnessSpec(f64);

impl SoftnessSpec {
    pub const HARD: SoftnessSpec = SoftnessSpec(0.0);

    pub fn new(s: f64) -> Result<Self, SoftError> {
        if !(0.0..=1.0).contains(&s) {
            return Err(SoftError::InvalidSoftness(s));
        }
        Ok(Self(s))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplingConfig {
    pub n_samples: u32,
    pub seed: u64,
    /// Stratify the Gaussian over a grid of quantile cells instead of
    /// drawing independent samples.
    pub stratified: bool,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        Self {
            n_samples: 64,
            seed: 0,
            stratified: true,
        }
    }
}

/// Standard deviation of the area light in pixels: softness times the
/// distance from the light to the mask centroid.
pub fn softness_to_sigma(s: SoftnessSpec, light: PointLight, obj: &HeightMap) -> Result<f64, SoftError> {
    let (cx, cy) = obj.mask_centroid().ok_or(SoftError::EmptyMask)?;
    Ok(s.value() * light.pos.distance(PixelCoord::new(cx, cy)))
}

/// Point lights sampled from the Gaussian of standard deviation `sigma`
/// around `light.pos`. The pixel height `H` is shared by every sample.
///
/// Stratified sampling splits the unit square into a `g x g` grid with
/// `g = ceil(sqrt(n))`, draws one jittered point per cell (a random subset
/// of cells when `n` is not a square) and maps it through the Box-Muller
/// transform, so each cell is an equal-probability region of the Gaussian.
pub fn sample_lights(light: PointLight, sigma: f64, cfg: &SamplingConfig) -> Vec<PointLight> {
    let n = cfg.n_samples as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let offsets: Vec<(f64, f64)> = if cfg.stratified {
        let g = (n as f64).sqrt().ceil() as usize;
        let mut cells: Vec<usize> = (0..g * g).collect();
        if cells.len() > n {
            cells.shuffle(&mut rng);
            cells.truncate(n);
        }
        cells
            .into_iter()
            .map(|cell| {
                let u1 = ((cell % g) as f64 + rng.random::<f64>()) / g as f64;
                let u2 = ((cell / g) as f64 + rng.random::<f64>()) / g as f64;
                let r = (-2.0 * (1.0 - u1).ln()).sqrt();
                let theta = std::f64::consts::TAU * u2;
                (r * theta.cos(), r * theta.sin())
            })
            .collect()
    } else {
        (0..n)
            .map(|_| (rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect()
    };
    offsets
        .into_iter()
        .map(|(ox, oy)| light.moved_to(light.pos.offset(sigma * ox, sigma * oy)))
        .collect()
}

fn render_hard(surface: &Surface, receiver: Option<&ReceiverMap>, light: PointLight) -> Result<ShadowMap, ShadowError> {
    match receiver {
        Some(r) => render_generic_on(surface, r, light),
        None => Ok(render_planar_on(surface, light)),
    }
}

/// Soft shadow: the per-pixel fraction of sampled lights that shadow it.
/// `receiver = None` means the ground plane.
///
/// Softness zero returns the single hard render. Per-sample shadows are
/// merged with integer counts, so the result does not depend on how the
/// samples are scheduled across threads.
pub fn render_soft(
    obj: &HeightMap,
    receiver: Option<&ReceiverMap>,
    light: PointLight,
    s: SoftnessSpec,
    cfg: &SamplingConfig,
) -> Result<ShadowMap, SoftError> {
    if cfg.n_samples == 0 {
        return Err(SoftError::ZeroSamples);
    }
    if let Some(r) = receiver {
        crate::shadow::check_dims(obj.dimensions(), r.dimensions())?;
    }
    let surface = Surface::new(obj);
    if s.value() == 0.0 {
        return Ok(render_hard(&surface, receiver, light)?);
    }
    let sigma = softness_to_sigma(s, light, obj)?;
    let lights = sample_lights(light, sigma, cfg);
    let (w, h) = obj.dimensions();
    let len = w as usize * h as usize;

    let counts = lights
        .par_iter()
        .map(|&l| render_hard(&surface, receiver, l))
        .try_fold(
            || vec![0u32; len],
            |mut acc, shadow| {
                for (c, &v) in acc.iter_mut().zip(shadow?.values()) {
                    *c += (v == 1.0) as u32;
                }
                Ok::<_, ShadowError>(acc)
            },
        )
        .try_reduce(
            || vec![0u32; len],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                Ok(a)
            },
        )?;

    let n = lights.len() as f32;
    Ok(ShadowMap::from_values(
        w,
        h,
        counts.into_iter().map(|c| c as f32 / n).collect(),
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shadow::render_hard_planar;

    fn scene() -> (HeightMap, PointLight) {
        let obj = HeightMap::from_fn(96, 96, |x, y| {
            let dx = x as f64 - 48.0;
            let dy = y as f64 - 50.0;
            (dx * dx / 64.0 + dy * dy / 400.0 <= 1.0).then(|| (70.0 - y as f64).max(0.0) as f32)
        });
        (obj, PointLight::new(20.0, 10.0, 90.0).unwrap())
    }

    #[test]
    fn sigma_from_distance() {
        let obj = HeightMap::from_fn(11, 11, |x, y| (x == 5 && y == 5).then_some(1.0));
        let far = PointLight::new(5.0 + 300.0, 5.0 + 400.0, 10.0).unwrap();
        assert_eq!(softness_to_sigma(SoftnessSpec::HARD, far, &obj).unwrap(), 0.0);
        assert!((softness_to_sigma(SoftnessSpec::new(0.4).unwrap(), far, &obj).unwrap() - 200.0).abs() < 1e-9);
        assert!((softness_to_sigma(SoftnessSpec::new(0.05).unwrap(), far, &obj).unwrap() - 25.0).abs() < 1e-9);
        assert_eq!(
            softness_to_sigma(SoftnessSpec::new(0.4).unwrap(), far, &HeightMap::empty(3, 3)),
            Err(SoftError::EmptyMask)
        );
    }

    #[test]
    fn softness_range() {
        assert!(SoftnessSpec::new(-0.1).is_err());
        assert!(SoftnessSpec::new(1.01).is_err());
        assert!(SoftnessSpec::new(f64::NAN).is_err());
        assert!(SoftnessSpec::new(1.0).is_ok());
    }

    #[test]
    fn zero_softness_is_hard() {
        let (obj, l) = scene();
        let soft = render_soft(&obj, None, l, SoftnessSpec::HARD, &SamplingConfig::default()).unwrap();
        assert_eq!(soft, render_hard_planar(&obj, l));
    }

    #[test]
    fn single_sample_is_binary() {
        let (obj, l) = scene();
        let cfg = SamplingConfig {
            n_samples: 1,
            seed: 3,
            stratified: true,
        };
        let s = SoftnessSpec::new(0.3).unwrap();
        let soft = render_soft(&obj, None, l, s, &cfg).unwrap();
        assert!(soft.is_binary());
        let sigma = softness_to_sigma(s, l, &obj).unwrap();
        let only = sample_lights(l, sigma, &cfg)[0];
        assert_eq!(soft, render_hard_planar(&obj, only));
    }

    #[test]
    fn zero_samples_rejected() {
        let (obj, l) = scene();
        let cfg = SamplingConfig {
            n_samples: 0,
            ..Default::default()
        };
        assert_eq!(
            render_soft(&obj, None, l, SoftnessSpec::new(0.1).unwrap(), &cfg),
            Err(SoftError::ZeroSamples)
        );
    }

    #[test]
    fn samples_are_seeded_and_centered() {
        let l = PointLight::new(100.0, 100.0, 50.0).unwrap();
        for stratified in [true, false] {
            let cfg = SamplingConfig {
                n_samples: 400,
                seed: 11,
                stratified,
            };
            let a = sample_lights(l, 10.0, &cfg);
            assert_eq!(a, sample_lights(l, 10.0, &cfg));
            assert_ne!(a, sample_lights(l, 10.0, &SamplingConfig { seed: 12, ..cfg }));
            assert!(a.iter().all(|p| p.height == 50.0));
            let mx = a.iter().map(|p| p.pos.x).sum::<f64>() / 400.0;
            let my = a.iter().map(|p| p.pos.y).sum::<f64>() / 400.0;
            let var = a.iter().map(|p| (p.pos.x - mx).powi(2)).sum::<f64>() / 400.0;
            assert!((mx - 100.0).abs() < 1.5 && (my - 100.0).abs() < 1.5, "{mx} {my}");
            assert!((var.sqrt() - 10.0).abs() < 1.5, "std {}", var.sqrt());
        }
    }

    #[test]
    fn non_square_sample_counts() {
        let l = PointLight::new(0.0, 0.0, 5.0).unwrap();
        let cfg = SamplingConfig {
            n_samples: 7,
            seed: 1,
            stratified: true,
        };
        assert_eq!(sample_lights(l, 3.0, &cfg).len(), 7);
    }
}
