//! Scene loading and one-call rendering to PNG, shared by the command line
//! and the HTTP service so both produce identical bytes.

use image::{Rgb, RgbImage, RgbaImage};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::composite::{composite_reflection, composite_shadow, CompositeError, CompositeParams};
use crate::geometry::{light_from_horizon, GeometryError, HorizonSpec, PixelCoord, PointLight};
use crate::heightmap::HeightMap;
use crate::io::{self, IoError};
use crate::shadow::{render_reflection, ReceiverMap, ShadowError};
use crate::soft::{render_soft, SamplingConfig, SoftError, SoftnessSpec};

/// Sample cap applied to preview renders.
pub const PREVIEW_MAX_SAMPLES: u32 = 32;

#[derive(Debug, Error)]
pub enum PipelineError {
    /// The request or its inputs are unusable as given.
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] IoError),
}

impl From<GeometryError> for PipelineError {
    fn from(e: GeometryError) -> Self {
        PipelineError::Invalid(e.to_string())
    }
}

impl From<ShadowError> for PipelineError {
    fn from(e: ShadowError) -> Self {
        PipelineError::Invalid(e.to_string())
    }
}

impl From<SoftError> for PipelineError {
    fn from(e: SoftError) -> Self {
        PipelineError::Invalid(e.to_string())
    }
}

impl From<CompositeError> for PipelineError {
    fn from(e: CompositeError) -> Self {
        PipelineError::Invalid(e.to_string())
    }
}

/// A point light given either by its pixel height or by the horizon row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum LightSpec {
    Height {
        x: f64,
        y: f64,
        #[serde(rename = "H")]
        height: f64,
    },
    Horizon {
        x: f64,
        y: f64,
        horizon: f64,
    },
}

impl LightSpec {
    pub fn to_light(self) -> Result<PointLight, GeometryError> {
        match self {
            LightSpec::Height { x, y, height } => PointLight::new(x, y, height),
            LightSpec::Horizon { x, y, horizon } => {
                if !(x.is_finite() && y.is_finite() && horizon.is_finite()) {
                    return Err(GeometryError::DegenerateLight);
                }
                light_from_horizon(PixelCoord::new(x, y), HorizonSpec { y: horizon })
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum RenderMode {
    #[default]
    Hard,
    Soft,
    Reflection,
}

/// Optional overrides of [`CompositeParams`].
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompositeOverrides {
    pub shadow_opacity: Option<f64>,
    pub shadow_color: Option<[f64; 3]>,
    pub reflection_opacity: Option<f64>,
}

impl CompositeOverrides {
    pub fn resolve(&self) -> CompositeParams {
        let d = CompositeParams::default();
        CompositeParams {
            shadow_opacity: self.shadow_opacity.unwrap_or(d.shadow_opacity),
            shadow_color: self.shadow_color.unwrap_or(d.shadow_color),
            reflection_opacity: self.reflection_opacity.unwrap_or(d.reflection_opacity),
        }
    }
}

fn default_samples() -> u32 {
    SamplingConfig::default().n_samples
}

fn default_stratified() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RenderParams {
    pub light: LightSpec,
    #[serde(default)]
    pub softness: f64,
    #[serde(default = "default_samples")]
    pub samples: u32,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_stratified")]
    pub stratified: bool,
    #[serde(default)]
    pub mode: RenderMode,
    #[serde(default)]
    pub composite: bool,
    #[serde(default)]
    pub composite_params: CompositeOverrides,
    #[serde(default)]
    pub preview: bool,
}

impl RenderParams {
    pub fn new(light: LightSpec, mode: RenderMode) -> Self {
        Self {
            light,
            softness: 0.0,
            samples: default_samples(),
            seed: 0,
            stratified: true,
            mode,
            composite: false,
            composite_params: CompositeOverrides::default(),
            preview: false,
        }
    }

    /// Checks every field that does not depend on the scene.
    pub fn validate(&self) -> Result<(PointLight, SoftnessSpec, SamplingConfig, CompositeParams), PipelineError> {
        let light = self.light.to_light()?;
        let s = SoftnessSpec::new(self.softness)?;
        if self.samples == 0 {
            return Err(SoftError::ZeroSamples.into());
        }
        let n_samples = if self.preview {
            self.samples.min(PREVIEW_MAX_SAMPLES)
        } else {
            self.samples
        };
        let cfg = SamplingConfig {
            n_samples,
            seed: self.seed,
            stratified: self.stratified,
        };
        let cp = self.composite_params.resolve();
        cp.validate()?;
        Ok((light, s, cfg, cp))
    }
}

/// Everything needed to render: the object cutout, its height map, and
/// optionally a receiver and a background.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub cutout: RgbaImage,
    pub height: HeightMap,
    pub receiver: Option<ReceiverMap>,
    pub background: Option<RgbImage>,
}

impl Scene {
    pub fn new(
        cutout: RgbaImage,
        height: HeightMap,
        receiver: Option<ReceiverMap>,
        background: Option<RgbImage>,
    ) -> Result<Self, PipelineError> {
        let dims = height.dimensions();
        let mismatch = |what: &str, got: (u32, u32)| {
            PipelineError::Invalid(format!(
                "{what} is {}x{}, height map is {}x{}",
                got.0, got.1, dims.0, dims.1
            ))
        };
        if cutout.dimensions() != dims {
            return Err(mismatch("cutout", cutout.dimensions()));
        }
        if let Some(r) = &receiver {
            if r.dimensions() != dims {
                return Err(mismatch("receiver", r.dimensions()));
            }
        }
        if let Some(b) = &background {
            if b.dimensions() != dims {
                return Err(mismatch("background", b.dimensions()));
            }
        }
        Ok(Self {
            cutout,
            height,
            receiver,
            background,
        })
    }

    /// Decodes a scene from file contents: PNG cutout, PHM height, PHM
    /// receiver and PNG background.
    pub fn from_bytes(
        cutout: &[u8],
        height: &[u8],
        receiver: Option<&[u8]>,
        background: Option<&[u8]>,
    ) -> Result<Self, PipelineError> {
        let invalid = |what: &str, e: IoError| PipelineError::Invalid(format!("{what}: {e}"));
        Self::new(
            io::decode_rgba(cutout).map_err(|e| invalid("cutout", e))?,
            io::decode_phm(height).map_err(|e| invalid("height", e))?,
            receiver
                .map(io::decode_receiver_phm)
                .transpose()
                .map_err(|e| invalid("receiver", e))?,
            background
                .map(io::decode_rgb)
                .transpose()
                .map_err(|e| invalid("background", e))?,
        )
    }

    pub fn dimensions(&self) -> (u32, u32) {
        self.height.dimensions()
    }

    fn background_or_white(&self) -> RgbImage {
        self.background.clone().unwrap_or_else(|| {
            let (w, h) = self.dimensions();
            RgbImage::from_pixel(w, h, Rgb([255; 3]))
        })
    }
}

/// Renders `scene` and encodes the result as PNG.
///
/// Without compositing, shadow modes give an 8-bit gray shadow map and
/// reflection mode gives the RGBA reflection layer. With compositing the
/// layer is blended onto the background (white when the scene has none)
/// under the cutout, as RGB.
pub fn render_png(scene: &Scene, params: &RenderParams) -> Result<Vec<u8>, PipelineError> {
    let (light, s, cfg, cp) = params.validate()?;
    let softness = match params.mode {
        RenderMode::Soft => s,
        _ => SoftnessSpec::HARD,
    };
    match params.mode {
        RenderMode::Hard | RenderMode::Soft => {
            let shadow = render_soft(&scene.height, scene.receiver.as_ref(), light, softness, &cfg)?;
            if params.composite {
                let out = composite_shadow(&scene.background_or_white(), &shadow, &scene.cutout, &cp)?;
                Ok(io::encode_rgb_png(&out))
            } else {
                Ok(io::encode_shadow_png(&shadow))
            }
        }
        RenderMode::Reflection => {
            let refl = render_reflection(&scene.height, &scene.cutout)?;
            if params.composite {
                let out = composite_reflection(&scene.background_or_white(), &refl, &scene.cutout, &cp)?;
                Ok(io::encode_rgb_png(&out))
            } else {
                Ok(io::encode_rgba_png(&refl))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scene() -> Scene {
        let height = HeightMap::from_fn(32, 32, |x, y| {
            ((12..16).contains(&x) && (8..20).contains(&y)).then(|| (20 - y) as f32)
        });
        let cutout = RgbaImage::from_fn(32, 32, |x, y| {
            image::Rgba(if height.is_masked(x, y) {
                [200, 30, 30, 255]
            } else {
                [0; 4]
            })
        });
        Scene::new(cutout, height, None, None).unwrap()
    }

    fn params(json: &str) -> RenderParams {
        serde_json::from_str(json).unwrap()
    }

    #[test]
    fn json_defaults_and_light_forms() {
        let p = params(r#"{"light": {"x": 1, "y": 2, "H": 30}}"#);
        assert_eq!(
            p,
            RenderParams::new(
                LightSpec::Height {
                    x: 1.0,
                    y: 2.0,
                    height: 30.0
                },
                RenderMode::Hard
            )
        );
        let p = params(r#"{"light": {"x": 250, "y": 160, "horizon": 100}, "mode": "soft", "softness": 0.2}"#);
        assert_eq!(p.light.to_light().unwrap().height, -60.0);
        assert_eq!(p.mode, RenderMode::Soft);
        assert!(serde_json::from_str::<RenderParams>(r#"{"light": {"x": 1, "y": 2, "H": 3, "horizon": 4}}"#).is_err());
        assert!(serde_json::from_str::<RenderParams>(r#"{"light": {"x": 1, "y": 2}}"#).is_err());
        assert!(serde_json::from_str::<RenderParams>(r#"{"light": {"x": 1, "y": 2, "H": 3}, "bogus": 1}"#).is_err());
    }

    #[test]
    fn validation() {
        let light = LightSpec::Height {
            x: 1.0,
            y: 2.0,
            height: 30.0,
        };
        let mut p = RenderParams::new(light, RenderMode::Soft);
        p.softness = -0.1;
        assert!(matches!(p.validate(), Err(PipelineError::Invalid(_))));
        p.softness = 0.5;
        p.samples = 0;
        assert!(p.validate().is_err());
        p.samples = 500;
        p.preview = true;
        assert_eq!(p.validate().unwrap().2.n_samples, PREVIEW_MAX_SAMPLES);
        let flat = RenderParams::new(
            LightSpec::Horizon {
                x: 0.0,
                y: 5.0,
                horizon: 5.0,
            },
            RenderMode::Hard,
        );
        assert!(flat.validate().is_err());
        assert!(RenderParams::new(
            LightSpec::Height {
                x: 0.0,
                y: 0.0,
                height: 0.0
            },
            RenderMode::Hard
        )
        .validate()
        .is_err());
    }

    #[test]
    fn soft_at_zero_equals_hard_bytes() {
        let light = LightSpec::Height {
            x: 4.0,
            y: 2.0,
            height: 40.0,
        };
        let hard = render_png(&scene(), &RenderParams::new(light, RenderMode::Hard)).unwrap();
        let soft = render_png(&scene(), &RenderParams::new(light, RenderMode::Soft)).unwrap();
        assert_eq!(hard, soft);
        let mut p = RenderParams::new(light, RenderMode::Soft);
        p.softness = 0.3;
        p.samples = 16;
        assert_ne!(render_png(&scene(), &p).unwrap(), hard);
        assert_eq!(render_png(&scene(), &p).unwrap(), render_png(&scene(), &p).unwrap());
    }

    #[test]
    fn output_kinds() {
        let light = LightSpec::Height {
            x: 4.0,
            y: 2.0,
            height: 40.0,
        };
        let decode = |b: Vec<u8>| image::load_from_memory(&b).unwrap();
        let mut p = RenderParams::new(light, RenderMode::Hard);
        assert_eq!(decode(render_png(&scene(), &p).unwrap()).color(), image::ColorType::L8);
        p.composite = true;
        assert_eq!(
            decode(render_png(&scene(), &p).unwrap()).color(),
            image::ColorType::Rgb8
        );
        p.mode = RenderMode::Reflection;
        p.composite = false;
        assert_eq!(
            decode(render_png(&scene(), &p).unwrap()).color(),
            image::ColorType::Rgba8
        );
    }

    #[test]
    fn scene_dimension_checks() {
        let s = scene();
        assert!(Scene::new(RgbaImage::new(16, 16), s.height.clone(), None, None).is_err());
        assert!(Scene::new(
            s.cutout.clone(),
            s.height.clone(),
            Some(ReceiverMap::ground(32, 31)),
            None
        )
        .is_err());
        assert!(Scene::new(s.cutout.clone(), s.height.clone(), None, Some(RgbImage::new(1, 1))).is_err());
        assert!(matches!(
            Scene::from_bytes(b"x", b"y", None, None),
            Err(PipelineError::Invalid(_))
        ));
    }
}
