//! Command-line front end. Exit status is 0 on success, 2 for invalid
//! arguments or inputs and 1 for runtime failures.

use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::acquire::{height_from_mesh, interpolate_sparse, offset_height, Camera};
use crate::composite::{composite_reflection, composite_shadow};
use crate::geometry::PixelCoord;
use crate::io::{self, IoError};
use crate::metrics::{metric_abs, metric_abs_masked, metric_zncc, metric_zncc_masked};
use crate::pipeline::{render_png, CompositeOverrides, LightSpec, PipelineError, RenderMode, RenderParams, Scene};
use crate::service::{serve, ServiceConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Invalid(m) => CliError::Invalid(m),
            PipelineError::Io(e) => e.into(),
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        match e {
            IoError::File { .. } => CliError::Runtime(e.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

fn invalid(e: impl std::fmt::Display) -> CliError {
    CliError::Invalid(e.to_string())
}

#[derive(Debug, Parser)]
#[command(
    name = "pixel-height",
    version,
    about = "Shadows, soft shadows and reflections from pixel-height maps"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hard shadow from a point light.
    RenderHard(RenderArgs),
    /// Soft shadow from a Gaussian area light.
    RenderSoft {
        #[command(flatten)]
        render: RenderArgs,
        #[command(flatten)]
        soft: SoftArgs,
    },
    /// Ground reflection of the cutout.
    RenderReflection(ReflectionArgs),
    /// Height map of a triangle mesh seen through a pinhole camera.
    HeightFromMesh(MeshArgs),
    /// Dense height map from annotated points and their footpoints.
    HeightFromAnnotations {
        #[arg(long)]
        annotation: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also write a normalized 16-bit PNG for viewing.
        #[arg(long)]
        png: Option<PathBuf>,
    },
    /// Raise (or lower) an object by a constant height.
    OffsetHeight {
        #[arg(long)]
        height: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        delta: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Composite a rendered shadow or reflection under a cutout.
    Composite(CompositeArgs),
    /// Compare two shadow images.
    Metrics {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// Restrict to pixels where this PNG is nonzero.
        #[arg(long)]
        mask: Option<PathBuf>,
    },
    /// Run the HTTP render service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
        /// Idle time in seconds before a scene is dropped.
        #[arg(long, default_value_t = 1800)]
        ttl_secs: u64,
        /// Origin allowed by CORS; any when omitted.
        #[arg(long)]
        cors_origin: Option<String>,
    },
}

#[derive(Debug, Args)]
pub struct LightArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub light_x: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub light_y: f64,
    /// Pixel height of the light; negative puts it behind the camera.
    #[arg(
        long = "light-H",
        id = "light_h",
        allow_hyphen_values = true,
        required_unless_present = "horizon",
        conflicts_with = "horizon"
    )]
    pub light_h: Option<f64>,
    /// Horizon row; the light is placed at infinity above it.
    #[arg(long, allow_hyphen_values = true)]
    pub horizon: Option<f64>,
}

impl LightArgs {
    pub fn spec(&self) -> LightSpec {
        let (x, y) = (self.light_x, self.light_y);
        match (self.light_h, self.horizon) {
            (Some(height), _) => LightSpec::Height { x, y, height },
            (None, Some(horizon)) => LightSpec::Horizon { x, y, horizon },
            (None, None) => unreachable!("clap requires one of the two"),
        }
    }
}

#[derive(Debug, Args)]
pub struct SceneArgs {
    /// RGBA cutout PNG.
    #[arg(long)]
    pub object: PathBuf,
    /// Object height map (PHM).
    #[arg(long)]
    pub height: PathBuf,
    /// Mask PNG overriding the height map's own mask.
    #[arg(long)]
    pub mask: Option<PathBuf>,
    /// Receiver height map (PHM); the ground plane when omitted.
    #[arg(long)]
    pub receiver: Option<PathBuf>,
    /// Background PNG for compositing; white when omitted.
    #[arg(long)]
    pub background: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompositeFlags {
    /// Composite onto the background instead of writing the bare layer.
    #[arg(long)]
    pub composite: bool,
    #[arg(long)]
    pub shadow_opacity: Option<f64>,
    /// Shadow color as `r,g,b` in [0, 1].
    #[arg(long, value_parser = parse_triple)]
    pub shadow_color: Option<[f64; 3]>,
    #[arg(long)]
    pub reflection_opacity: Option<f64>,
}

impl CompositeFlags {
    fn overrides(&self) -> CompositeOverrides {
        CompositeOverrides {
            shadow_opacity: self.shadow_opacity,
            shadow_color: self.shadow_color,
            reflection_opacity: self.reflection_opacity,
        }
    }
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[command(flatten)]
    pub scene: SceneArgs,
    #[command(flatten)]
    pub light: LightArgs,
    #[command(flatten)]
    pub composite: CompositeFlags,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SoftArgs {
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub softness: f64,
    #[arg(long, default_value_t = 64)]
    pub samples: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Draw independent samples instead of stratified ones.
    #[arg(long)]
    pub iid: bool,
}

#[derive(Debug, Args)]
pub struct ReflectionArgs {
    #[command(flatten)]
    pub scene: SceneArgs,
    #[command(flatten)]
    pub composite: CompositeFlags,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct MeshArgs {
    /// Mesh text file of `v x y z` and `f i j k` lines.
    #[arg(long)]
    pub mesh: PathBuf,
    /// Camera position `x,y,z`; world +Y is up.
    #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
    pub camera: [f64; 3],
    /// Viewing direction `x,y,z`.
    #[arg(long, value_parser = parse_triple, allow_hyphen_values = true, default_value = "0,0,1")]
    pub forward: [f64; 3],
    /// Focal length in pixels.
    #[arg(long)]
    pub focal: f64,
    #[arg(long)]
    pub width: u32,
    #[arg(long = "image-height")]
    pub image_height: u32,
    /// Principal point `x,y`; the image center when omitted.
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    pub principal: Option<[f64; 2]>,
    #[arg(long)]
    pub out: PathBuf,
    /// Also write a normalized 16-bit PNG for viewing.
    #[arg(long)]
    pub png: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompositeArgs {
    #[arg(long)]
    pub background: PathBuf,
    /// RGBA cutout PNG drawn on top.
    #[arg(long)]
    pub object: PathBuf,
    /// Gray shadow PNG.
    #[arg(long, required_unless_present = "reflection", conflicts_with = "reflection")]
    pub shadow: Option<PathBuf>,
    /// RGBA reflection PNG.
    #[arg(long)]
    pub reflection: Option<PathBuf>,
    #[arg(long)]
    pub shadow_opacity: Option<f64>,
    #[arg(long, value_parser = parse_triple)]
    pub shadow_color: Option<[f64; 3]>,
    #[arg(long)]
    pub reflection_opacity: Option<f64>,
    #[arg(long)]
    pub out: PathBuf,
}

fn parse_floats<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != N {
        return Err(format!("expected {N} comma-separated numbers"));
    }
    let mut out = [0.0; N];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.trim().parse().map_err(|_| format!("`{p}` is not a number"))?;
    }
    Ok(out)
}

fn parse_triple(s: &str) -> Result<[f64; 3], String> {
    parse_floats(s)
}

fn parse_pair(s: &str) -> Result<[f64; 2], String> {
    parse_floats(s)
}

fn load_scene(args: &SceneArgs) -> Result<Scene, CliError> {
    let read = |p: &Path| io::read_file(p).map_err(CliError::from);
    let receiver = args.receiver.as_deref().map(read).transpose()?;
    let background = args.background.as_deref().map(read).transpose()?;
    let mut scene = Scene::from_bytes(
        &read(&args.object)?,
        &read(&args.height)?,
        receiver.as_deref(),
        background.as_deref(),
    )?;
    if let Some(path) = &args.mask {
        let (w, h, mask) = io::read_mask(path)?;
        if (w, h) != scene.dimensions() {
            return Err(invalid(format!("mask is {w}x{h}, scene is {:?}", scene.dimensions())));
        }
        scene.height = scene.height.clone().with_mask(&mask).map_err(invalid)?;
    }
    Ok(scene)
}

fn render_to(scene: &SceneArgs, params: &RenderParams, out: &Path) -> Result<(), CliError> {
    params.validate()?;
    let scene = load_scene(scene)?;
    let png = render_png(&scene, params)?;
    Ok(io::write_png(&png, out)?)
}

/// Runs one parsed command.
pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::RenderHard(a) => {
            let mut p = RenderParams::new(a.light.spec(), RenderMode::Hard);
            p.composite = a.composite.composite;
            p.composite_params = a.composite.overrides();
            render_to(&a.scene, &p, &a.out)
        }
        Command::RenderSoft { render: a, soft } => {
            let mut p = RenderParams::new(a.light.spec(), RenderMode::Soft);
            p.softness = soft.softness;
            p.samples = soft.samples;
            p.seed = soft.seed;
            p.stratified = !soft.iid;
            p.composite = a.composite.composite;
            p.composite_params = a.composite.overrides();
            render_to(&a.scene, &p, &a.out)
        }
        Command::RenderReflection(a) => {
            // The light is unused for reflections; any valid one will do.
            let mut p = RenderParams::new(
                LightSpec::Height {
                    x: 0.0,
                    y: 0.0,
                    height: 1.0,
                },
                RenderMode::Reflection,
            );
            p.composite = a.composite.composite;
            p.composite_params = a.composite.overrides();
            render_to(&a.scene, &p, &a.out)
        }
        Command::HeightFromMesh(a) => {
            let mesh = io::read_mesh(&a.mesh)?;
            let pp = a
                .principal
                .map(|[x, y]| PixelCoord::new(x, y))
                .unwrap_or(PixelCoord::new(a.width as f64 / 2.0, a.image_height as f64 / 2.0));
            let cam = Camera::new(a.camera, a.forward, a.focal, pp, a.width, a.image_height).map_err(invalid)?;
            let map = height_from_mesh(&mesh, &cam).map_err(invalid)?;
            io::write_phm(&map, &a.out)?;
            if let Some(png) = a.png {
                io::export_height_png(&map, png)?;
            }
            Ok(())
        }
        Command::HeightFromAnnotations { annotation, out, png } => {
            let ann = io::read_annotation(&annotation)?;
            let map = interpolate_sparse(&ann).map_err(invalid)?;
            io::write_phm(&map, &out)?;
            if let Some(png) = png {
                io::export_height_png(&map, png)?;
            }
            Ok(())
        }
        Command::OffsetHeight { height, delta, out } => {
            let map = io::read_phm(&height)?;
            let moved = offset_height(&map, delta).map_err(invalid)?;
            Ok(io::write_phm(&moved, &out)?)
        }
        Command::Composite(a) => {
            let params = CompositeOverrides {
                shadow_opacity: a.shadow_opacity,
                shadow_color: a.shadow_color,
                reflection_opacity: a.reflection_opacity,
            }
            .resolve();
            let bg = io::read_rgb(&a.background)?;
            let cutout = io::read_rgba(&a.object)?;
            let out = match (&a.shadow, &a.reflection) {
                (Some(s), _) => composite_shadow(&bg, &io::read_shadow_png(s)?, &cutout, &params),
                (None, Some(r)) => composite_reflection(&bg, &io::read_rgba(r)?, &cutout, &params),
                (None, None) => unreachable!("clap requires one of the two"),
            }
            .map_err(invalid)?;
            Ok(io::write_png(&io::encode_rgb_png(&out), &a.out)?)
        }
        Command::Metrics { a, b, mask } => {
            let (a, b) = (io::read_shadow_png(&a)?, io::read_shadow_png(&b)?);
            let (abs, zncc) = match mask {
                Some(m) => {
                    let (_, _, mask) = io::read_mask(&m)?;
                    (
                        metric_abs_masked(&a, &b, &mask).map_err(invalid)?,
                        metric_zncc_masked(&a, &b, &mask).map_err(invalid)?,
                    )
                }
                None => (
                    metric_abs(&a, &b).map_err(invalid)?,
                    metric_zncc(&a, &b).map_err(invalid)?,
                ),
            };
            println!("abs={abs} zncc={zncc}");
            Ok(())
        }
        Command::Serve {
            port,
            host,
            ttl_secs,
            cors_origin,
        } => {
            let cfg = ServiceConfig {
                ttl: Duration::from_secs(ttl_secs),
                allowed_origin: cors_origin,
            };
            let rt = tokio::runtime::Runtime::new().map_err(|e| CliError::Runtime(e.to_string()))?;
            rt.block_on(serve(SocketAddr::new(host, port), cfg))
                .map_err(|e| CliError::Runtime(e.to_string()))
        }
    }
}

/// Parses `std::env::args`, runs the command and reports errors on stderr.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
