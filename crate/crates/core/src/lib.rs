//! Shadows and reflections for 2D cutouts from pixel-height maps.
//!
//! A pixel height is the vertical image distance from an object pixel down
//! to the point where it meets the ground. With one height per pixel and a
//! point light given by its image position and its own pixel height, hard
//! shadows follow from similar triangles ([`geometry`]), either directly on
//! the ground or ray-marched onto any receiver described by its own height
//! map ([`shadow`]). Soft shadows average hard ones over a Gaussian area
//! light ([`soft`]).
//!
//! Height maps come from annotations or meshes ([`acquire`]) and are stored
//! as PHM files ([`io`]). Results are blended into photos ([`composite`]),
//! compared ([`metrics`]), and served over HTTP ([`service`]) or the command
//! line ([`cli`]).
//!
//! ```
//! use pixel_height::geometry::PointLight;
//! use pixel_height::shadow::render_hard_planar;
//! use pixel_height::synthetic::standing_ellipse;
//!
//! let obj = standing_ellipse(64, 64, 32.0, 30.0, 8.0, 20.0);
//! let shadow = render_hard_planar(&obj, PointLight::new(5.0, 5.0, 120.0).unwrap());
//! assert!(shadow.coverage() > 0);
//! ```

pub mod acquire;
pub mod cli;
pub mod composite;
pub mod geometry;
pub mod heightmap;
pub mod io;
pub mod metrics;
pub mod pipeline;
pub mod raster;
pub mod service;
pub mod shadow;
pub mod soft;
pub mod synthetic;
