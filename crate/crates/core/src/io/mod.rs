//! File formats: PHM height maps, PNG images, annotation JSON and mesh text.

mod annotation;
mod mesh;
mod phm;
mod png;

use std::path::PathBuf;

use thiserror::Error;

pub use annotation::{parse_annotation, read_annotation};
pub use mesh::{parse_mesh, read_mesh};
pub use phm::{decode_phm, decode_receiver_phm, encode_phm, read_phm, read_receiver_phm, write_phm, PHM_MAGIC};
pub use png::{
    decode_mask, decode_rgb, decode_rgba, decode_shadow_png, encode_height_png, encode_rgb_png, encode_rgba_png,
    encode_shadow_png, export_height_png, read_mask, read_rgb, read_rgba, read_shadow_png, write_png,
};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("not a PHM file")]
    BadMagic,
    #[error("payload truncated: expected {expected} bytes, got {got}")]
    TruncatedPayload { expected: usize, got: usize },
    #[error("{0} unexpected bytes after payload")]
    TrailingBytes(usize),
    #[error("non-finite height at ({x}, {y})")]
    NonFiniteHeight { x: u32, y: u32 },
    #[error("negative height at ({x}, {y})")]
    NegativeHeight { x: u32, y: u32 },
    #[error("image: {0}")]
    Image(#[from] image::ImageError),
    #[error("schema error: {0}")]
    SchemaError(String),
    #[error("annotation point {index} has its foot above the point")]
    NegativeHeightSample { index: usize },
    #[error("mask not found: {}", .0.display())]
    MaskNotFound(PathBuf),
}

pub fn read_file(path: &std::path::Path) -> Result<Vec<u8>, IoError> {
    std::fs::read(path).map_err(|source| IoError::File {
        path: path.to_owned(),
        source,
    })
}

pub fn write_file(path: &std::path::Path, bytes: &[u8]) -> Result<(), IoError> {
    std::fs::write(path, bytes).map_err(|source| IoError::File {
        path: path.to_owned(),
        source,
    })
}
