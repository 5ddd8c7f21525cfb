use std::path::Path;

use serde::Deserialize;

use super::{png::read_mask, read_file, IoError};
use crate::acquire::{AnnotationError, AnnotationSample, SparseAnnotation};

#[derive(Deserialize)]
struct AnnotationFile {
    mask: String,
    points: Vec<PointEntry>,
}

#[derive(Deserialize)]
struct PointEntry {
    x: f64,
    y: f64,
    foot_x: f64,
    foot_y: f64,
}

/// Parses annotation JSON. The mask path is resolved against `base_dir`
/// unless it is absolute.
pub fn parse_annotation(json: &str, base_dir: impl AsRef<Path>) -> Result<SparseAnnotation, IoError> {
    let file: AnnotationFile = serde_json::from_str(json).map_err(|e| IoError::SchemaError(e.to_string()))?;
    let samples: Vec<AnnotationSample> = file
        .points
        .iter()
        .map(|p| AnnotationSample::new(p.x, p.y, p.foot_x, p.foot_y))
        .collect();
    if let Some(index) = samples.iter().position(|s| s.height() < 0.0) {
        return Err(IoError::NegativeHeightSample { index });
    }

    let mask_path = base_dir.as_ref().join(&file.mask);
    if !mask_path.is_file() {
        return Err(IoError::MaskNotFound(mask_path));
    }
    let (w, h, mask) = read_mask(&mask_path)?;
    SparseAnnotation::new(w, h, mask, samples).map_err(|e| match e {
        AnnotationError::NegativeHeightSample { index } => IoError::NegativeHeightSample { index },
        other => IoError::SchemaError(other.to_string()),
    })
}

/// Reads an annotation file; a relative mask path is taken relative to it.
pub fn read_annotation(path: impl AsRef<Path>) -> Result<SparseAnnotation, IoError> {
    let path = path.as_ref();
    let text = String::from_utf8(read_file(path)?).map_err(|e| IoError::SchemaError(e.to_string()))?;
    parse_annotation(&text, path.parent().unwrap_or(Path::new(".")))
}
