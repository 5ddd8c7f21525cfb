//! Dense height maps from sparse 2D annotations or from 3D meshes.

mod annotation;
mod mesh;

pub use annotation::{interpolate_sparse, AnnotationError, AnnotationSample, SparseAnnotation, MAX_FOOT_SKEW};
pub use mesh::{height_from_mesh, Camera, Mesh, MeshError, GROUND_EPS, NEAR_PLANE};

pub use crate::heightmap::offset_height;
