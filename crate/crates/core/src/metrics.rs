//! Shadow comparison metrics.

use thiserror::Error;

use crate::shadow::ShadowMap;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("dimension mismatch: {a:?} vs {b:?}")]
    DimensionMismatch { a: (u32, u32), b: (u32, u32) },
    #[error("mask selects no pixels")]
    EmptyMask,
}

fn check(a: &ShadowMap, b: &ShadowMap) -> Result<(), MetricsError> {
    if a.dimensions() != b.dimensions() {
        return Err(MetricsError::DimensionMismatch {
            a: a.dimensions(),
            b: b.dimensions(),
        });
    }
    Ok(())
}

fn select<'a>(a: &'a ShadowMap, b: &'a ShadowMap, mask: &'a [bool]) -> Result<(Vec<f32>, Vec<f32>), MetricsError> {
    check(a, b)?;
    if mask.len() != a.values().len() {
        let (w, h) = a.dimensions();
        return Err(MetricsError::DimensionMismatch {
            a: (w, h),
            b: (mask.len() as u32, 1),
        });
    }
    let pick = |m: &ShadowMap| -> Vec<f32> { m.values().iter().zip(mask).filter(|p| *p.1).map(|p| *p.0).collect() };
    let (va, vb) = (pick(a), pick(b));
    if va.is_empty() {
        return Err(MetricsError::EmptyMask);
    }
    Ok((va, vb))
}

/// Mean absolute difference. Zero for empty inputs.
pub fn abs_values(a: &[f32], b: &[f32]) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.iter().zip(b).map(|(&x, &y)| (x as f64 - y as f64).abs()).sum::<f64>() / a.len() as f64
}

/// Zero-normalized cross-correlation with population statistics.
///
/// Two constant inputs score 1 when equal and 0 otherwise; one constant
/// input scores 0.
pub fn zncc_values(a: &[f32], b: &[f32]) -> f64 {
    let constant = |v: &[f32]| v.windows(2).all(|w| w[0] == w[1]);
    match (constant(a), constant(b)) {
        (true, true) => return if a.first() == b.first() { 1.0 } else { 0.0 },
        (true, false) | (false, true) => return 0.0,
        _ => {}
    }
    let n = a.len() as f64;
    let mean = |v: &[f32]| v.iter().map(|&x| x as f64).sum::<f64>() / n;
    let (ma, mb) = (mean(a), mean(b));
    let (mut cov, mut va, mut vb) = (0.0, 0.0, 0.0);
    for (&x, &y) in a.iter().zip(b) {
        let (dx, dy) = (x as f64 - ma, y as f64 - mb);
        cov += dx * dy;
        va += dx * dx;
        vb += dy * dy;
    }
    (cov / (va * vb).sqrt()).clamp(-1.0, 1.0)
}

pub fn metric_abs(a: &ShadowMap, b: &ShadowMap) -> Result<f64, MetricsError> {
    check(a, b)?;
    Ok(abs_values(a.values(), b.values()))
}

pub fn metric_zncc(a: &ShadowMap, b: &ShadowMap) -> Result<f64, MetricsError> {
    check(a, b)?;
    Ok(zncc_values(a.values(), b.values()))
}

/// [`metric_abs`] over the pixels where `mask` is true.
pub fn metric_abs_masked(a: &ShadowMap, b: &ShadowMap, mask: &[bool]) -> Result<f64, MetricsError> {
    let (va, vb) = select(a, b, mask)?;
    Ok(abs_values(&va, &vb))
}

/// [`metric_zncc`] over the pixels where `mask` is true.
pub fn metric_zncc_masked(a: &ShadowMap, b: &ShadowMap, mask: &[bool]) -> Result<f64, MetricsError> {
    let (va, vb) = select(a, b, mask)?;
    Ok(zncc_values(&va, &vb))
}

/// Intersection over union of the pixels above one half. Two empty shadows
/// score 1.
pub fn iou(a: &ShadowMap, b: &ShadowMap) -> Result<f64, MetricsError> {
    check(a, b)?;
    let (mut inter, mut union) = (0usize, 0usize);
    for (&x, &y) in a.values().iter().zip(b.values()) {
        let (x, y) = (x > 0.5, y > 0.5);
        inter += (x && y) as usize;
        union += (x || y) as usize;
    }
    Ok(if union == 0 { 1.0 } else { inter as f64 / union as f64 })
}
