use std::path::Path;

use image::codecs::png::PngEncoder;
use image::{DynamicImage, ExtendedColorType, ImageEncoder, RgbImage, RgbaImage};

use super::{read_file, write_file, IoError};
use crate::heightmap::HeightMap;
use crate::shadow::ShadowMap;

fn encode(data: &[u8], width: u32, height: u32, color: ExtendedColorType) -> Vec<u8> {
    let mut out = Vec::new();
    PngEncoder::new(&mut out)
        .write_image(data, width, height, color)
        .expect("in-memory PNG encoding of a well-sized buffer");
    out
}

fn decode(bytes: &[u8]) -> Result<DynamicImage, IoError> {
    Ok(image::load_from_memory_with_format(bytes, image::ImageFormat::Png)?)
}

/// Normalized 16-bit grayscale visualization: `round(65535 * h / max h)`,
/// zero outside the mask and everywhere when the maximum is zero.
pub fn encode_height_png(map: &HeightMap) -> Vec<u8> {
    let (w, h) = map.dimensions();
    let max = map.max_height().unwrap_or(0.0) as f64;
    let mut data = Vec::with_capacity(2 * w as usize * h as usize);
    for (&m, &v) in map.mask().iter().zip(map.heights()) {
        let q = if m && max > 0.0 {
            (65535.0 * v as f64 / max).round() as u16
        } else {
            0
        };
        data.extend_from_slice(&q.to_ne_bytes());
    }
    encode(&data, w, h, ExtendedColorType::L16)
}

pub fn export_height_png(map: &HeightMap, path: impl AsRef<Path>) -> Result<(), IoError> {
    write_file(path.as_ref(), &encode_height_png(map))
}

/// 8-bit grayscale, `round(255 * v)`.
pub fn encode_shadow_png(shadow: &ShadowMap) -> Vec<u8> {
    let data: Vec<u8> = shadow.values().iter().map(|&v| (255.0 * v).round() as u8).collect();
    encode(&data, shadow.width(), shadow.height(), ExtendedColorType::L8)
}

/// Reads any PNG as a shadow map through its luminance.
pub fn decode_shadow_png(bytes: &[u8]) -> Result<ShadowMap, IoError> {
    let img = decode(bytes)?;
    let (w, h) = (img.width(), img.height());
    let v = match img {
        DynamicImage::ImageLuma16(g) => g.into_raw().into_iter().map(|p| p as f32 / 65535.0).collect(),
        other => other
            .to_luma8()
            .into_raw()
            .into_iter()
            .map(|p| p as f32 / 255.0)
            .collect(),
    };
    Ok(ShadowMap::from_values(w, h, v).expect("decoded buffer matches its dimensions"))
}

pub fn read_shadow_png(path: impl AsRef<Path>) -> Result<ShadowMap, IoError> {
    decode_shadow_png(&read_file(path.as_ref())?)
}

pub fn encode_rgba_png(img: &RgbaImage) -> Vec<u8> {
    encode(img.as_raw(), img.width(), img.height(), ExtendedColorType::Rgba8)
}

pub fn encode_rgb_png(img: &RgbImage) -> Vec<u8> {
    encode(img.as_raw(), img.width(), img.height(), ExtendedColorType::Rgb8)
}

pub fn decode_rgba(bytes: &[u8]) -> Result<RgbaImage, IoError> {
    Ok(decode(bytes)?.to_rgba8())
}

pub fn decode_rgb(bytes: &[u8]) -> Result<RgbImage, IoError> {
    Ok(decode(bytes)?.to_rgb8())
}

pub fn read_rgba(path: impl AsRef<Path>) -> Result<RgbaImage, IoError> {
    decode_rgba(&read_file(path.as_ref())?)
}

pub fn read_rgb(path: impl AsRef<Path>) -> Result<RgbImage, IoError> {
    decode_rgb(&read_file(path.as_ref())?)
}

/// Mask from a PNG: the alpha channel when present, otherwise any nonzero
/// gray or color value.
pub fn decode_mask(bytes: &[u8]) -> Result<(u32, u32, Vec<bool>), IoError> {
    let img = decode(bytes)?;
    let (w, h) = (img.width(), img.height());
    let mask = if img.color().has_alpha() {
        img.to_rgba16().pixels().map(|p| p.0[3] != 0).collect()
    } else {
        img.to_rgb16().pixels().map(|p| p.0.iter().any(|&c| c != 0)).collect()
    };
    Ok((w, h, mask))
}

pub fn read_mask(path: impl AsRef<Path>) -> Result<(u32, u32, Vec<bool>), IoError> {
    decode_mask(&read_file(path.as_ref())?)
}

pub fn write_png(bytes: &[u8], path: impl AsRef<Path>) -> Result<(), IoError> {
    write_file(path.as_ref(), bytes)
}
