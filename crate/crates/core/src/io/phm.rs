use std::path::Path;

use super::{read_file, write_file, IoError};
use crate::heightmap::HeightMap;
use crate::shadow::ReceiverMap;

pub const PHM_MAGIC: &[u8; 4] = b"PHM1";
const HEADER: usize = 12;

/// Serializes a height map. Pixels outside the mask are stored as NaN.
pub fn encode_phm(map: &HeightMap) -> Vec<u8> {
    let (w, h) = map.dimensions();
    let mut out = Vec::with_capacity(HEADER + 4 * w as usize * h as usize);
    out.extend_from_slice(PHM_MAGIC);
    out.extend_from_slice(&w.to_le_bytes());
    out.extend_from_slice(&h.to_le_bytes());
    for (&m, &v) in map.mask().iter().zip(map.heights()) {
        let v = if m { v } else { f32::NAN };
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

fn decode_raw(bytes: &[u8]) -> Result<(u32, u32, Vec<f32>), IoError> {
    if bytes.len() < 4 || &bytes[..4] != PHM_MAGIC {
        return Err(IoError::BadMagic);
    }
    if bytes.len() < HEADER {
        return Err(IoError::TruncatedPayload {
            expected: HEADER,
            got: bytes.len(),
        });
    }
    let w = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
    let h = u32::from_le_bytes(bytes[8..12].try_into().unwrap());
    let payload = &bytes[HEADER..];
    let expected = (w as usize)
        .checked_mul(h as usize)
        .and_then(|n| n.checked_mul(4))
        .ok_or(IoError::TruncatedPayload {
            expected: usize::MAX,
            got: payload.len(),
        })?;
    if payload.len() < expected {
        return Err(IoError::TruncatedPayload {
            expected,
            got: payload.len(),
        });
    }
    if payload.len() > expected {
        return Err(IoError::TrailingBytes(payload.len() - expected));
    }
    let values = payload
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok((w, h, values))
}

fn check_value(i: usize, w: u32, v: f32) -> Result<(), IoError> {
    let (x, y) = ((i % w as usize) as u32, (i / w as usize) as u32);
    if v.is_infinite() {
        return Err(IoError::NonFiniteHeight { x, y });
    }
    if v < 0.0 {
        return Err(IoError::NegativeHeight { x, y });
    }
    Ok(())
}

pub fn decode_phm(bytes: &[u8]) -> Result<HeightMap, IoError> {
    let (w, h, values) = decode_raw(bytes)?;
    let mut mask = Vec::with_capacity(values.len());
    let mut heights = Vec::with_capacity(values.len());
    for (i, v) in values.into_iter().enumerate() {
        if v.is_nan() {
            mask.push(false);
            heights.push(0.0);
        } else {
            check_value(i, w, v)?;
            mask.push(true);
            heights.push(v);
        }
    }
    Ok(HeightMap::from_parts(w, h, mask, heights).expect("validated payload"))
}

/// Reads a receiver height map; NaN pixels are ground.
pub fn decode_receiver_phm(bytes: &[u8]) -> Result<ReceiverMap, IoError> {
    let (w, h, mut values) = decode_raw(bytes)?;
    for (i, v) in values.iter_mut().enumerate() {
        if v.is_nan() {
            *v = 0.0;
        } else {
            check_value(i, w, *v)?;
        }
    }
    Ok(ReceiverMap::from_values(w, h, values).expect("validated payload"))
}

pub fn read_phm(path: impl AsRef<Path>) -> Result<HeightMap, IoError> {
    decode_phm(&read_file(path.as_ref())?)
}

pub fn read_receiver_phm(path: impl AsRef<Path>) -> Result<ReceiverMap, IoError> {
    decode_receiver_phm(&read_file(path.as_ref())?)
}

pub fn write_phm(map: &HeightMap, path: impl AsRef<Path>) -> Result<(), IoError> {
    write_file(path.as_ref(), &encode_phm(map))
}
