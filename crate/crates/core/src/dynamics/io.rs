//! Binary trajectory container, little-endian:
//!
//! | offset | size | field                          |
//! |--------|------|--------------------------------|
//! | 0      | 4    | magic `LTRJ`                   |
//! | 4      | 2    | version, u16 = 1               |
//! | 6      | 2    | reserved, u16 = 0              |
//! | 8      | 4    | point count, u32               |
//! | 12     | 4    | dimension, u32                 |
//! | 16     | 8·K·n| f64 payload, row-major         |

use std::fs;
use std::path::Path;

use super::{DynError, Result, Trajectory};
use crate::scalar::Scalar;

pub const MAGIC: [u8; 4] = *b"LTRJ";
pub const VERSION: u16 = 1;
const HEADER_LEN: usize = 16;

fn format_err(offset: usize, reason: impl Into<String>) -> DynError {
    DynError::Format { offset, reason: reason.into() }
}

pub fn encode_trajectory<T: Scalar>(traj: &Trajectory<T>) -> Result<Vec<u8>> {
    let count = u32::try_from(traj.len()).map_err(|_| DynError::Param("too many points for a u32 header".into()))?;
    let dim = u32::try_from(traj.dim()).map_err(|_| DynError::Param("dimension exceeds u32".into()))?;
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * traj.as_slice().len());
    out.extend_from_slice(&MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&0u16.to_le_bytes());
    out.extend_from_slice(&count.to_le_bytes());
    out.extend_from_slice(&dim.to_le_bytes());
    for &x in traj.as_slice() {
        out.extend_from_slice(&x.as_f64().to_le_bytes());
    }
    Ok(out)
}

pub fn decode_trajectory<T: Scalar>(bytes: &[u8]) -> Result<Trajectory<T>> {
    if bytes.len() < HEADER_LEN {
        return Err(format_err(bytes.len(), format!("header needs {HEADER_LEN} bytes, file has {}", bytes.len())));
    }
    if bytes[0..4] != MAGIC {
        return Err(format_err(0, "bad magic, expected LTRJ"));
    }
    let u16_at = |o: usize| u16::from_le_bytes([bytes[o], bytes[o + 1]]);
    let u32_at = |o: usize| u32::from_le_bytes([bytes[o], bytes[o + 1], bytes[o + 2], bytes[o + 3]]);
    let version = u16_at(4);
    if version != VERSION {
        return Err(format_err(4, format!("unsupported version {version}")));
    }
    if u16_at(6) != 0 {
        return Err(format_err(6, "reserved field must be zero"));
    }
    let count = u32_at(8) as usize;
    let dim = u32_at(12) as usize;
    if count == 0 {
        return Err(format_err(8, "point count must be positive"));
    }
    if dim == 0 {
        return Err(format_err(12, "dimension must be positive"));
    }
    let expected = count
        .checked_mul(dim)
        .and_then(|v| v.checked_mul(8))
        .ok_or_else(|| format_err(8, "payload size overflows"))?;
    let payload = &bytes[HEADER_LEN..];
    if payload.len() < expected {
        return Err(format_err(
            bytes.len(),
            format!("truncated payload: {} of {expected} bytes ({count} points x {dim})", payload.len()),
        ));
    }
    if payload.len() > expected {
        return Err(format_err(HEADER_LEN + expected, "trailing bytes after payload"));
    }
    let data = payload
        .chunks_exact(8)
        .map(|c| T::of(f64::from_le_bytes(c.try_into().expect("8-byte chunk"))))
        .collect();
    Trajectory::new(dim, data)
}

pub fn write_trajectory<T: Scalar>(traj: &Trajectory<T>, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, encode_trajectory(traj)?)?;
    Ok(())
}

pub fn read_trajectory<T: Scalar>(path: impl AsRef<Path>) -> Result<Trajectory<T>> {
    decode_trajectory(&fs::read(path)?)
}
