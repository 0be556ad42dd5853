//! Field snapshots: a raw coefficient blob plus a JSON sidecar header.
//!
//! The blob holds `M^d` complex numbers in k-lexicographic order (each axis
//! from `-K` to `K`, last axis fastest), each as a little-endian `f64` real
//! part followed by a little-endian `f64` imaginary part. The sidecar is
//! `{"d": .., "K": .., "real_flag": .., "component": ..}`.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::TorusField;
use super::grid::GridSpec;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnapshotHeader {
    pub d: usize,
    #[serde(rename = "K")]
    pub degree: usize,
    pub real_flag: bool,
    pub component: String,
}

/// Paths of the blob (`<stem>.bin`) and sidecar (`<stem>.json`).
pub fn snapshot_paths(stem: &Path) -> (PathBuf, PathBuf) {
    (stem.with_extension("bin"), stem.with_extension("json"))
}

pub fn encode_coefficients(field: &TorusField) -> Vec<u8> {
    let grid = field.grid();
    let coeff = field.coefficients();
    let mut bytes = Vec::with_capacity(16 * grid.len());
    for index in grid.lexicographic_indices() {
        bytes.extend_from_slice(&coeff[index].re.to_le_bytes());
        bytes.extend_from_slice(&coeff[index].im.to_le_bytes());
    }
    bytes
}

pub fn decode_coefficients(bytes: &[u8], grid: GridSpec, real: bool) -> Result<TorusField> {
    if bytes.len() != 16 * grid.len() {
        return Err(Error::Shape(format!(
            "snapshot blob has {} bytes, expected {}",
            bytes.len(),
            16 * grid.len()
        )));
    }
    let mut coeff = vec![Complex64::default(); grid.len()];
    for (chunk, index) in bytes.chunks_exact(16).zip(grid.lexicographic_indices()) {
        let re = f64::from_le_bytes(chunk[..8].try_into().expect("8 bytes"));
        let im = f64::from_le_bytes(chunk[8..].try_into().expect("8 bytes"));
        coeff[index] = Complex64::new(re, im);
    }
    TorusField::from_coefficients(grid, coeff, real)
}

pub fn write_snapshot(field: &TorusField, stem: &Path, component: &str) -> Result<()> {
    let (bin, json) = snapshot_paths(stem);
    let header = SnapshotHeader {
        d: field.grid().dim(),
        degree: field.grid().degree(),
        real_flag: field.is_real(),
        component: component.to_owned(),
    };
    fs::write(&bin, encode_coefficients(field)).map_err(|e| Error::io(&bin, e))?;
    let text = serde_json::to_string_pretty(&header).map_err(|e| Error::json(&json, e))?;
    fs::write(&json, text).map_err(|e| Error::io(&json, e))?;
    Ok(())
}

pub fn read_snapshot(stem: &Path) -> Result<(SnapshotHeader, TorusField)> {
    let (bin, json) = snapshot_paths(stem);
    let text = fs::read_to_string(&json).map_err(|e| Error::io(&json, e))?;
    let header: SnapshotHeader = serde_json::from_str(&text).map_err(|e| Error::json(&json, e))?;
    let grid = GridSpec::new(header.d, header.degree)?;
    let bytes = fs::read(&bin).map_err(|e| Error::io(&bin, e))?;
    let field = decode_coefficients(&bytes, grid, header.real_flag)?;
    Ok((header, field))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blob_layout_is_lexicographic_little_endian() {
        let grid = GridSpec::new(1, 1).unwrap();
        let field = TorusField::from_fn(grid, false, |k| Complex64::new(k[0] as f64, 10.0));
        let bytes = encode_coefficients(&field);
        assert_eq!(bytes.len(), 48);
        assert_eq!(f64::from_le_bytes(bytes[0..8].try_into().unwrap()), -1.0);
        assert_eq!(f64::from_le_bytes(bytes[8..16].try_into().unwrap()), 10.0);
        assert_eq!(f64::from_le_bytes(bytes[16..24].try_into().unwrap()), 0.0);
        assert_eq!(f64::from_le_bytes(bytes[32..40].try_into().unwrap()), 1.0);
    }

    #[test]
    fn header_field_names() {
        let header = SnapshotHeader {
            d: 3,
            degree: 4,
            real_flag: true,
            component: "u".into(),
        };
        let v: serde_json::Value = serde_json::to_value(&header).unwrap();
        assert_eq!(v["K"], 4);
        assert_eq!(v["d"], 3);
        assert_eq!(v["real_flag"], true);
        assert_eq!(v["component"], "u");
    }

    #[test]
    fn short_blob_is_rejected() {
        let grid = GridSpec::new(2, 1).unwrap();
        assert!(matches!(
            decode_coefficients(&[0u8; 16], grid, true),
            Err(Error::Shape(_))
        ));
    }
}
