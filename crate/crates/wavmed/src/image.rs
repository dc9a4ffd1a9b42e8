//! Grayscale image type and binary PGM (P5) file I/O.
//!
//! Intensities are kept as real values throughout the processing pipeline;
//! quantization to bytes happens only in [`GrayImage::clip_round`] and on
//! file save. The interchange format is binary PGM with maxval 255:
//! an ASCII header `P5\n<width> <height>\n255\n` followed by
//! `width * height` raw bytes, row-major.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::plane::Plane;

/// A grayscale image: a plane of finite real intensities with nominal range
/// 0-255 and dimensions of at least 2x2.
///
/// Images are immutable values; every operation returns a new image.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    plane: Plane,
}

impl GrayImage {
    /// Build an image from row-major real intensities.
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width < 2 || height < 2 {
            return Err(Error::InvalidDimensions {
                width,
                height,
                min_width: 2,
                min_height: 2,
            });
        }
        Ok(Self {
            plane: Plane::new(width, height, data)?,
        })
    }

    /// Build an image from raw bytes (each byte becomes a real intensity).
    pub fn from_bytes(width: usize, height: usize, bytes: &[u8]) -> Result<Self> {
        Self::new(width, height, bytes.iter().map(|&b| f64::from(b)).collect())
    }

    /// Build an image computed cell-by-cell from `f(row, col)`.
    pub fn from_fn(
        width: usize,
        height: usize,
        f: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self> {
        if width < 2 || height < 2 {
            return Err(Error::InvalidDimensions {
                width,
                height,
                min_width: 2,
                min_height: 2,
            });
        }
        Ok(Self {
            plane: Plane::from_fn(width, height, f)?,
        })
    }

    pub(crate) fn from_plane(plane: Plane) -> Self {
        debug_assert!(plane.width() >= 2 && plane.height() >= 2);
        Self { plane }
    }

    pub fn width(&self) -> usize {
        self.plane.width()
    }

    pub fn height(&self) -> usize {
        self.plane.height()
    }

    pub fn plane(&self) -> &Plane {
        &self.plane
    }

    pub fn data(&self) -> &[f64] {
        self.plane.data()
    }

    /// Clip every intensity to [0, 255] and round half-up to the nearest
    /// integer. Values already integral and in range are unchanged.
    pub fn clip_round(&self) -> GrayImage {
        GrayImage {
            plane: self.plane.map(clip_round_value),
        }
    }

    /// Quantized pixel bytes (clip + round applied).
    pub fn to_bytes(&self) -> Vec<u8> {
        self.plane
            .data()
            .iter()
            .map(|&v| clip_round_value(v) as u8)
            .collect()
    }

    /// Load a binary PGM (magic `P5`, maxval 255) file.
    ///
    /// Header tokens may be separated by any whitespace and `#` comments are
    /// skipped, per the PNM convention. ASCII PGM (`P2`) is rejected.
    pub fn load_pgm(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = fs::read(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        parse_pgm(path, &bytes)
    }

    /// Write the image as binary PGM with maxval 255. Intensities are
    /// clipped and rounded half-up for storage.
    pub fn save_pgm(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut out = Vec::with_capacity(32 + self.plane.len());
        write!(out, "P5\n{} {}\n255\n", self.width(), self.height()).expect("write to Vec");
        out.extend(self.to_bytes());
        let mut file = fs::File::create(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        file.write_all(&out).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

/// Clip to [0, 255], then round half-up (0.5 goes to 1).
fn clip_round_value(v: f64) -> f64 {
    (v.clamp(0.0, 255.0) + 0.5).floor()
}

fn parse_pgm(path: &Path, bytes: &[u8]) -> Result<GrayImage> {
    let header_err = |detail: &str| Error::PgmHeader {
        path: path.to_path_buf(),
        detail: detail.to_string(),
    };

    if bytes.len() < 2 || &bytes[..2] != b"P5" {
        let magic = String::from_utf8_lossy(&bytes[..bytes.len().min(2)]).into_owned();
        return Err(header_err(&format!(
            "expected magic \"P5\", found {magic:?}"
        )));
    }

    let mut pos = 2;
    let mut next_token = |what: &str| -> Result<usize> {
        // skip whitespace and '#' comments
        loop {
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos < bytes.len() && bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
            } else {
                break;
            }
        }
        let start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        if start == pos {
            return Err(header_err(&format!("missing {what}")));
        }
        std::str::from_utf8(&bytes[start..pos])
            .ok()
            .and_then(|s| s.parse::<usize>().ok())
            .ok_or_else(|| header_err(&format!("unparseable {what}")))
    };

    let width = next_token("width")?;
    let height = next_token("height")?;
    let maxval = next_token("maxval")?;
    if maxval != 255 {
        return Err(Error::PgmMaxval {
            path: path.to_path_buf(),
            maxval: maxval as u32,
        });
    }
    // exactly one whitespace byte separates the header from the payload
    if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
        return Err(header_err("missing whitespace after maxval"));
    }
    pos += 1;

    let expected = width
        .checked_mul(height)
        .ok_or_else(|| header_err("dimensions overflow"))?;
    let payload = &bytes[pos..];
    if payload.len() < expected {
        return Err(Error::PgmTruncated {
            path: path.to_path_buf(),
            expected,
            found: payload.len(),
        });
    }
    GrayImage::from_bytes(width, height, &payload[..expected])
}
