//! LSB substitution along a pixel path.

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::imaging::Image;

/// Distinct pixel indices (row-major) into an image.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PositionList(Vec<usize>);

impl PositionList {
    /// Validates distinctness and bounds against an image of `pixels` pixels.
    pub fn new(positions: Vec<usize>, pixels: usize) -> Result<Self> {
        let mut seen = vec![false; pixels];
        for &p in &positions {
            if p >= pixels || seen[p] {
                return Err(Error::Config(format!(
                    "position {p} is out of range or repeated"
                )));
            }
            seen[p] = true;
        }
        Ok(Self(positions))
    }

    pub(crate) fn from_unchecked(positions: Vec<usize>) -> Self {
        Self(positions)
    }

    /// Row-major indices `0..len`.
    pub fn sequential(len: usize, pixels: usize) -> Result<Self> {
        if len > pixels {
            return Err(Error::PathTooLong {
                requested: len,
                available: pixels,
            });
        }
        Ok(Self((0..len).collect()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

#[inline]
pub fn lsb_set(pixel: u8, bit: bool) -> u8 {
    (pixel & !1) | bit as u8
}

/// Writes `payload[i]` into the LSB of pixel `path[i]`. The cover is left
/// untouched; a new image is returned.
pub fn embed_lsb(cover: &Image, payload: &BitVec, path: &PositionList) -> Result<Image> {
    if payload.len() > path.len() {
        return Err(Error::PayloadTooLong {
            payload: payload.len(),
            path: path.len(),
        });
    }
    check_path(cover, path)?;
    let mut stego = cover.clone();
    let px = stego.pixels_mut();
    for (bit, &pos) in payload.iter().zip(path.as_slice()) {
        px[pos] = lsb_set(px[pos], bit);
    }
    Ok(stego)
}

pub fn extract_lsb(stego: &Image, len: usize, path: &PositionList) -> Result<BitVec> {
    if len > path.len() {
        return Err(Error::PayloadTooLong {
            payload: len,
            path: path.len(),
        });
    }
    check_path(stego, path)?;
    let px = stego.pixels();
    Ok(path.as_slice()[..len]
        .iter()
        .map(|&p| px[p] & 1 == 1)
        .collect())
}

fn check_path(img: &Image, path: &PositionList) -> Result<()> {
    if path.len() > img.len() || path.as_slice().iter().any(|&p| p >= img.len()) {
        return Err(Error::PathTooLong {
            requested: path.len(),
            available: img.len(),
        });
    }
    Ok(())
}
