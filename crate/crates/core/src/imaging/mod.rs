//! Grayscale cover images and their first- and second-order pixel statistics.

mod cover;
mod pgm;

pub use cover::{generate_cover, generate_cover_with, CoverModel, CoverParams};
pub use pgm::{read_pgm, write_pgm};

use crate::error::{Error, Result};

/// 8-bit grayscale image, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Image {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl Image {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if pixels.len() != width * height {
            return Err(Error::Dimensions {
                width,
                height,
                reason: "pixel count does not match width*height",
            });
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        Self {
            width,
            height,
            pixels: vec![value; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Total pixel count `M`.
    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn pixels_mut(&mut self) -> &mut [u8] {
        &mut self.pixels
    }

    #[inline]
    pub fn at(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.width + col]
    }

    /// Pixel at `(row, col)` with out-of-range coordinates clamped onto the
    /// nearest edge.
    #[inline]
    pub fn at_clamped(&self, row: isize, col: isize) -> u8 {
        let r = row.clamp(0, self.height as isize - 1) as usize;
        let c = col.clamp(0, self.width as isize - 1) as usize;
        self.at(r, c)
    }
}

impl std::fmt::Debug for Image {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Image")
            .field("width", &self.width)
            .field("height", &self.height)
            .finish_non_exhaustive()
    }
}

/// Intensity histogram.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Counts256(pub [u64; 256]);

impl Counts256 {
    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }
}

impl Default for Counts256 {
    fn default() -> Self {
        Self([0; 256])
    }
}

/// Horizontal neighbour co-occurrence counts, indexed `[left * 256 + right]`.
#[derive(Clone, PartialEq, Eq)]
pub struct Cooc256(Box<[u64]>);

impl Cooc256 {
    pub fn zeros() -> Self {
        Self(vec![0; 256 * 256].into_boxed_slice())
    }

    #[inline]
    pub fn get(&self, left: u8, right: u8) -> u64 {
        self.0[left as usize * 256 + right as usize]
    }

    pub fn add(&mut self, left: u8, right: u8, n: u64) {
        self.0[left as usize * 256 + right as usize] += n;
    }

    pub fn cells(&self) -> &[u64] {
        &self.0
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }
}

impl std::fmt::Debug for Cooc256 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Cooc256(total={})", self.total())
    }
}

pub fn histogram(img: &Image) -> Counts256 {
    let mut c = Counts256::default();
    for &p in img.pixels() {
        c.0[p as usize] += 1;
    }
    c
}

pub fn cooccurrence(img: &Image) -> Result<Cooc256> {
    if img.width() < 2 {
        return Err(Error::Dimensions {
            width: img.width(),
            height: img.height(),
            reason: "co-occurrence needs width >= 2",
        });
    }
    let mut m = Cooc256::zeros();
    for row in img.pixels().chunks_exact(img.width()) {
        for pair in row.windows(2) {
            m.0[pair[0] as usize * 256 + pair[1] as usize] += 1;
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngState;
    use proptest::prelude::*;

    #[test]
    fn histogram_examples() {
        let h = histogram(&Image::filled(2, 2, 0));
        assert_eq!(h.0[0], 4);
        assert_eq!(h.total(), 4);

        let img = Image::new(2, 2, vec![0, 1, 1, 255]).unwrap();
        let h = histogram(&img);
        assert_eq!((h.0[0], h.0[1], h.0[255]), (1, 2, 1));
        assert_eq!(h.total(), 4);
    }

    #[test]
    fn cooccurrence_examples() {
        let m = cooccurrence(&Image::filled(5, 3, 77)).unwrap();
        assert_eq!(m.get(77, 77), 3 * 4);
        assert_eq!(m.total(), 12);

        let m = cooccurrence(&Image::new(2, 1, vec![3, 7]).unwrap()).unwrap();
        assert_eq!(m.get(3, 7), 1);
        assert_eq!(m.total(), 1);

        assert!(cooccurrence(&Image::filled(1, 4, 0)).is_err());
    }

    #[test]
    fn rejects_mismatched_buffer() {
        assert!(Image::new(3, 3, vec![0; 8]).is_err());
    }

    proptest! {
        #[test]
        fn counts_are_conserved(w in 2usize..40, h in 1usize..40, seed: u64) {
            let mut st = RngState::new(seed);
            let px = (0..w * h).map(|_| st.next_u64() as u8).collect();
            let img = Image::new(w, h, px).unwrap();
            prop_assert_eq!(histogram(&img).total(), (w * h) as u64);
            prop_assert_eq!(cooccurrence(&img).unwrap().total(), (h * (w - 1)) as u64);
        }
    }
}
