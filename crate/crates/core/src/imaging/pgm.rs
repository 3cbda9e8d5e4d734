//! Binary PGM (P5), maxval 255.

use super::Image;
use crate::error::{Error, Result};

pub fn write_pgm(img: &Image) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(img.pixels());
    out
}

pub fn read_pgm(bytes: &[u8]) -> Result<Image> {
    let mut cur = Cursor { bytes, pos: 0 };
    let magic = cur.token()?;
    if magic != b"P5" {
        return Err(Error::Pgm("expected binary P5 magic".into()));
    }
    let width = cur.number("width")?;
    let height = cur.number("height")?;
    let maxval = cur.number("maxval")?;
    if maxval != 255 {
        return Err(Error::Pgm(format!(
            "unsupported maxval {maxval}, expected 255"
        )));
    }
    // Exactly one whitespace byte separates the header from the raster.
    match bytes.get(cur.pos) {
        Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
        _ => return Err(Error::Pgm("missing whitespace after maxval".into())),
    }
    let need = width
        .checked_mul(height)
        .ok_or_else(|| Error::Pgm("dimensions overflow".into()))?;
    let raster = &bytes[cur.pos..];
    if raster.len() < need {
        return Err(Error::Pgm(format!(
            "truncated payload: {} of {need} bytes",
            raster.len()
        )));
    }
    Image::new(width, height, raster[..need].to_vec())
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_space(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn token(&mut self) -> Result<&'a [u8]> {
        self.skip_space();
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| !b.is_ascii_whitespace())
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Pgm("unexpected end of header".into()));
        }
        Ok(&self.bytes[start..self.pos])
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        let tok = self.token()?;
        std::str::from_utf8(tok)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Pgm(format!("bad {what} field")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_layout() {
        let img = Image::new(2, 2, vec![1, 2, 3, 250]).unwrap();
        let bytes = write_pgm(&img);
        let mut expect = b"P5\n2 2\n255\n".to_vec();
        expect.extend_from_slice(&[1, 2, 3, 250]);
        assert_eq!(bytes, expect);
        assert_eq!(write_pgm(&read_pgm(&bytes).unwrap()), bytes);
    }

    #[test]
    fn header_comments_are_skipped() {
        let mut bytes = b"P5\n# made by hand\n3 1\n255\n".to_vec();
        bytes.extend_from_slice(&[9, 8, 7]);
        let img = read_pgm(&bytes).unwrap();
        assert_eq!(img.pixels(), &[9, 8, 7]);
    }

    #[test]
    fn rejects_bad_inputs() {
        let mut wide = b"P5\n1 1\n65535\n".to_vec();
        wide.extend_from_slice(&[0, 0]);
        assert!(matches!(read_pgm(&wide), Err(Error::Pgm(_))));
        assert!(read_pgm(b"P2\n1 1\n255\n0").is_err());
        assert!(read_pgm(b"P5\n4 4\n255\n\x00\x01").is_err());
        assert!(read_pgm(b"P5\nx 4\n255\n").is_err());
        assert!(read_pgm(b"").is_err());
    }
}
