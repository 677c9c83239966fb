//! Binary PPM (P6) and PGM (P5) with maxval 255.

use std::io::Write;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image {
    pub width: usize,
    pub height: usize,
    /// Row-major RGB.
    pub pixels: Vec<[u8; 3]>,
}

impl Image {
    pub fn new(width: usize, height: usize, pixels: Vec<[u8; 3]>) -> Result<Self> {
        if pixels.len() != width * height {
            return Err(Error::InvalidSpec(format!("{} pixels for a {width}x{height} image", pixels.len())));
        }
        Ok(Image { width, height, pixels })
    }

    pub fn filled(width: usize, height: usize, rgb: [u8; 3]) -> Self {
        Image { width, height, pixels: vec![rgb; width * height] }
    }

    pub fn get(&self, col: usize, row: usize) -> [u8; 3] {
        self.pixels[row * self.width + col]
    }

    pub fn set(&mut self, col: usize, row: usize, rgb: [u8; 3]) {
        self.pixels[row * self.width + col] = rgb;
    }

    pub fn parse_ppm(bytes: &[u8]) -> Result<Self> {
        let (width, height, start) = parse_header(bytes, b"P6")?;
        let body = payload(bytes, start, width * height * 3)?;
        let pixels = body.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect();
        Ok(Image { width, height, pixels })
    }

    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.pixels.len() * 3 + 20);
        let _ = write!(out, "P6\n{} {}\n255\n", self.width, self.height);
        out.extend(self.pixels.iter().flatten());
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

impl GrayImage {
    pub fn parse_pgm(bytes: &[u8]) -> Result<Self> {
        let (width, height, start) = parse_header(bytes, b"P5")?;
        let pixels = payload(bytes, start, width * height)?.to_vec();
        Ok(GrayImage { width, height, pixels })
    }

    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.pixels.len() + 20);
        let _ = write!(out, "P5\n{} {}\n255\n", self.width, self.height);
        out.extend(&self.pixels);
        out
    }
}

fn parse_error(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse { offset, message: message.into() }
}

fn payload(bytes: &[u8], start: usize, len: usize) -> Result<&[u8]> {
    let end = start + len;
    if bytes.len() < end {
        return Err(parse_error(bytes.len(), format!("pixel data truncated, expected {len} bytes from offset {start}")));
    }
    Ok(&bytes[start..end])
}

/// Returns width, height and the offset of the first pixel byte.
fn parse_header(bytes: &[u8], magic: &[u8; 2]) -> Result<(usize, usize, usize)> {
    if bytes.len() < 2 || &bytes[..2] != magic {
        return Err(parse_error(0, format!("expected magic {}", String::from_utf8_lossy(magic))));
    }
    let mut pos = 2;
    let mut fields = [0usize; 3];
    for (i, field) in fields.iter_mut().enumerate() {
        // whitespace and comments before each number
        let before = pos;
        loop {
            match bytes.get(pos) {
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&b| b != b'\n') {
                        pos += 1;
                    }
                }
                _ => break,
            }
        }
        if pos == before {
            return Err(parse_error(pos, "expected whitespace in header"));
        }
        let start = pos;
        while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        if start == pos {
            return Err(parse_error(pos, "expected a decimal number in header"));
        }
        *field = std::str::from_utf8(&bytes[start..pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| parse_error(start, "header number out of range"))?;
        if i < 2 && *field == 0 {
            return Err(parse_error(start, "image dimensions must be positive"));
        }
    }
    if fields[2] != 255 {
        return Err(parse_error(pos, format!("maxval {} is not supported, expected 255", fields[2])));
    }
    match bytes.get(pos) {
        Some(b) if b.is_ascii_whitespace() => Ok((fields[0], fields[1], pos + 1)),
        _ => Err(parse_error(pos, "expected a single whitespace byte after maxval")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ppm_round_trip() {
        let img = Image::new(2, 2, vec![[1, 2, 3], [4, 5, 6], [7, 8, 9], [255, 0, 10]]).unwrap();
        let bytes = img.to_ppm();
        assert!(bytes.starts_with(b"P6\n2 2\n255\n"));
        assert_eq!(Image::parse_ppm(&bytes).unwrap(), img);
    }

    #[test]
    fn pgm_round_trip_with_comment() {
        let mut bytes = b"P5 # made by hand\n3 1\n255\n".to_vec();
        bytes.extend([0, 128, 255]);
        let g = GrayImage::parse_pgm(&bytes).unwrap();
        assert_eq!(g.pixels, vec![0, 128, 255]);
        assert_eq!(GrayImage::parse_pgm(&g.to_pgm()).unwrap(), g);
    }

    #[test]
    fn errors_carry_offsets() {
        let err = Image::parse_ppm(b"P5\n1 1\n255\n\0").unwrap_err();
        assert!(matches!(err, Error::Parse { offset: 0, .. }));
        let err = Image::parse_ppm(b"P6\n2 x\n255\n").unwrap_err();
        assert!(matches!(err, Error::Parse { offset: 5, .. }), "{err}");
        let err = Image::parse_ppm(b"P6\n1 1\n65535\n").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
        let err = Image::parse_ppm(b"P6\n2 1\n255\n\x01\x02\x03").unwrap_err();
        assert!(matches!(err, Error::Parse { offset: 14, .. }), "{err}");
    }
}
