//! Binary PGM (`P5`, maxval 255) reading and writing.

use std::fs;
use std::path::Path;

use nonmono_core::deblur::GrayImage;

#[derive(Debug, thiserror::Error)]
pub enum PgmError {
    #[error("unsupported format `{0}`: only binary PGM (P5) is supported")]
    UnsupportedFormat(String),
    #[error("malformed PGM header: {0}")]
    MalformedHeader(&'static str),
    #[error("unsupported maxval {0}: only 255 is supported")]
    MaxVal(u32),
    #[error("truncated pixel data: expected {expected} bytes, got {actual}")]
    Truncated { expected: usize, actual: usize },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Header<'_> {
    fn skip_space_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                c if c.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn number(&mut self, what: &'static str) -> Result<u32, PgmError> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or(PgmError::MalformedHeader(what))
    }
}

pub fn decode(bytes: &[u8]) -> Result<GrayImage, PgmError> {
    if bytes.len() < 2 || bytes[0] != b'P' {
        return Err(PgmError::MalformedHeader("missing magic number"));
    }
    if bytes[1] != b'5' {
        let magic = String::from_utf8_lossy(&bytes[..2]).into_owned();
        return Err(PgmError::UnsupportedFormat(magic));
    }
    let mut h = Header { bytes, pos: 2 };
    let width = h.number("width")? as usize;
    let height = h.number("height")? as usize;
    let maxval = h.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(PgmError::MalformedHeader("zero image dimension"));
    }
    if maxval != 255 {
        return Err(PgmError::MaxVal(maxval));
    }
    // exactly one whitespace byte separates the header from the raster
    match bytes.get(h.pos) {
        Some(c) if c.is_ascii_whitespace() => h.pos += 1,
        _ => return Err(PgmError::MalformedHeader("no whitespace after maxval")),
    }
    let data = &bytes[h.pos..];
    let expected = width * height;
    if data.len() < expected {
        return Err(PgmError::Truncated {
            expected,
            actual: data.len(),
        });
    }
    let pixels = data[..expected].iter().map(|&b| f64::from(b)).collect();
    Ok(GrayImage::new(width, height, pixels).expect("dimensions checked above"))
}

/// Pixels are rounded and clamped to `0..=255`.
pub fn encode(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width, img.height).into_bytes();
    out.extend(img.pixels.iter().map(|&v| v.round().clamp(0.0, 255.0) as u8));
    out
}

pub fn read(path: &Path) -> Result<GrayImage, PgmError> {
    let bytes = fs::read(path).map_err(|source| PgmError::Io {
        path: path.display().to_string(),
        source,
    })?;
    decode(&bytes)
}

pub fn write(img: &GrayImage, path: &Path) -> Result<(), PgmError> {
    fs::write(path, encode(img)).map_err(|source| PgmError::Io {
        path: path.display().to_string(),
        source,
    })
}
