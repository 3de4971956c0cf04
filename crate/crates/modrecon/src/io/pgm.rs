//! 8-bit grayscale PGM (P5 binary and P2 ASCII) reading and writing.
//!
//! Only maxval-255 grayscale files are accepted. Writing always produces the
//! canonical P5 header `P5\n<w> <h>\n255\n`, so write(read(f)) is
//! byte-identical for canonical P5 input.

use crate::error::{Error, Result};
use crate::signals::Grid;
use std::path::Path;

/// An 8-bit grayscale image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if pixels.len() != width * height {
            return Err(Error::LengthMismatch {
                expected: width * height,
                got: pixels.len(),
            });
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    /// Real-valued grid (rows = height) for the processing pipeline.
    pub fn to_grid(&self) -> Grid {
        Grid::from_data(
            self.height,
            self.width,
            self.pixels.iter().map(|&p| p as f64).collect(),
        )
        .expect("pixel count matches dimensions")
    }

    /// Clamps to [0, 255], rounds to nearest, and quantizes to 8 bits.
    pub fn from_grid(grid: &Grid) -> Self {
        let pixels = grid
            .data()
            .iter()
            .map(|&v| v.round().clamp(0.0, 255.0) as u8)
            .collect();
        Self {
            width: grid.cols(),
            height: grid.rows(),
            pixels,
        }
    }
}

/// Header token reader: skips whitespace and `#` comments.
struct TokenReader<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> TokenReader<'a> {
    fn new(data: &'a [u8]) -> Self {
        Self { data, pos: 0 }
    }

    fn skip_filler(&mut self) {
        while self.pos < self.data.len() {
            let b = self.data[self.pos];
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while self.pos < self.data.len() && self.data[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    fn next_token(&mut self) -> Result<&'a [u8]> {
        self.skip_filler();
        let start = self.pos;
        while self.pos < self.data.len() && !self.data[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::MalformedHeader("unexpected end of header".into()));
        }
        Ok(&self.data[start..self.pos])
    }

    fn next_number(&mut self, what: &str, max: usize) -> Result<usize> {
        let token = self.next_token()?;
        let text = std::str::from_utf8(token)
            .map_err(|_| Error::MalformedHeader(format!("non-ASCII {what}")))?;
        let value: usize = text
            .parse()
            .map_err(|_| Error::MalformedHeader(format!("bad {what} `{text}`")))?;
        if value == 0 || value > max {
            return Err(Error::MalformedHeader(format!(
                "{what} {value} outside 1..={max}"
            )));
        }
        Ok(value)
    }
}

const MAX_DIMENSION: usize = 1 << 15;

/// Parses a PGM image from raw bytes.
pub fn read_pgm_bytes(data: &[u8]) -> Result<GrayImage> {
    let mut reader = TokenReader::new(data);
    let magic = reader.next_token()?;
    let binary = match magic {
        b"P5" => true,
        b"P2" => false,
        other => {
            return Err(Error::MalformedHeader(format!(
                "unsupported magic `{}` (grayscale P2/P5 only)",
                String::from_utf8_lossy(other)
            )))
        }
    };
    let width = reader.next_number("width", MAX_DIMENSION)?;
    let height = reader.next_number("height", MAX_DIMENSION)?;
    let maxval = reader.next_number("maxval", usize::MAX / 2)?;
    if maxval != 255 {
        return Err(Error::MalformedHeader(format!(
            "maxval {maxval} unsupported (8-bit only)"
        )));
    }
    let count = width * height;

    let pixels = if binary {
        // Exactly one whitespace byte separates the header from the payload.
        if reader.pos >= data.len() || !data[reader.pos].is_ascii_whitespace() {
            return Err(Error::MalformedHeader(
                "missing separator before binary data".into(),
            ));
        }
        let start = reader.pos + 1;
        let payload = &data[start..];
        if payload.len() < count {
            return Err(Error::TruncatedData {
                expected: count,
                got: payload.len(),
            });
        }
        payload[..count].to_vec()
    } else {
        let mut pixels = Vec::with_capacity(count);
        for _ in 0..count {
            reader.skip_filler();
            if reader.pos >= data.len() {
                return Err(Error::TruncatedData {
                    expected: count,
                    got: pixels.len(),
                });
            }
            let token = reader.next_token()?;
            let text = std::str::from_utf8(token)
                .map_err(|_| Error::MalformedHeader("non-ASCII pixel".into()))?;
            let value: u16 = text
                .parse()
                .map_err(|_| Error::MalformedHeader(format!("bad pixel `{text}`")))?;
            if value > 255 {
                return Err(Error::MalformedHeader(format!("pixel {value} above 255")));
            }
            pixels.push(value as u8);
        }
        pixels
    };
    GrayImage::new(width, height, pixels)
}

/// Canonical binary PGM bytes.
pub fn write_pgm_bytes(image: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", image.width(), image.height()).into_bytes();
    out.extend_from_slice(image.pixels());
    out
}

pub fn read_pgm(path: &Path) -> Result<GrayImage> {
    let data = std::fs::read(path)?;
    read_pgm_bytes(&data)
}

pub fn write_pgm(image: &GrayImage, path: &Path) -> Result<()> {
    std::fs::write(path, write_pgm_bytes(image))?;
    Ok(())
}
