//! Grayscale images and the PGM (P2 / P5) file format.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Row-major grayscale image with intensities in `[0, 1]`.
///
/// `maxval` is the PGM sample range the image was read from (or will be
/// written at). Reading maps a sample `v` to `v / maxval` and writing maps
/// an intensity back with `round(t · maxval)`, so a read/write cycle
/// reproduces the samples exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<f64>,
    maxval: u16,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<f64>, maxval: u16) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyImage);
        }
        if maxval == 0 {
            return Err(Error::Pgm("maxval must be at least 1".into()));
        }
        if pixels.len() != width * height {
            return Err(Error::LengthMismatch {
                expected: width * height,
                got: pixels.len(),
            });
        }
        for (index, &value) in pixels.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::OutOfDomain { index, value, lo: 0.0, hi: 1.0 });
            }
        }
        Ok(Self { width, height, pixels, maxval })
    }

    pub fn constant(width: usize, height: usize, value: f64, maxval: u16) -> Result<Self> {
        Self::new(width, height, vec![value; width * height], maxval)
    }

    /// Builds an image from a function of `(column, row)`.
    pub fn from_fn(
        width: usize,
        height: usize,
        maxval: u16,
        f: impl Fn(usize, usize) -> f64,
    ) -> Result<Self> {
        let pixels = (0..height)
            .flat_map(|r| (0..width).map(move |c| (c, r)))
            .map(|(c, r)| f(c, r))
            .collect();
        Self::new(width, height, pixels, maxval)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn maxval(&self) -> u16 {
        self.maxval
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn get(&self, col: usize, row: usize) -> f64 {
        self.pixels[row * self.width + col]
    }

    /// Adds `c` to every pixel.
    pub fn shifted(&self, c: f64) -> Result<Self> {
        Self::new(
            self.width,
            self.height,
            self.pixels.iter().map(|t| t + c).collect(),
            self.maxval,
        )
    }

    /// Samples at the image's `maxval`.
    pub fn samples(&self) -> Vec<u16> {
        let m = self.maxval as f64;
        self.pixels.iter().map(|t| (t * m).round() as u16).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PgmFormat {
    /// ASCII samples.
    P2,
    /// Binary samples, big-endian when `maxval > 255`.
    P5,
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
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

    fn number(&mut self, what: &str) -> Result<u32> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Pgm(if self.pos >= self.bytes.len() {
                format!("unexpected end of file reading {what}")
            } else {
                format!("expected {what} at byte {start}")
            }));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| Error::Pgm(format!("{what} out of range at byte {start}")))
    }
}

/// Parses a P2 or P5 image.
pub fn read_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let format = match bytes.get(..2) {
        Some(b"P2") => PgmFormat::P2,
        Some(b"P5") => PgmFormat::P5,
        Some(m) => {
            return Err(Error::Pgm(format!(
                "unsupported magic number '{}'",
                String::from_utf8_lossy(m)
            )))
        }
        None => return Err(Error::Pgm("file too short for a PGM header".into())),
    };
    let mut cur = Cursor { bytes, pos: 2 };
    if cur.pos < bytes.len() && !bytes[cur.pos].is_ascii_whitespace() && bytes[cur.pos] != b'#' {
        return Err(Error::Pgm("malformed magic number".into()));
    }
    let width = cur.number("width")? as usize;
    let height = cur.number("height")? as usize;
    let maxval = cur.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::EmptyImage);
    }
    if maxval == 0 || maxval > 65535 {
        return Err(Error::Pgm(format!("maxval {maxval} outside 1..=65535")));
    }
    let count = width
        .checked_mul(height)
        .ok_or_else(|| Error::Pgm("image dimensions overflow".into()))?;

    let samples: Vec<u32> = match format {
        PgmFormat::P2 => {
            let mut v = Vec::with_capacity(count);
            for i in 0..count {
                v.push(cur.number(&format!("sample {i}"))?);
            }
            v
        }
        PgmFormat::P5 => {
            // Exactly one whitespace byte separates the header from the data.
            match bytes.get(cur.pos) {
                Some(c) if c.is_ascii_whitespace() => cur.pos += 1,
                _ => return Err(Error::Pgm("missing whitespace after maxval".into())),
            }
            let wide = maxval > 255;
            let need = count * if wide { 2 } else { 1 };
            let data = &bytes[cur.pos..];
            if data.len() < need {
                return Err(Error::Pgm(format!(
                    "truncated payload: expected {need} bytes, found {}",
                    data.len()
                )));
            }
            if wide {
                data[..need]
                    .chunks_exact(2)
                    .map(|b| u16::from_be_bytes([b[0], b[1]]) as u32)
                    .collect()
            } else {
                data[..need].iter().map(|&b| b as u32).collect()
            }
        }
    };
    let m = maxval as f64;
    let mut pixels = Vec::with_capacity(count);
    for (i, s) in samples.into_iter().enumerate() {
        if s > maxval {
            return Err(Error::Pgm(format!("sample {i} is {s}, above maxval {maxval}")));
        }
        pixels.push(s as f64 / m);
    }
    GrayImage::new(width, height, pixels, maxval as u16)
}

/// Encodes with a minimal header: `P5\n<w> <h>\n<maxval>\n`. P2 output
/// writes one image row per line.
pub fn write_pgm(img: &GrayImage, format: PgmFormat) -> Vec<u8> {
    let samples = img.samples();
    let magic = match format {
        PgmFormat::P2 => "P2",
        PgmFormat::P5 => "P5",
    };
    let mut out = format!("{magic}\n{} {}\n{}\n", img.width, img.height, img.maxval).into_bytes();
    match format {
        PgmFormat::P2 => {
            for row in samples.chunks(img.width) {
                let line: Vec<String> = row.iter().map(|s| s.to_string()).collect();
                out.extend_from_slice(line.join(" ").as_bytes());
                out.push(b'\n');
            }
        }
        PgmFormat::P5 => {
            if img.maxval > 255 {
                for s in samples {
                    out.extend_from_slice(&s.to_be_bytes());
                }
            } else {
                out.extend(samples.into_iter().map(|s| s as u8));
            }
        }
    }
    out
}
