//! Portable graymap (PGM) rasters: binary `P5` (8/16-bit) and ASCII `P2`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::field::Raster;
use crate::grid::GridSpec;
use crate::mask::PhaseMask;
use crate::scalar::Real;

/// Decoded graymap; samples widened to `u16`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PgmImage {
    pub width: usize,
    pub height: usize,
    pub maxval: u16,
    pub data: Vec<u16>,
}

pub fn write_pgm8<W: Write>(mut w: W, width: usize, height: usize, data: &[u8]) -> Result<()> {
    if data.len() != width * height {
        return Err(Error::shape("PGM data does not match its dimensions"));
    }
    write!(w, "P5\n{width} {height}\n255\n")?;
    w.write_all(data)?;
    w.flush()?;
    Ok(())
}

pub fn write_pgm16<W: Write>(mut w: W, width: usize, height: usize, data: &[u16]) -> Result<()> {
    if data.len() != width * height {
        return Err(Error::shape("PGM data does not match its dimensions"));
    }
    write!(w, "P5\n{width} {height}\n65535\n")?;
    let bytes: Vec<u8> = data.iter().flat_map(|v| v.to_be_bytes()).collect();
    w.write_all(&bytes)?;
    w.flush()?;
    Ok(())
}

/// Phase mask as 8-bit grayscale, `value = round(phase/2π · 255)`.
pub fn encode_mask<T: Real>(mask: &PhaseMask<T>) -> Vec<u8> {
    mask.phase()
        .iter()
        .map(|&p| (p / T::TAU() * T::lit(255.0)).round().to_u8().unwrap_or(255))
        .collect()
}

pub fn write_mask_pgm<T: Real>(path: impl AsRef<Path>, mask: &PhaseMask<T>) -> Result<()> {
    let g = mask.grid();
    write_pgm8(BufWriter::new(File::create(path)?), g.nx(), g.ny(), &encode_mask(mask))
}

/// Decodes `phase = value/255 · 2π` onto `grid`; 255 wraps to 0.
pub fn decode_mask<T: Real>(img: &PgmImage, grid: GridSpec<T>) -> Result<PhaseMask<T>> {
    if img.width != grid.nx() || img.height != grid.ny() {
        return Err(Error::shape(format!(
            "mask image is {}x{} but the grid is {}x{}",
            img.width,
            img.height,
            grid.nx(),
            grid.ny()
        )));
    }
    if img.maxval != 255 {
        return Err(Error::format(format!("phase masks must be 8-bit (maxval 255), got {}", img.maxval)));
    }
    let scale = T::TAU() / T::lit(255.0);
    let phase = img.data.iter().map(|&v| T::from_u16(v).unwrap() * scale).collect();
    Ok(PhaseMask::new(grid, phase)?.with_levels(255))
}

pub fn read_mask_pgm<T: Real>(path: impl AsRef<Path>, grid: GridSpec<T>) -> Result<PhaseMask<T>> {
    decode_mask(&read_pgm(path)?, grid)
}

/// Linear 16-bit export scaled so that the raster maximum maps to 65535.
/// Returns the scale (intensity of a full-scale pixel) for the sidecar.
pub fn write_intensity_pgm16<T: Real>(path: impl AsRef<Path>, raster: &Raster<T>) -> Result<f64> {
    let max = raster.max().to_f64_lossy();
    let scale = if max > 0.0 { max } else { 1.0 };
    let data: Vec<u16> = raster
        .values
        .iter()
        .map(|v| (v.to_f64_lossy().max(0.0) / scale * 65535.0).round().min(65535.0) as u16)
        .collect();
    write_pgm16(BufWriter::new(File::create(path)?), raster.grid.nx(), raster.grid.ny(), &data)?;
    Ok(scale)
}

struct Tokens<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Tokens<'a> {
    fn next(&mut self) -> Result<&'a str> {
        loop {
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
            if self.pos < self.bytes.len() && self.bytes[self.pos] == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
                continue;
            }
            break;
        }
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::format("unexpected end of PGM data"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos]).map_err(|_| Error::format("non-ASCII PGM header"))
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        let t = self.next()?;
        t.parse().map_err(|_| Error::format(format!("bad PGM {what}: {t}")))
    }
}

pub fn decode_pgm(bytes: &[u8]) -> Result<PgmImage> {
    let mut t = Tokens { bytes, pos: 0 };
    let magic = t.next()?;
    let binary = match magic {
        "P5" => true,
        "P2" => false,
        other => return Err(Error::format(format!("not a PGM file (magic {other:?})"))),
    };
    let width = t.number("width")?;
    let height = t.number("height")?;
    let maxval = t.number("maxval")?;
    if width == 0 || height == 0 || maxval == 0 || maxval > 65535 {
        return Err(Error::format(format!("invalid PGM header {width}x{height} maxval {maxval}")));
    }
    let n = width * height;
    let data = if binary {
        // Exactly one whitespace byte separates the header from the raster.
        let start = t.pos + 1;
        let wide = maxval > 255;
        let need = if wide { 2 * n } else { n };
        let raster = bytes
            .get(start..start + need)
            .ok_or_else(|| Error::format("PGM raster truncated"))?;
        if wide {
            raster.chunks_exact(2).map(|b| u16::from_be_bytes([b[0], b[1]])).collect()
        } else {
            raster.iter().map(|&b| b as u16).collect()
        }
    } else {
        (0..n).map(|_| t.number("sample").map(|v| v as u16)).collect::<Result<Vec<_>>>()?
    };
    if data.iter().any(|&v| v as usize > maxval) {
        return Err(Error::format("PGM sample exceeds maxval"));
    }
    Ok(PgmImage { width, height, maxval: maxval as u16, data })
}

pub fn read_pgm(path: impl AsRef<Path>) -> Result<PgmImage> {
    let mut bytes = Vec::new();
    BufReader::new(File::open(path)?).read_to_end(&mut bytes)?;
    decode_pgm(&bytes)
}
