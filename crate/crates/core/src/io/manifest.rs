//! Frame manifests: one `angle_degrees filename` pair per line.
//!
//! Blank lines and lines starting with `#` are ignored. Frames may be PGM
//! (`P5`/`P2`, 8 or 16 bit; raw counts are taken as intensity) or single
//! component VBF1 files (real part taken as intensity).

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::io::pgm::decode_pgm;
use crate::io::vbf::read_vbf_from;
use crate::polarimetry::FrameStack;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub angle_degrees: f64,
    pub file: String,
}

pub fn parse_manifest(text: &str) -> Result<Vec<ManifestEntry>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (angle, file) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| Error::format(format!("manifest line {}: expected `angle filename`", n + 1)))?;
        let angle_degrees = angle
            .parse::<f64>()
            .ok()
            .filter(|a| a.is_finite())
            .ok_or_else(|| Error::format(format!("manifest line {}: bad angle {angle:?}", n + 1)))?;
        out.push(ManifestEntry { angle_degrees, file: file.trim().to_string() });
    }
    Ok(out)
}

pub fn write_manifest<W: Write>(mut w: W, entries: &[ManifestEntry]) -> Result<()> {
    for e in entries {
        writeln!(w, "{} {}", e.angle_degrees, e.file)?;
    }
    w.flush()?;
    Ok(())
}

enum Frame {
    Vbf(GridSpec<f64>, Vec<f64>),
    Pgm(usize, usize, Vec<f64>),
}

fn load_frame(path: &Path) -> Result<Frame> {
    let bytes = fs::read(path)?;
    if bytes.starts_with(b"VBF1") {
        let f = read_vbf_from(&bytes[..])?;
        if f.components.len() != 1 {
            return Err(Error::format(format!("{}: frame files need one component", path.display())));
        }
        let values = f.components[0].iter().map(|c| c.re).collect();
        Ok(Frame::Vbf(f.grid, values))
    } else {
        let img = decode_pgm(&bytes).map_err(|e| Error::format(format!("{}: {e}", path.display())))?;
        Ok(Frame::Pgm(img.width, img.height, img.data.iter().map(|&v| v as f64).collect()))
    }
}

/// Reads a manifest and the frames it lists (paths relative to `dir`).
///
/// VBF1 frames carry their own pitch; a stack of PGM frames gets a unit-pitch grid.
pub fn load_frame_stack<T: Real>(dir: &Path, manifest: &str) -> Result<FrameStack<T>> {
    let text = fs::read_to_string(dir.join(manifest))?;
    let entries = parse_manifest(&text)?;
    if entries.is_empty() {
        return Err(Error::format("manifest lists no frames"));
    }
    let mut grid: Option<GridSpec<f64>> = None;
    let mut angles = Vec::with_capacity(entries.len());
    let mut frames = Vec::with_capacity(entries.len());
    for e in &entries {
        let path = dir.join(&e.file);
        let (g, values) = match load_frame(&path)? {
            Frame::Vbf(g, v) => (g, v),
            Frame::Pgm(w, h, v) => (GridSpec::new(w, h, 1.0, 1.0)?, v),
        };
        match &grid {
            None => grid = Some(g),
            Some(first) if first.nx() == g.nx() && first.ny() == g.ny() => {}
            Some(first) => {
                return Err(Error::shape(format!(
                    "{} is {}x{} but the first frame is {}x{}",
                    e.file,
                    g.nx(),
                    g.ny(),
                    first.nx(),
                    first.ny()
                )))
            }
        }
        angles.push(T::lit(e.angle_degrees.to_radians()));
        frames.push(values.into_iter().map(T::lit).collect());
    }
    let g = grid.expect("at least one frame");
    FrameStack::new(GridSpec::new(g.nx(), g.ny(), T::lit(g.dx()), T::lit(g.dy()))?, angles, frames)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_blank_lines() {
        let m = parse_manifest("# qwp scan\n0 f0.pgm\n\n22.5   frame 1.pgm\n").unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m[1], ManifestEntry { angle_degrees: 22.5, file: "frame 1.pgm".into() });
        assert!(parse_manifest("abc f.pgm").is_err());
        assert!(parse_manifest("12").is_err());
    }

    #[test]
    fn write_then_parse() {
        let entries = vec![
            ManifestEntry { angle_degrees: 0.0, file: "a.vbf".into() },
            ManifestEntry { angle_degrees: 11.25, file: "b.vbf".into() },
        ];
        let mut out = Vec::new();
        write_manifest(&mut out, &entries).unwrap();
        assert_eq!(parse_manifest(std::str::from_utf8(&out).unwrap()).unwrap(), entries);
    }
}
