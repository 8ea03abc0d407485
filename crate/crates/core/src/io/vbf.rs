//! `VBF1` field files.
//!
//! An ASCII header line `VBF1 <nx> <ny> <dx> <dy> <ncomp>\n` followed by
//! little-endian `f64` pairs `(re, im)`, row-major within a component and
//! component after component. Vector fields store H then V.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::field::{Raster, ScalarField};
use crate::grid::GridSpec;
use crate::jones::VectorField;
use crate::scalar::Real;

const MAGIC: &str = "VBF1";

/// Decoded contents of a VBF1 file.
#[derive(Debug, Clone, PartialEq)]
pub struct VbfFile {
    pub grid: GridSpec<f64>,
    pub components: Vec<Vec<Complex<f64>>>,
}

impl VbfFile {
    pub fn from_scalar<T: Real>(f: &ScalarField<T>) -> Self {
        Self { grid: grid_to_f64(f.grid()), components: vec![to_f64(f.amps())] }
    }

    pub fn from_vector<T: Real>(f: &VectorField<T>) -> Self {
        Self {
            grid: grid_to_f64(f.grid()),
            components: vec![to_f64(f.h().amps()), to_f64(f.v().amps())],
        }
    }

    /// Real raster stored as one component with zero imaginary part.
    pub fn from_raster<T: Real>(r: &Raster<T>) -> Self {
        let amps = r.values.iter().map(|v| Complex::new(v.to_f64_lossy(), 0.0)).collect();
        Self { grid: grid_to_f64(&r.grid), components: vec![amps] }
    }

    pub fn grid<T: Real>(&self) -> Result<GridSpec<T>> {
        GridSpec::new(self.grid.nx(), self.grid.ny(), T::lit(self.grid.dx()), T::lit(self.grid.dy()))
    }

    pub fn into_scalar<T: Real>(self) -> Result<ScalarField<T>> {
        if self.components.len() != 1 {
            return Err(Error::format(format!("expected 1 component, found {}", self.components.len())));
        }
        let grid = self.grid()?;
        ScalarField::new(grid, from_f64(&self.components[0]))
    }

    pub fn into_vector<T: Real>(self) -> Result<VectorField<T>> {
        if self.components.len() != 2 {
            return Err(Error::format(format!("expected 2 components, found {}", self.components.len())));
        }
        let grid = self.grid()?;
        VectorField::new(
            ScalarField::new(grid, from_f64(&self.components[0]))?,
            ScalarField::new(grid, from_f64(&self.components[1]))?,
        )
    }

    /// Real part of a single-component file.
    pub fn into_raster<T: Real>(self) -> Result<Raster<T>> {
        let f: ScalarField<T> = self.into_scalar()?;
        let grid = *f.grid();
        Raster::new(grid, f.amps().iter().map(|a| a.re).collect())
    }
}

fn grid_to_f64<T: Real>(g: &GridSpec<T>) -> GridSpec<f64> {
    GridSpec::new(g.nx(), g.ny(), g.dx().to_f64_lossy(), g.dy().to_f64_lossy()).expect("valid grid")
}

fn to_f64<T: Real>(a: &[Complex<T>]) -> Vec<Complex<f64>> {
    a.iter().map(|c| Complex::new(c.re.to_f64_lossy(), c.im.to_f64_lossy())).collect()
}

fn from_f64<T: Real>(a: &[Complex<f64>]) -> Vec<Complex<T>> {
    a.iter().map(|c| Complex::new(T::lit(c.re), T::lit(c.im))).collect()
}

pub fn write_vbf_to<W: Write>(mut w: W, file: &VbfFile) -> Result<()> {
    let g = &file.grid;
    writeln!(w, "{MAGIC} {} {} {} {} {}", g.nx(), g.ny(), g.dx(), g.dy(), file.components.len())?;
    let mut buf = Vec::with_capacity(16 * g.len());
    for comp in &file.components {
        if comp.len() != g.len() {
            return Err(Error::shape("component length does not match the grid"));
        }
        buf.clear();
        for a in comp {
            buf.extend_from_slice(&a.re.to_le_bytes());
            buf.extend_from_slice(&a.im.to_le_bytes());
        }
        w.write_all(&buf)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_vbf(path: impl AsRef<Path>, file: &VbfFile) -> Result<()> {
    write_vbf_to(BufWriter::new(File::create(path)?), file)
}

pub fn read_vbf_from<R: BufRead>(mut r: R) -> Result<VbfFile> {
    let mut header = Vec::new();
    r.read_until(b'\n', &mut header)?;
    let header = std::str::from_utf8(&header).map_err(|_| Error::format("VBF1 header is not ASCII"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 6 || fields[0] != MAGIC {
        return Err(Error::format(format!("not a VBF1 header: {:?}", header.trim_end())));
    }
    let int = |s: &str, what: &str| {
        s.parse::<usize>().map_err(|_| Error::format(format!("bad {what} in VBF1 header: {s}")))
    };
    let float = |s: &str, what: &str| {
        s.parse::<f64>().map_err(|_| Error::format(format!("bad {what} in VBF1 header: {s}")))
    };
    let (nx, ny) = (int(fields[1], "nx")?, int(fields[2], "ny")?);
    let (dx, dy) = (float(fields[3], "dx")?, float(fields[4], "dy")?);
    let ncomp = int(fields[5], "ncomp")?;
    let grid = GridSpec::new(nx, ny, dx, dy).map_err(|e| Error::format(e.to_string()))?;
    if ncomp == 0 {
        return Err(Error::format("VBF1 file declares zero components"));
    }
    let mut bytes = vec![0u8; 16 * grid.len()];
    let mut components = Vec::with_capacity(ncomp);
    for c in 0..ncomp {
        r.read_exact(&mut bytes)
            .map_err(|_| Error::format(format!("VBF1 payload truncated in component {c}")))?;
        components.push(
            bytes
                .chunks_exact(16)
                .map(|b| {
                    Complex::new(
                        f64::from_le_bytes(b[..8].try_into().unwrap()),
                        f64::from_le_bytes(b[8..].try_into().unwrap()),
                    )
                })
                .collect(),
        );
    }
    let mut rest = [0u8; 1];
    if r.read(&mut rest)? != 0 {
        return Err(Error::format("trailing bytes after VBF1 payload"));
    }
    Ok(VbfFile { grid, components })
}

pub fn read_vbf(path: impl AsRef<Path>) -> Result<VbfFile> {
    read_vbf_from(BufReader::new(File::open(path)?))
}
