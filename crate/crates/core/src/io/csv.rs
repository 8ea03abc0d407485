//! Plain CSV grids: one raster row per line.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::Result;
use crate::field::Raster;
use crate::scalar::Real;

pub fn write_csv_grid_to<W: Write, T: Real>(mut w: W, raster: &Raster<T>) -> Result<()> {
    let nx = raster.grid.nx();
    for row in raster.values.chunks(nx) {
        let line: Vec<String> = row.iter().map(|v| format!("{}", v.to_f64_lossy())).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv_grid<T: Real>(path: impl AsRef<Path>, raster: &Raster<T>) -> Result<()> {
    write_csv_grid_to(BufWriter::new(File::create(path)?), raster)
}
