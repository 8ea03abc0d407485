//! Complex scalar fields and real rasters on a [`GridSpec`].

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::scalar::Real;

/// Complex amplitude sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField<T> {
    grid: GridSpec<T>,
    amps: Vec<Complex<T>>,
}

impl<T: Real> ScalarField<T> {
    pub fn new(grid: GridSpec<T>, amps: Vec<Complex<T>>) -> Result<Self> {
        if amps.len() != grid.len() {
            return Err(Error::shape(format!(
                "{} amplitudes for a {}x{} grid",
                amps.len(),
                grid.nx(),
                grid.ny()
            )));
        }
        Ok(Self { grid, amps })
    }

    pub fn zeros(grid: GridSpec<T>) -> Self {
        Self { grid, amps: vec![Complex::new(T::zero(), T::zero()); grid.len()] }
    }

    /// Samples `f(x, y)` at every pixel centre.
    pub fn from_fn<F>(grid: GridSpec<T>, f: F) -> Self
    where
        F: Fn(T, T) -> Complex<T> + Sync,
    {
        let amps = (0..grid.len())
            .into_par_iter()
            .map(|k| {
                let (x, y) = grid.coords(k);
                f(x, y)
            })
            .collect();
        Self { grid, amps }
    }

    #[inline]
    pub fn grid(&self) -> &GridSpec<T> {
        &self.grid
    }

    #[inline]
    pub fn amps(&self) -> &[Complex<T>] {
        &self.amps
    }

    #[inline]
    pub fn amps_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.amps
    }

    pub fn into_amps(self) -> Vec<Complex<T>> {
        self.amps
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Complex<T> {
        self.amps[self.grid.index(i, j)]
    }

    /// `Σ|a|²·dx·dy`.
    pub fn power(&self) -> T {
        power(self)
    }

    pub fn intensity(&self) -> Raster<T> {
        Raster {
            grid: self.grid,
            values: self.amps.iter().map(|a| a.norm_sqr()).collect(),
        }
    }

    pub fn scaled(&self, s: Complex<T>) -> Self {
        self.map(|a| a * s)
    }

    pub fn map<F: Fn(Complex<T>) -> Complex<T>>(&self, f: F) -> Self {
        Self { grid: self.grid, amps: self.amps.iter().map(|&a| f(a)).collect() }
    }

    /// Pixel-wise combination of two fields on the same grid.
    pub fn zip_with<F>(&self, other: &Self, f: F) -> Result<Self>
    where
        F: Fn(Complex<T>, Complex<T>) -> Complex<T>,
    {
        self.grid.ensure_same(&other.grid)?;
        let amps = self.amps.iter().zip(&other.amps).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self { grid: self.grid, amps })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    /// Rescales to unit power; a zero field is returned unchanged.
    pub fn normalized(&self) -> Self {
        let p = self.power();
        if p > T::zero() {
            self.scaled(Complex::new(T::one() / p.sqrt(), T::zero()))
        } else {
            self.clone()
        }
    }
}

/// `Σ|a|²·dx·dy`.
pub fn power<T: Real>(f: &ScalarField<T>) -> T {
    let s = f.amps.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr());
    s * f.grid.pixel_area()
}

/// `Σ conj(a)·b·dx·dy`.
pub fn inner_product<T: Real>(a: &ScalarField<T>, b: &ScalarField<T>) -> Result<Complex<T>> {
    a.grid.ensure_same(&b.grid)?;
    let s = a
        .amps
        .iter()
        .zip(&b.amps)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| acc + x.conj() * y);
    Ok(s * f_area(&a.grid))
}

#[inline]
fn f_area<T: Real>(g: &GridSpec<T>) -> Complex<T> {
    Complex::new(g.pixel_area(), T::zero())
}

/// Real-valued raster (intensity images, Stokes maps, camera frames).
#[derive(Debug, Clone, PartialEq)]
pub struct Raster<T> {
    pub grid: GridSpec<T>,
    pub values: Vec<T>,
}

impl<T: Real> Raster<T> {
    pub fn new(grid: GridSpec<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::shape(format!(
                "{} values for a {}x{} grid",
                values.len(),
                grid.nx(),
                grid.ny()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: GridSpec<T>) -> Self {
        Self { grid, values: vec![T::zero(); grid.len()] }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> T {
        self.values[self.grid.index(i, j)]
    }

    pub fn max(&self) -> T {
        self.values.iter().copied().fold(T::neg_infinity(), T::max)
    }

    pub fn min(&self) -> T {
        self.values.iter().copied().fold(T::infinity(), T::min)
    }

    pub fn sum(&self) -> T {
        self.values.iter().fold(T::zero(), |a, &b| a + b)
    }

    /// Bilinear interpolation at physical position `(x, y)`; `None` outside the grid.
    pub fn sample(&self, x: T, y: T) -> Option<T> {
        let (px, py) = self.grid.to_pixel(x, y);
        if px < T::zero() || py < T::zero() {
            return None;
        }
        let i0 = px.floor().to_usize()?;
        let j0 = py.floor().to_usize()?;
        let nx = self.grid.nx();
        let ny = self.grid.ny();
        if i0 >= nx || j0 >= ny {
            return None;
        }
        let i1 = (i0 + 1).min(nx - 1);
        let j1 = (j0 + 1).min(ny - 1);
        let fx = px - T::from_usize_lossy(i0);
        let fy = py - T::from_usize_lossy(j0);
        if (i1 == i0 && fx > T::zero()) || (j1 == j0 && fy > T::zero()) {
            return None;
        }
        let one = T::one();
        let v = self.at(i0, j0) * (one - fx) * (one - fy)
            + self.at(i1, j0) * fx * (one - fy)
            + self.at(i0, j1) * (one - fx) * fy
            + self.at(i1, j1) * fx * fy;
        Some(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> GridSpec<f64> {
        GridSpec::new(8, 6, 0.1, 0.2).unwrap()
    }

    #[test]
    fn zero_field_has_zero_power() {
        assert_eq!(ScalarField::zeros(grid()).power(), 0.0);
    }

    #[test]
    fn power_scales_quadratically() {
        let f = ScalarField::from_fn(grid(), |x, y| Complex::new(x + 0.3, y - 0.1));
        let g = f.scaled(Complex::new(2.0, 0.0));
        assert!((g.power() - 4.0 * f.power()).abs() < 1e-12 * g.power());
    }

    #[test]
    fn normalized_self_overlap_is_one() {
        let f = ScalarField::from_fn(grid(), |x, y| Complex::new(x.cos(), y.sin())).normalized();
        let ip = inner_product(&f, &f).unwrap();
        assert!((ip.re - 1.0).abs() < 1e-12 && ip.im.abs() < 1e-12);
    }

    #[test]
    fn inner_product_rejects_mismatched_grids() {
        let a = ScalarField::zeros(grid());
        let b = ScalarField::zeros(GridSpec::new(8, 6, 0.1, 0.25).unwrap());
        assert!(matches!(inner_product(&a, &b), Err(Error::Shape(_))));
        assert!(ScalarField::new(grid(), vec![]).is_err());
    }

    #[test]
    fn bilinear_sample_reproduces_plane() {
        let g = grid();
        let values = (0..g.len()).map(|k| {
            let (x, y) = g.coords(k);
            2.0 * x - y + 1.0
        });
        let r = Raster::new(g, values.collect()).unwrap();
        let v = r.sample(0.123, -0.211).unwrap();
        assert!((v - (2.0 * 0.123 + 0.211 + 1.0)).abs() < 1e-12);
        assert!(r.sample(10.0, 0.0).is_none());
    }
}
