//! Uniform sampling grid centred on the optical axis.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Pixel grid of `nx × ny` samples with pitch `dx × dy` (metres).
///
/// Pixel `(i, j)` sits at `((i − (nx−1)/2)·dx, (j − (ny−1)/2)·dy)`. Rasters are
/// stored row-major: index `j·nx + i`, `i` running along x.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec<T> {
    nx: usize,
    ny: usize,
    dx: T,
    dy: T,
}

impl<T: Real> GridSpec<T> {
    pub fn new(nx: usize, ny: usize, dx: T, dy: T) -> Result<Self> {
        if nx < 2 || ny < 2 {
            return Err(Error::domain(format!("grid needs at least 2x2 pixels, got {nx}x{ny}")));
        }
        if !(dx > T::zero() && dy > T::zero()) || !dx.is_finite() || !dy.is_finite() {
            return Err(Error::domain(format!("pixel pitch must be positive, got {dx} x {dy}")));
        }
        Ok(Self { nx, ny, dx, dy })
    }

    /// Square `n × n` grid spanning `extent` metres edge to edge.
    pub fn square(n: usize, extent: T) -> Result<Self> {
        let d = extent / T::from_usize_lossy(n);
        Self::new(n, n, d, d)
    }

    #[inline]
    pub fn nx(&self) -> usize {
        self.nx
    }

    #[inline]
    pub fn ny(&self) -> usize {
        self.ny
    }

    #[inline]
    pub fn dx(&self) -> T {
        self.dx
    }

    #[inline]
    pub fn dy(&self) -> T {
        self.dy
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn pixel_area(&self) -> T {
        self.dx * self.dy
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    #[inline]
    pub fn x(&self, i: usize) -> T {
        (T::from_usize_lossy(i) - T::from_usize_lossy(self.nx - 1) / T::two()) * self.dx
    }

    #[inline]
    pub fn y(&self, j: usize) -> T {
        (T::from_usize_lossy(j) - T::from_usize_lossy(self.ny - 1) / T::two()) * self.dy
    }

    /// Physical coordinates of the pixel at flat index `k`.
    #[inline]
    pub fn coords(&self, k: usize) -> (T, T) {
        (self.x(k % self.nx), self.y(k / self.nx))
    }

    /// Half of the smaller edge length; the largest radius fully inside the grid.
    pub fn inner_radius(&self) -> T {
        let hx = T::from_usize_lossy(self.nx - 1) * self.dx / T::two();
        let hy = T::from_usize_lossy(self.ny - 1) * self.dy / T::two();
        hx.min(hy)
    }

    /// Fractional pixel position of physical point `(x, y)`.
    #[inline]
    pub fn to_pixel(&self, x: T, y: T) -> (T, T) {
        (
            x / self.dx + T::from_usize_lossy(self.nx - 1) / T::two(),
            y / self.dy + T::from_usize_lossy(self.ny - 1) / T::two(),
        )
    }

    pub fn ensure_same(&self, other: &Self) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::shape(format!(
                "{}x{} @ ({}, {}) vs {}x{} @ ({}, {})",
                self.nx, self.ny, self.dx, self.dy, other.nx, other.ny, other.dx, other.dy
            )))
        }
    }

    /// Same pitch, `factor` times more pixels per axis.
    pub(crate) fn padded(&self, factor: usize) -> Self {
        Self { nx: self.nx * factor, ny: self.ny * factor, dx: self.dx, dy: self.dy }
    }
}
