//! Ring and radial-cut diagnostics on sampled rasters.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::field::{Raster, ScalarField};
use crate::scalar::Real;

fn check_ring<T: Real>(grid: &crate::grid::GridSpec<T>, radius: T) -> Result<()> {
    let limit = grid.inner_radius() - grid.dx().max(grid.dy());
    if !(radius > T::zero()) || radius > limit {
        return Err(Error::precondition(format!(
            "ring radius {radius} must be positive and at most {limit} to stay inside the grid"
        )));
    }
    Ok(())
}

/// Azimuth of sample `k` out of `n`, starting on the +x axis.
#[inline]
pub fn ring_angle<T: Real>(k: usize, n: usize) -> T {
    T::TAU() * T::from_usize_lossy(k) / T::from_usize_lossy(n)
}

/// `n` bilinear samples of `raster` on a centred circle.
pub fn ring_profile<T: Real>(raster: &Raster<T>, radius: T, n: usize) -> Result<Vec<T>> {
    check_ring(&raster.grid, radius)?;
    Ok((0..n)
        .map(|k| {
            let (s, c) = ring_angle::<T>(k, n).sin_cos();
            raster.sample(radius * c, radius * s).expect("ring inside grid")
        })
        .collect())
}

/// Bilinear samples of a complex field on a centred circle.
pub fn ring_field<T: Real>(f: &ScalarField<T>, radius: T, n: usize) -> Result<Vec<Complex<T>>> {
    check_ring(f.grid(), radius)?;
    let re = Raster { grid: *f.grid(), values: f.amps().iter().map(|a| a.re).collect() };
    let im = Raster { grid: *f.grid(), values: f.amps().iter().map(|a| a.im).collect() };
    Ok((0..n)
        .map(|k| {
            let (s, c) = ring_angle::<T>(k, n).sin_cos();
            let (x, y) = (radius * c, radius * s);
            Complex::new(re.sample(x, y).unwrap(), im.sample(x, y).unwrap())
        })
        .collect())
}

/// Total phase advance `Σ wrap(arg a_{k+1} − arg a_k)` around a closed loop.
pub fn winding<T: Real>(samples: &[Complex<T>]) -> T {
    let n = samples.len();
    (0..n)
        .map(|k| (samples[(k + 1) % n].arg() - samples[k].arg()).wrap_signed())
        .fold(T::zero(), |a, b| a + b)
}

/// Phase winding of `f` around a centred ring, in radians.
pub fn phase_winding<T: Real>(f: &ScalarField<T>, radius: T, n: usize) -> Result<T> {
    Ok(winding(&ring_field(f, radius, n)?))
}

/// Azimuthal Fourier coefficients `c_m = (1/N) Σ s_k e^{−imφ_k}` for `m = 0..=max_m`.
pub fn azimuthal_harmonics<T: Real>(samples: &[T], max_m: usize) -> Vec<Complex<T>> {
    let n = samples.len();
    let inv = T::one() / T::from_usize_lossy(n);
    (0..=max_m)
        .map(|m| {
            let mut acc = Complex::new(T::zero(), T::zero());
            for (k, &s) in samples.iter().enumerate() {
                let ang = -ring_angle::<T>(k, n) * T::from_usize_lossy(m);
                acc = acc + Complex::from_polar(s, ang);
            }
            acc * inv
        })
        .collect()
}

/// Strongest non-constant harmonic and its power relative to the next strongest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DominantHarmonic<T> {
    pub order: usize,
    pub power: T,
    /// `|c_order|² / max_{m ≠ 0, order} |c_m|²` (infinite if all others vanish).
    pub contrast: T,
}

pub fn dominant_harmonic<T: Real>(samples: &[T], max_m: usize) -> DominantHarmonic<T> {
    let c = azimuthal_harmonics(samples, max_m);
    let powers: Vec<T> = c.iter().map(|x| x.norm_sqr()).collect();
    let (order, &power) = powers
        .iter()
        .enumerate()
        .skip(1)
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .expect("at least one harmonic");
    let runner_up = powers
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(m, _)| *m != order)
        .map(|(_, &p)| p)
        .fold(T::zero(), T::max);
    let contrast = if runner_up > T::zero() { power / runner_up } else { T::infinity() };
    DominantHarmonic { order, power, contrast }
}

/// Azimuth `φ₀ ∈ (−π/m, π/m]` of the lobes of harmonic `m`, i.e. the pattern
/// `1 + cos(m(φ − φ₀))` has lobe azimuth `φ₀`.
pub fn lobe_azimuth<T: Real>(samples: &[T], m: usize) -> T {
    assert!(m > 0, "lobe azimuth needs a non-constant harmonic");
    let c = azimuthal_harmonics(samples, m)[m];
    (-c.arg()).wrap_signed() / T::from_usize_lossy(m)
}

/// Smallest rotation between two lobe patterns of `m`-fold symmetry, in radians.
pub fn lobe_rotation<T: Real>(inner: &[T], outer: &[T], m: usize) -> T {
    let d = (lobe_azimuth(outer, m) - lobe_azimuth(inner, m)) * T::from_usize_lossy(m);
    d.wrap_signed().abs() / T::from_usize_lossy(m)
}

/// Peaks of a periodic sequence whose topographic prominence is at least
/// `rel_prominence · max(samples)`.
pub fn count_circular_peaks<T: Real>(samples: &[T], rel_prominence: T) -> usize {
    let n = samples.len();
    if n < 3 {
        return 0;
    }
    let max = samples.iter().copied().fold(T::neg_infinity(), T::max);
    let min = samples.iter().copied().fold(T::infinity(), T::min);
    let threshold = rel_prominence * max;
    // Rotate so the sequence starts at a global minimum; peaks never straddle it.
    let start = samples.iter().position(|&s| s == min).unwrap();
    let seq: Vec<T> = (0..=n).map(|k| samples[(start + k) % n]).collect();
    count_peaks_linear(&seq, threshold)
}

/// Peaks of an open sequence with prominence at least `threshold`.
fn count_peaks_linear<T: Real>(seq: &[T], threshold: T) -> usize {
    let n = seq.len();
    let mut peaks = Vec::new();
    let mut k = 1;
    while k + 1 < n {
        if seq[k] > seq[k - 1] {
            // Walk over a plateau.
            let mut e = k;
            while e + 1 < n && seq[e + 1] == seq[k] {
                e += 1;
            }
            if e + 1 < n && seq[e + 1] < seq[k] {
                peaks.push((k, e));
            }
            k = e + 1;
        } else {
            k += 1;
        }
    }
    // Ties between equal peaks go to the right-most one.
    peaks
        .into_iter()
        .filter(|&(a, b)| {
            let h = seq[a];
            let left = seq[..a]
                .iter()
                .rev()
                .take_while(|&&v| v < h)
                .copied()
                .fold(h, T::min);
            let right = seq[b + 1..].iter().take_while(|&&v| v <= h).copied().fold(h, T::min);
            h - left.max(right) >= threshold
        })
        .count()
}

/// Peaks along a radial cut at azimuth `angle`, sampled at `n` points out to
/// the grid edge; prominence threshold relative to the cut maximum.
pub fn radial_peak_count<T: Real>(raster: &Raster<T>, angle: T, n: usize, rel_prominence: T) -> usize {
    let r_max = raster.grid.inner_radius();
    let (s, c) = angle.sin_cos();
    let cut: Vec<T> = (0..n)
        .map(|k| {
            let r = r_max * T::from_usize_lossy(k) / T::from_usize_lossy(n);
            raster.sample(r * c, r * s).unwrap_or(T::zero())
        })
        .collect();
    // Pad with zero so a monotone tail does not count and the axis acts as a floor.
    let mut seq = vec![T::zero()];
    seq.extend(cut);
    seq.push(T::zero());
    let max = seq.iter().copied().fold(T::zero(), T::max);
    count_peaks_linear(&seq, rel_prominence * max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    fn ring(n: usize, f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..n).map(|k| f(TAU * k as f64 / n as f64)).collect()
    }

    #[test]
    fn counts_cos_lobes() {
        let s = ring(360, |p| (p).cos().powi(2));
        assert_eq!(count_circular_peaks(&s, 0.1), 2);
        let s = ring(360, |p| (3.0 * p).cos().powi(2));
        assert_eq!(count_circular_peaks(&s, 0.1), 6);
        // Small ripples are ignored.
        let s = ring(360, |p| 1.0 + (2.0 * p).cos() + 0.02 * (17.0 * p).cos());
        assert_eq!(count_circular_peaks(&s, 0.1), 2);
        assert_eq!(count_circular_peaks(&[1.0; 10], 0.1), 0);
    }

    #[test]
    fn harmonic_analysis() {
        let s = ring(256, |p| 1.0 + (4.0 * (p - 0.2)).cos() + 0.05 * (2.0 * p).sin());
        let d = dominant_harmonic(&s, 12);
        assert_eq!(d.order, 4);
        assert!((d.contrast - (0.25 / 0.000625)).abs() < 1e-6);
        assert!((lobe_azimuth(&s, 4) - 0.2).abs() < 1e-12);
        let t = ring(256, |p| 1.0 + (4.0 * (p - 0.5)).cos());
        assert!((lobe_rotation(&s, &t, 4) - 0.3).abs() < 1e-3);
        let u = ring(256, |p| 1.0 + (4.0 * (p - 0.2 - PI / 2.0)).cos());
        assert!(lobe_rotation(&t, &u, 4) < 0.31);
    }

    #[test]
    fn winding_counts_charge() {
        let s: Vec<Complex<f64>> =
            (0..64).map(|k| Complex::from_polar(1.0, -3.0 * TAU * k as f64 / 64.0)).collect();
        assert!((winding(&s) + 3.0 * TAU).abs() < 1e-12);
    }
}
