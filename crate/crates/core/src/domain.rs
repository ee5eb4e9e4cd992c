//! Periodic box, wavenumber tables and the N-dimensional FFT.
//!
//! Fields are stored as normalised Fourier coefficients: the physical value
//! at a grid point is `sum_k c(k) exp(i k.x)`, so the forward transform
//! carries the `1/N^d` factor and the inverse is a plain sum.
//!
//! The Nyquist index `N/2` has no conjugate partner, so every multiplier
//! that depends on the direction of `k` (`div`, `grad`, Leray projection)
//! uses the effective wavenumber 0 on that plane. Multipliers of `|k|^2`
//! alone (heat semigroup, Laplacian) are even in `k` and use the true
//! value, so Nyquist modes are damped like their neighbours.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Largest supported spatial dimension.
pub const MAX_DIM: usize = 3;

/// A flat grid index split into per-axis indices (unused axes are 0).
pub type GridIndex = [usize; MAX_DIM];

#[derive(Clone)]
pub struct Domain {
    inner: Arc<Inner>,
}

struct Inner {
    dim: usize,
    n: usize,
    box_length: f64,
    len: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    wavevectors: Vec<[f64; MAX_DIM]>,
    k_squared: Vec<f64>,
    band: Vec<bool>,
}

impl Domain {
    /// Torus `[0, box_length)^dim` sampled with `n` points per axis.
    pub fn new(dim: usize, box_length: f64, n: usize) -> Result<Self> {
        if !(2..=MAX_DIM).contains(&dim) {
            return Err(Error::InvalidArgument(format!(
                "dimension must be 2 or 3, got {dim}"
            )));
        }
        if n < 8 || n % 2 != 0 {
            return Err(Error::InvalidArgument(format!(
                "grid points must be even and at least 8, got {n}"
            )));
        }
        if !(box_length.is_finite() && box_length > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "box length must be positive, got {box_length}"
            )));
        }

        let len = n.pow(dim as u32);
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);

        let scale = 2.0 * PI / box_length;
        let cutoff = dealias_cutoff(n);
        let mut wavevectors = Vec::with_capacity(len);
        let mut k_squared = Vec::with_capacity(len);
        let mut band = Vec::with_capacity(len);
        for flat in 0..len {
            let idx = unravel(flat, n, dim);
            let mut kv = [0.0; MAX_DIM];
            let mut in_band = true;
            let mut k2 = 0.0;
            for axis in 0..dim {
                let s = signed(idx[axis], n);
                if s.unsigned_abs() as usize > cutoff {
                    in_band = false;
                }
                kv[axis] = if idx[axis] == n / 2 { 0.0 } else { s as f64 * scale };
                k2 += (s as f64 * scale).powi(2);
            }
            k_squared.push(k2);
            wavevectors.push(kv);
            band.push(in_band);
        }

        Ok(Self {
            inner: Arc::new(Inner {
                dim,
                n,
                box_length,
                len,
                forward,
                inverse,
                wavevectors,
                k_squared,
                band,
            }),
        })
    }

    pub fn dim(&self) -> usize {
        self.inner.dim
    }

    pub fn grid_points(&self) -> usize {
        self.inner.n
    }

    pub fn box_length(&self) -> f64 {
        self.inner.box_length
    }

    /// Number of grid points (and Fourier modes) per component.
    pub fn len(&self) -> usize {
        self.inner.len
    }

    pub fn is_empty(&self) -> bool {
        self.inner.len == 0
    }

    pub fn spacing(&self) -> f64 {
        self.inner.box_length / self.inner.n as f64
    }

    /// Rectangle-rule quadrature weight `h^d`.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.inner.dim as i32)
    }

    pub fn volume(&self) -> f64 {
        self.inner.box_length.powi(self.inner.dim as i32)
    }

    /// Largest retained integer wavenumber under the 2/3 rule.
    pub fn dealias_cutoff(&self) -> usize {
        dealias_cutoff(self.inner.n)
    }

    /// Effective physical wavevector of a mode (Nyquist components are 0).
    #[inline]
    pub fn wavevector(&self, flat: usize) -> &[f64; MAX_DIM] {
        &self.inner.wavevectors[flat]
    }

    #[inline]
    pub fn k_squared(&self, flat: usize) -> f64 {
        self.inner.k_squared[flat]
    }

    pub fn k_squared_table(&self) -> &[f64] {
        &self.inner.k_squared
    }

    /// Whether a mode survives 2/3-rule truncation.
    #[inline]
    pub fn in_band(&self, flat: usize) -> bool {
        self.inner.band[flat]
    }

    /// Signed integer wavenumbers of a mode (`N/2` maps to `-N/2`).
    pub fn integer_wavenumbers(&self, flat: usize) -> [i64; MAX_DIM] {
        let idx = self.unravel(flat);
        let mut out = [0; MAX_DIM];
        for axis in 0..self.inner.dim {
            out[axis] = signed(idx[axis], self.inner.n);
        }
        out
    }

    pub fn unravel(&self, flat: usize) -> GridIndex {
        unravel(flat, self.inner.n, self.inner.dim)
    }

    pub fn ravel(&self, idx: &GridIndex) -> usize {
        idx[..self.inner.dim]
            .iter()
            .fold(0, |acc, &i| acc * self.inner.n + i)
    }

    /// Physical coordinates of a grid point.
    pub fn coordinates(&self, flat: usize) -> [f64; MAX_DIM] {
        let idx = self.unravel(flat);
        let h = self.spacing();
        let mut x = [0.0; MAX_DIM];
        for axis in 0..self.inner.dim {
            x[axis] = idx[axis] as f64 * h;
        }
        x
    }

    /// Physical samples to normalised coefficients, in place.
    pub fn forward(&self, data: &mut [Complex64]) {
        self.transform(data, &self.inner.forward);
        let norm = 1.0 / self.inner.len as f64;
        for c in data.iter_mut() {
            *c *= norm;
        }
    }

    /// Normalised coefficients to physical samples, in place.
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.transform(data, &self.inner.inverse);
    }

    fn transform(&self, data: &mut [Complex64], fft: &Arc<dyn Fft<f64>>) {
        let n = self.inner.n;
        let dim = self.inner.dim;
        assert_eq!(data.len(), self.inner.len, "buffer does not match domain");

        let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
        // Contiguous last axis: all lines in one batched call.
        fft.process_with_scratch(data, &mut scratch);

        // Remaining axes: transpose each n x stride slab so lines are contiguous.
        let mut slab = Vec::new();
        for axis in (0..dim - 1).rev() {
            let stride = n.pow((dim - 1 - axis) as u32);
            let block = n * stride;
            slab.resize(block, Complex64::default());
            for chunk in data.chunks_exact_mut(block) {
                for i in 0..n {
                    for j in 0..stride {
                        slab[j * n + i] = chunk[i * stride + j];
                    }
                }
                fft.process_with_scratch(&mut slab, &mut scratch);
                for i in 0..n {
                    for j in 0..stride {
                        chunk[i * stride + j] = slab[j * n + i];
                    }
                }
            }
        }
    }
}

impl PartialEq for Domain {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.dim == other.inner.dim
                && self.inner.n == other.inner.n
                && self.inner.box_length == other.inner.box_length)
    }
}

impl fmt::Debug for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Domain")
            .field("dim", &self.inner.dim)
            .field("box_length", &self.inner.box_length)
            .field("grid_points", &self.inner.n)
            .finish()
    }
}

fn dealias_cutoff(n: usize) -> usize {
    // Largest K with 3K < N: sums of two retained modes never alias back.
    (n - 1) / 3
}

fn signed(i: usize, n: usize) -> i64 {
    if i < n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

fn unravel(mut flat: usize, n: usize, dim: usize) -> GridIndex {
    let mut idx = [0; MAX_DIM];
    for axis in (0..dim).rev() {
        idx[axis] = flat % n;
        flat /= n;
    }
    idx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert!(Domain::new(1, 1.0, 16).is_err());
        assert!(Domain::new(4, 1.0, 16).is_err());
        assert!(Domain::new(2, 1.0, 6).is_err());
        assert!(Domain::new(2, 1.0, 15).is_err());
        assert!(Domain::new(2, -1.0, 16).is_err());
    }

    #[test]
    fn wavenumbers_are_scaled_integers() {
        let d = Domain::new(2, 4.0 * PI, 8).unwrap();
        let flat = d.ravel(&[1, 7, 0]);
        let k = d.wavevector(flat);
        assert!((k[0] - 0.5).abs() < 1e-15);
        assert!((k[1] + 0.5).abs() < 1e-15);
        let nyq = d.ravel(&[4, 1, 0]);
        assert_eq!(d.wavevector(nyq)[0], 0.0);
        assert_eq!(d.integer_wavenumbers(nyq)[0], -4);
    }

    #[test]
    fn dealias_band_obeys_three_k_below_n() {
        for n in [8, 16, 24, 32, 48, 64] {
            let k = dealias_cutoff(n);
            assert!(3 * k < n && 3 * (k + 1) >= n);
        }
    }

    #[test]
    fn round_trip_reproduces_samples() {
        let d = Domain::new(3, 2.0 * PI, 12).unwrap();
        let samples: Vec<Complex64> = (0..d.len())
            .map(|i| Complex64::new(((i * 7919) % 113) as f64 / 113.0 - 0.5, 0.0))
            .collect();
        let mut buf = samples.clone();
        d.forward(&mut buf);
        d.inverse(&mut buf);
        let max = samples.iter().map(|c| c.norm()).fold(0.0, f64::max);
        for (a, b) in samples.iter().zip(&buf) {
            assert!((a - b).norm() <= 10.0 * f64::EPSILON * max);
        }
    }

    #[test]
    fn single_mode_lands_on_its_wavenumber() {
        let d = Domain::new(2, 2.0 * PI, 16).unwrap();
        let mut buf: Vec<Complex64> = (0..d.len())
            .map(|f| {
                let x = d.coordinates(f);
                Complex64::new((3.0 * x[0] - 2.0 * x[1]).cos(), 0.0)
            })
            .collect();
        d.forward(&mut buf);
        let a = d.ravel(&[3, 14, 0]);
        let b = d.ravel(&[13, 2, 0]);
        assert!((buf[a].re - 0.5).abs() < 1e-14);
        assert!((buf[b].re - 0.5).abs() < 1e-14);
        let rest: f64 = buf
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != a && *i != b)
            .map(|(_, c)| c.norm())
            .sum();
        assert!(rest < 1e-12);
    }
}
