//! Scalar and vector fields stored as Fourier coefficients.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::domain::{Domain, MAX_DIM};
use crate::error::{Error, Result};

/// A real-valued field with one or more components, held spectrally.
///
/// Scalars have a single component; velocity fields have `dim` components.
/// Coefficients of a field built from real samples are conjugate-symmetric
/// and every operator in this crate preserves that.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    domain: Domain,
    comps: Vec<Vec<Complex64>>,
}

impl SpectralField {
    pub fn zeros(domain: &Domain, ncomp: usize) -> Self {
        Self {
            domain: domain.clone(),
            comps: vec![vec![Complex64::default(); domain.len()]; ncomp],
        }
    }

    pub fn zero_vector(domain: &Domain) -> Self {
        Self::zeros(domain, domain.dim())
    }

    /// Wraps coefficient arrays; each must have `domain.len()` entries.
    pub fn from_coefficients(domain: &Domain, comps: Vec<Vec<Complex64>>) -> Result<Self> {
        if comps.is_empty() || comps.iter().any(|c| c.len() != domain.len()) {
            return Err(Error::InvalidArgument(
                "coefficient arrays do not match the domain".into(),
            ));
        }
        Ok(Self {
            domain: domain.clone(),
            comps,
        })
    }

    /// Transforms real grid samples (one array per component).
    pub fn from_physical(domain: &Domain, samples: &[Vec<f64>]) -> Result<Self> {
        if samples.is_empty() || samples.iter().any(|s| s.len() != domain.len()) {
            return Err(Error::InvalidArgument(
                "sample arrays do not match the domain".into(),
            ));
        }
        let comps = samples
            .iter()
            .map(|s| {
                let mut buf: Vec<Complex64> = s.iter().map(|&v| Complex64::new(v, 0.0)).collect();
                domain.forward(&mut buf);
                buf
            })
            .collect();
        Ok(Self {
            domain: domain.clone(),
            comps,
        })
    }

    /// Samples `f(x)` at every grid point; `f` writes `ncomp` values.
    pub fn from_fn<F>(domain: &Domain, ncomp: usize, f: F) -> Self
    where
        F: Fn(&[f64; MAX_DIM], &mut [f64]),
    {
        let mut samples = vec![vec![0.0; domain.len()]; ncomp];
        let mut value = vec![0.0; ncomp];
        for flat in 0..domain.len() {
            let x = domain.coordinates(flat);
            value.iter_mut().for_each(|v| *v = 0.0);
            f(&x, &mut value);
            for (c, v) in value.iter().enumerate() {
                samples[c][flat] = *v;
            }
        }
        Self::from_physical(domain, &samples).expect("sample shape matches domain")
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn ncomp(&self) -> usize {
        self.comps.len()
    }

    pub fn component(&self, c: usize) -> &[Complex64] {
        &self.comps[c]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [Complex64] {
        &mut self.comps[c]
    }

    pub fn components(&self) -> &[Vec<Complex64>] {
        &self.comps
    }

    pub fn into_components(self) -> Vec<Vec<Complex64>> {
        self.comps
    }

    /// Splits out one component as a scalar field.
    pub fn scalar_component(&self, c: usize) -> SpectralField {
        Self {
            domain: self.domain.clone(),
            comps: vec![self.comps[c].clone()],
        }
    }

    pub fn to_physical(&self) -> Vec<Vec<f64>> {
        self.comps
            .iter()
            .map(|c| {
                let mut buf = c.clone();
                self.domain.inverse(&mut buf);
                buf.into_iter().map(|z| z.re).collect()
            })
            .collect()
    }

    /// Physical samples of the 2/3-rule truncated field.
    pub fn band_limited_physical(&self) -> Vec<Vec<f64>> {
        self.comps
            .iter()
            .map(|c| {
                let mut buf: Vec<Complex64> = c
                    .iter()
                    .enumerate()
                    .map(|(k, z)| if self.domain.in_band(k) { *z } else { Complex64::default() })
                    .collect();
                self.domain.inverse(&mut buf);
                buf.into_iter().map(|z| z.re).collect()
            })
            .collect()
    }

    pub fn ensure_same_domain(&self, other: &SpectralField) -> Result<()> {
        if self.domain == other.domain {
            Ok(())
        } else {
            Err(Error::DomainMismatch)
        }
    }

    fn ensure_same_shape(&self, other: &SpectralField) -> Result<()> {
        self.ensure_same_domain(other)?;
        if self.ncomp() != other.ncomp() {
            return Err(Error::InvalidArgument(format!(
                "component count mismatch: {} vs {}",
                self.ncomp(),
                other.ncomp()
            )));
        }
        Ok(())
    }

    /// Applies a real per-mode multiplier to every component.
    pub fn map_modes<F: Fn(usize) -> f64>(&self, multiplier: F) -> SpectralField {
        let mut out = self.clone();
        for comp in &mut out.comps {
            for (k, z) in comp.iter_mut().enumerate() {
                *z *= multiplier(k);
            }
        }
        out
    }

    /// `self + alpha * other`.
    pub fn axpy(&self, alpha: f64, other: &SpectralField) -> Result<SpectralField> {
        self.ensure_same_shape(other)?;
        let mut out = self.clone();
        for (a, b) in out.comps.iter_mut().zip(&other.comps) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += alpha * y;
            }
        }
        Ok(out)
    }

    pub fn scaled(&self, alpha: f64) -> SpectralField {
        self.map_modes(|_| alpha)
    }

    /// Partial derivative `prod_j d_j^{alpha_j}`, exact on resolved modes.
    pub fn derivative(&self, alpha: &[i32]) -> Result<SpectralField> {
        let dim = self.domain.dim();
        if alpha.len() != dim {
            return Err(Error::InvalidArgument(format!(
                "multi-index has {} entries, domain dimension is {dim}",
                alpha.len()
            )));
        }
        if let Some(a) = alpha.iter().find(|&&a| a < 0) {
            return Err(Error::InvalidArgument(format!(
                "negative multi-index entry {a}"
            )));
        }
        let order: i32 = alpha.iter().sum();
        let phase = Complex64::i().powi(order);
        let mut out = self.clone();
        for comp in &mut out.comps {
            for (k, z) in comp.iter_mut().enumerate() {
                let kv = self.domain.wavevector(k);
                let mag: f64 = alpha.iter().zip(kv).map(|(&a, &kj)| kj.powi(a)).product();
                *z *= phase * mag;
            }
        }
        Ok(out)
    }

    /// Divergence of a vector field as a scalar field.
    pub fn divergence(&self) -> Result<SpectralField> {
        let dim = self.domain.dim();
        if self.ncomp() != dim {
            return Err(Error::InvalidArgument("divergence needs a vector field".into()));
        }
        let mut out = vec![Complex64::default(); self.domain.len()];
        for (k, o) in out.iter_mut().enumerate() {
            let kv = self.domain.wavevector(k);
            for j in 0..dim {
                *o += Complex64::new(0.0, kv[j]) * self.comps[j][k];
            }
        }
        Ok(SpectralField {
            domain: self.domain.clone(),
            comps: vec![out],
        })
    }

    /// Gradient of a scalar field.
    pub fn gradient(&self) -> Result<SpectralField> {
        if self.ncomp() != 1 {
            return Err(Error::InvalidArgument("gradient needs a scalar field".into()));
        }
        let dim = self.domain.dim();
        let comps = (0..dim)
            .map(|j| {
                self.comps[0]
                    .iter()
                    .enumerate()
                    .map(|(k, z)| Complex64::new(0.0, self.domain.wavevector(k)[j]) * z)
                    .collect()
            })
            .collect();
        Ok(SpectralField {
            domain: self.domain.clone(),
            comps,
        })
    }

    pub fn laplacian(&self) -> SpectralField {
        let d = self.domain.clone();
        self.map_modes(|k| -d.k_squared(k))
    }

    /// Zeroes every mode outside the 2/3 band.
    pub fn dealiased(&self) -> SpectralField {
        let d = self.domain.clone();
        self.map_modes(|k| if d.in_band(k) { 1.0 } else { 0.0 })
    }

    /// L^2 norm over the box computed from coefficients (Plancherel).
    pub fn l2_norm(&self) -> f64 {
        let sum: f64 = self
            .comps
            .iter()
            .flat_map(|c| c.iter())
            .map(|z| z.norm_sqr())
            .sum();
        (self.domain.volume() * sum).sqrt()
    }

    /// `||grad f||_2`, the scale used for relative divergence checks.
    pub fn gradient_l2_norm(&self) -> f64 {
        let sum: f64 = self
            .comps
            .iter()
            .flat_map(|c| c.iter().enumerate())
            .map(|(k, z)| self.domain.k_squared(k) * z.norm_sqr())
            .sum();
        (self.domain.volume() * sum).sqrt()
    }

    /// Same field on a box with a different grid size.
    ///
    /// Modes representable on both grids are copied; Nyquist modes of
    /// either grid are dropped so real fields stay real.
    pub fn resample(&self, target: &Domain) -> Result<SpectralField> {
        let src = &self.domain;
        if src.dim() != target.dim() || src.box_length() != target.box_length() {
            return Err(Error::DomainMismatch);
        }
        let limit = (src.grid_points().min(target.grid_points()) / 2) as i64;
        let dim = src.dim();
        let nt = target.grid_points() as i64;
        let mut comps = vec![vec![Complex64::default(); target.len()]; self.ncomp()];
        for k in 0..src.len() {
            let w = src.integer_wavenumbers(k);
            if w[..dim].iter().any(|v| v.abs() >= limit) {
                continue;
            }
            let mut idx = [0usize; MAX_DIM];
            for axis in 0..dim {
                idx[axis] = w[axis].rem_euclid(nt) as usize;
            }
            let t = target.ravel(&idx);
            for (out, c) in comps.iter_mut().zip(&self.comps) {
                out[t] = c[k];
            }
        }
        Ok(Self {
            domain: target.clone(),
            comps,
        })
    }

    /// `||div f||_2 / ||grad f||_2` (0 for constant fields).
    pub fn relative_divergence(&self) -> Result<f64> {
        let div = self.divergence()?.l2_norm();
        let scale = self.gradient_l2_norm();
        Ok(if scale == 0.0 { div } else { div / scale })
    }

    pub fn mean_mode_norm(&self) -> f64 {
        self.comps.iter().map(|c| c[0].norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().flat_map(|c| c.iter()).all(|z| *z == Complex64::default())
    }

    /// `||f - P_band f||_2 / ||f||_2` for the modes outside the 2/3 band.
    pub fn tail_ratio(&self) -> f64 {
        let mut tail = 0.0;
        let mut total = 0.0;
        for c in &self.comps {
            for (k, z) in c.iter().enumerate() {
                let e = z.norm_sqr();
                total += e;
                if !self.domain.in_band(k) {
                    tail += e;
                }
            }
        }
        if total == 0.0 {
            0.0
        } else {
            (tail / total).sqrt()
        }
    }

    /// `L^q` norm of the pointwise Euclidean length (rectangle rule).
    pub fn lebesgue_norm(&self, q: f64) -> Result<f64> {
        check_exponent(q)?;
        Ok(physical_lebesgue_norm(&self.domain, &self.to_physical(), q))
    }

    /// Bessel-potential Sobolev norm: `L^q` norm after `(1+|k|^2)^{s/2}`.
    pub fn sobolev_norm(&self, s: f64, q: f64) -> Result<f64> {
        if !(s >= 0.0 && s.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "Sobolev order must be nonnegative, got {s}"
            )));
        }
        check_exponent(q)?;
        if s == 0.0 {
            return self.lebesgue_norm(q);
        }
        let d = self.domain.clone();
        self.map_modes(|k| (1.0 + d.k_squared(k)).powf(0.5 * s))
            .lebesgue_norm(q)
    }
}

pub(crate) fn check_exponent(q: f64) -> Result<()> {
    if q >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "Lebesgue exponent must be >= 1, got {q}"
        )))
    }
}

/// `L^q` norm of pointwise Euclidean length over component arrays.
///
/// Summation runs in grid order so repeated calls are bit-identical.
pub fn physical_lebesgue_norm(domain: &Domain, comps: &[Vec<f64>], q: f64) -> f64 {
    let len = domain.len();
    let magnitude = |i: usize| -> f64 {
        if comps.len() == 1 {
            comps[0][i].abs()
        } else {
            comps.iter().map(|c| c[i] * c[i]).sum::<f64>().sqrt()
        }
    };
    if q.is_infinite() {
        return (0..len).map(magnitude).fold(0.0, f64::max);
    }
    let max = (0..len).map(magnitude).fold(0.0, f64::max);
    if max == 0.0 {
        return 0.0;
    }
    // Normalising by the maximum keeps large q away from overflow.
    let sum: f64 = (0..len).map(|i| (magnitude(i) / max).powf(q)).sum();
    max * (domain.cell_volume() * sum).powf(1.0 / q)
}

/// `L^q` norm of a scalar function sampled on the grid.
pub fn scalar_lebesgue_norm(domain: &Domain, samples: &[f64], q: f64) -> f64 {
    let len = domain.len();
    debug_assert_eq!(samples.len(), len);
    if q.is_infinite() {
        return samples.iter().fold(0.0, |m, v| m.max(v.abs()));
    }
    let max = samples.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
    if max == 0.0 {
        return 0.0;
    }
    let sum: f64 = samples.iter().map(|v| (v.abs() / max).powf(q)).sum();
    max * (domain.cell_volume() * sum).powf(1.0 / q)
}

impl Add for &SpectralField {
    type Output = SpectralField;

    fn add(self, rhs: &SpectralField) -> SpectralField {
        self.axpy(1.0, rhs).expect("field shapes differ")
    }
}

impl Sub for &SpectralField {
    type Output = SpectralField;

    fn sub(self, rhs: &SpectralField) -> SpectralField {
        self.axpy(-1.0, rhs).expect("field shapes differ")
    }
}

impl Mul<f64> for &SpectralField {
    type Output = SpectralField;

    fn mul(self, rhs: f64) -> SpectralField {
        self.scaled(rhs)
    }
}

/// All multi-indices of total order `order` in `dim` variables, in
/// lexicographic order.
pub fn multi_indices(dim: usize, order: u32) -> Vec<Vec<i32>> {
    fn rec(dim: usize, left: i32, prefix: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
        if prefix.len() == dim - 1 {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in (0..=left).rev() {
            prefix.push(a);
            rec(dim, left - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(dim, order as i32, &mut Vec::with_capacity(dim), &mut out);
    out
}
