//! Physical-space slices of the periodic Oseen (Stokes) kernel.
//!
//! The solver never needs these: convolution with the kernel is the
//! multiplier `e^{s Delta} P`. Slices exist to probe the self-similar form
//! of the kernel and the decay of its gradient norms.

use num_complex::Complex64;

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::field::scalar_lebesgue_norm;

/// `K_ij(y, s)` sampled on the grid, stored row-major in `(i, j)`.
#[derive(Clone, Debug)]
pub struct OseenKernelSlice {
    domain: Domain,
    time: f64,
    entries: Vec<Vec<f64>>,
}

/// Multiplier of the kernel entry `(i, j)` at mode `k`, including the
/// `1/L^d` that turns a multiplier into convolution-kernel coefficients.
fn entry_multiplier(domain: &Domain, s: f64, i: usize, j: usize, k: usize) -> f64 {
    let kv = domain.wavevector(k);
    let eff: f64 = kv[..domain.dim()].iter().map(|v| v * v).sum();
    let delta = if i == j { 1.0 } else { 0.0 };
    let proj = if eff == 0.0 {
        delta
    } else {
        delta - kv[i] * kv[j] / eff
    };
    proj * (-s * domain.k_squared(k)).exp() / domain.volume()
}

fn check_kernel_time(s: f64) -> Result<()> {
    if s > 0.0 && s.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "kernel time must be positive, got {s}"
        )))
    }
}

impl OseenKernelSlice {
    pub fn new(domain: &Domain, s: f64) -> Result<Self> {
        check_kernel_time(s)?;
        let dim = domain.dim();
        let mut entries: Vec<Vec<f64>> = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                if j < i {
                    // symmetric
                    let copy: Vec<f64> = entries[j * dim + i].clone();
                    entries.push(copy);
                    continue;
                }
                let mut buf: Vec<Complex64> = (0..domain.len())
                    .map(|k| Complex64::new(entry_multiplier(domain, s, i, j, k), 0.0))
                    .collect();
                domain.inverse(&mut buf);
                entries.push(buf.into_iter().map(|z| z.re).collect());
            }
        }
        Ok(Self {
            domain: domain.clone(),
            time: s,
            entries,
        })
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn entry(&self, i: usize, j: usize) -> &[f64] {
        &self.entries[i * self.domain.dim() + j]
    }

    /// Frobenius norm of the kernel matrix at one grid point.
    pub fn frobenius_at(&self, flat: usize) -> f64 {
        self.entries.iter().map(|e| e[flat] * e[flat]).sum::<f64>().sqrt()
    }

    /// Rectangle-rule integral of one entry over the box.
    pub fn integral(&self, i: usize, j: usize) -> f64 {
        self.entry(i, j).iter().sum::<f64>() * self.domain.cell_volume()
    }

    /// Minimum-image distance from the origin to a grid point.
    pub fn distance(&self, flat: usize) -> f64 {
        periodic_distance(&self.domain, flat)
    }

    /// `(min, max)` of `|y|^d ||K(y, s)||_F` over grid points with
    /// `inner <= |y| <= outer`.
    pub fn far_field_band(&self, inner: f64, outer: f64) -> Option<(f64, f64)> {
        let dim = self.domain.dim() as i32;
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        for flat in 0..self.domain.len() {
            let r = self.distance(flat);
            if r < inner || r > outer {
                continue;
            }
            let v = r.powi(dim) * self.frobenius_at(flat);
            lo = lo.min(v);
            hi = hi.max(v);
        }
        lo.is_finite().then_some((lo, hi))
    }
}

pub(crate) fn periodic_distance(domain: &Domain, flat: usize) -> f64 {
    let l = domain.box_length();
    domain.coordinates(flat)[..domain.dim()]
        .iter()
        .map(|&x| {
            let y = if x > 0.5 * l { x - l } else { x };
            y * y
        })
        .sum::<f64>()
        .sqrt()
}

/// `sum_j || d_{x_j} K(., s) ||_{L^{q'}}`, `q' = q/(q-1)`, with the matrix
/// entries combined pointwise in the Frobenius norm.
pub fn kernel_gradient_norm(domain: &Domain, s: f64, q: f64) -> Result<f64> {
    check_kernel_time(s)?;
    let dim = domain.dim();
    if !(q >= dim as f64 && q <= dim as f64 + 2.0) {
        return Err(Error::InvalidArgument(format!(
            "kernel exponent q must lie in [{dim}, {}], got {q}",
            dim + 2
        )));
    }
    // The box is a cube, so permuting axes maps d_{x_l} K onto d_{x_0} K
    // with the matrix indices permuted; the Frobenius magnitude and hence
    // every term of the sum are equal.
    Ok(dim as f64 * axis_gradient_norm(domain, s, q / (q - 1.0), 0))
}

/// `|| d_{x_l} K(., s) ||_{L^r}` with the entries combined in the
/// Frobenius norm.
fn axis_gradient_norm(domain: &Domain, s: f64, r: f64, l: usize) -> f64 {
    let dim = domain.dim();
    let len = domain.len();
    let mut buf = vec![Complex64::default(); len];
    let mut sq = vec![0.0; len];
    for i in 0..dim {
        for j in i..dim {
            for (k, z) in buf.iter_mut().enumerate() {
                let kl = domain.wavevector(k)[l];
                *z = Complex64::new(0.0, kl * entry_multiplier(domain, s, i, j, k));
            }
            domain.inverse(&mut buf);
            let weight = if i == j { 1.0 } else { 2.0 };
            for (acc, z) in sq.iter_mut().zip(&buf) {
                *acc += weight * z.re * z.re;
            }
        }
    }
    let mag: Vec<f64> = sq.into_iter().map(f64::sqrt).collect();
    scalar_lebesgue_norm(domain, &mag, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn rejects_nonpositive_time() {
        let d = Domain::new(2, 2.0 * PI, 16).unwrap();
        assert!(OseenKernelSlice::new(&d, 0.0).is_err());
        assert!(kernel_gradient_norm(&d, -1.0, 2.0).is_err());
        assert!(kernel_gradient_norm(&d, 0.1, 5.0).is_err());
    }

    #[test]
    fn slice_is_symmetric_and_trace_integrates_to_dim() {
        let d = Domain::new(3, 2.0 * PI, 16).unwrap();
        let k = OseenKernelSlice::new(&d, 0.2).unwrap();
        assert_eq!(k.entry(0, 2), k.entry(2, 0));
        let trace: f64 = (0..3).map(|i| k.integral(i, i)).sum();
        assert!((trace - 3.0).abs() < 1e-12);
        assert!(k.integral(0, 1).abs() < 1e-13);
    }

    #[test]
    fn rows_are_divergence_free() {
        let d = Domain::new(2, 2.0 * PI, 32).unwrap();
        let slice = OseenKernelSlice::new(&d, 0.05).unwrap();
        for i in 0..2 {
            let row: Vec<Vec<f64>> = (0..2).map(|j| slice.entry(i, j).to_vec()).collect();
            let f = crate::field::SpectralField::from_physical(&d, &row).unwrap();
            assert!(f.relative_divergence().unwrap() < 1e-12);
        }
    }

    #[test]
    fn axis_terms_agree() {
        let d = Domain::new(3, 2.0 * PI, 16).unwrap();
        let first = axis_gradient_norm(&d, 0.05, 1.5, 0);
        for l in 1..3 {
            let other = axis_gradient_norm(&d, 0.05, 1.5, l);
            assert!((other / first - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn doubling_box_rescales_exactly() {
        let s = 0.03;
        let a = Domain::new(2, 2.0 * PI, 32).unwrap();
        let b = Domain::new(2, 4.0 * PI, 32).unwrap();
        let k1 = OseenKernelSlice::new(&a, s).unwrap();
        let k2 = OseenKernelSlice::new(&b, 4.0 * s).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                for (x, y) in k1.entry(i, j).iter().zip(k2.entry(i, j)) {
                    assert!((x / 4.0 - y).abs() <= 1e-14 * x.abs().max(1.0));
                }
            }
        }
        let n1 = kernel_gradient_norm(&a, s, 3.0).unwrap();
        let n2 = kernel_gradient_norm(&b, 4.0 * s, 3.0).unwrap();
        let expect = 4f64.powf(-(3.0 + 2.0) / 6.0);
        assert!((n2 / n1 - expect).abs() < 1e-12);
    }
}
