#![allow(dead_code)]

use std::f64::consts::PI;

use navier_mild::stokes::leray_project;
use navier_mild::{Domain, SpectralField};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn torus(dim: usize, n: usize) -> Domain {
    Domain::new(dim, 2.0 * PI, n).unwrap()
}

/// Real vector field with Gaussian coefficients on modes with every
/// `|k_i| <= band`, excluding the mean and the Nyquist planes.
pub fn random_field(domain: &Domain, band: i64, seed: u64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = domain.dim();
    let mut comps = vec![vec![Complex64::default(); domain.len()]; dim];
    for k in 1..domain.len() {
        let w = domain.integer_wavenumbers(k);
        if w[..dim].iter().any(|x| x.abs() > band) {
            continue;
        }
        for c in comps.iter_mut() {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            c[k] = Complex64::new(re, im);
        }
    }
    // Hermitian symmetry keeps the physical field real.
    let mut sym = comps.clone();
    for k in 1..domain.len() {
        let w = domain.integer_wavenumbers(k);
        let mut idx = domain.unravel(k);
        let n = domain.grid_points() as i64;
        for a in 0..dim {
            idx[a] = (-w[a]).rem_euclid(n) as usize;
        }
        let mirror = domain.ravel(&idx);
        for c in 0..dim {
            sym[c][k] = 0.5 * (comps[c][k] + comps[c][mirror].conj());
        }
    }
    SpectralField::from_coefficients(domain, sym).unwrap()
}

/// Leray-projected [`random_field`] with unit `L^2` norm times `amplitude`.
pub fn random_divfree(domain: &Domain, band: i64, seed: u64, amplitude: f64) -> SpectralField {
    let f = leray_project(&random_field(domain, band, seed));
    f.scaled(amplitude / f.l2_norm())
}

/// `(sin x1 cos x2, -cos x1 sin x2)` on the `2 pi` box.
pub fn taylor_green(domain: &Domain) -> SpectralField {
    SpectralField::from_fn(domain, 2, |x, v| {
        v[0] = x[0].sin() * x[1].cos();
        v[1] = -x[0].cos() * x[1].sin();
    })
}

pub fn rel(a: &SpectralField, b: &SpectralField) -> f64 {
    (a - b).l2_norm() / b.l2_norm()
}
