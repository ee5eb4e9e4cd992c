//! Initial data library.

use std::f64::consts::PI;
use std::path::PathBuf;

use navier_mild::domain::MAX_DIM;
use navier_mild::stokes::leray_project;
use navier_mild::{Domain, SpectralField};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::HarnessError;
use crate::trajfile::TrajectoryFile;

/// One initial-data choice.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialData {
    TaylorGreen,
    RandomDivfree {
        /// Maximum pointwise speed after scaling.
        amplitude: f64,
        /// Mode amplitudes fall off like `|k|^{-spectral_decay}`.
        spectral_decay: f64,
        #[serde(default)]
        seed: u64,
    },
    SingularLd {
        alpha: f64,
        mollification_radius: f64,
        /// Defaults to the box centre shifted by half a cell.
        #[serde(default)]
        center: Option<Vec<f64>>,
        #[serde(default = "one")]
        scale: f64,
    },
    FromFile {
        path: PathBuf,
    },
}

fn one() -> f64 {
    1.0
}

impl InitialData {
    pub fn seed(&self) -> Option<u64> {
        match self {
            InitialData::RandomDivfree { seed, .. } => Some(*seed),
            _ => None,
        }
    }
}

/// Builds a mean-free, divergence-free field for `choice`.
pub fn make_initial_data(choice: &InitialData, domain: &Domain) -> Result<SpectralField, HarnessError> {
    match choice {
        InitialData::TaylorGreen => Ok(taylor_green(domain)),
        InitialData::RandomDivfree {
            amplitude,
            spectral_decay,
            seed,
        } => random_divfree(domain, *amplitude, *spectral_decay, *seed),
        InitialData::SingularLd {
            alpha,
            mollification_radius,
            center,
            scale,
        } => singular_ld(domain, *alpha, *mollification_radius, center.as_deref(), *scale),
        InitialData::FromFile { path } => {
            let file = TrajectoryFile::read(path)?;
            if file.domain() != domain {
                return Err(HarnessError::config(
                    "initial_data.path",
                    format!("{} was written on a different grid", path.display()),
                ));
            }
            let state = file.states.into_iter().next().ok_or_else(|| {
                HarnessError::config("initial_data.path", "trajectory file has no nodes")
            })?;
            Ok(state)
        }
    }
}

/// `(sin x1 cos x2, -cos x1 sin x2)` in 2-D and
/// `(sin x1 cos x2 cos x3, -cos x1 sin x2 cos x3, 0)` in 3-D, with the
/// fundamental wavenumber of the box.
pub fn taylor_green(domain: &Domain) -> SpectralField {
    let w = 2.0 * PI / domain.box_length();
    let dim = domain.dim();
    SpectralField::from_fn(domain, dim, |x, v| {
        let (s0, c0) = (w * x[0]).sin_cos();
        let (s1, c1) = (w * x[1]).sin_cos();
        let c2 = if dim == 3 { (w * x[2]).cos() } else { 1.0 };
        v[0] = s0 * c1 * c2;
        v[1] = -c0 * s1 * c2;
    })
}

/// Flat index of the mode `-k`.
fn mirror(domain: &Domain, flat: usize) -> usize {
    let n = domain.grid_points();
    let mut idx = domain.unravel(flat);
    for i in idx.iter_mut().take(domain.dim()) {
        *i = (n - *i) % n;
    }
    domain.ravel(&idx)
}

/// Conjugate-symmetric random coefficients on every mode, `|k|^{-decay}`
/// envelope, mean mode zero. Not projected.
pub fn random_vector_field(domain: &Domain, decay: f64, seed: u64, band_only: bool) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = domain.dim();
    let mut comps = vec![vec![Complex64::default(); domain.len()]; dim];
    for k in 0..domain.len() {
        let k2 = domain.k_squared(k);
        let envelope = if k2 == 0.0 || (band_only && !domain.in_band(k)) {
            0.0
        } else {
            k2.powf(-0.5 * decay)
        };
        for c in comps.iter_mut() {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            c[k] = envelope * Complex64::new(re, im);
        }
    }
    for c in comps.iter_mut() {
        let raw = c.clone();
        for k in 0..domain.len() {
            let j = mirror(domain, k);
            c[k] = 0.5 * (raw[k] + raw[j].conj());
        }
    }
    SpectralField::from_coefficients(domain, comps).expect("shape matches domain")
}

fn max_speed(f: &SpectralField) -> f64 {
    f.lebesgue_norm(f64::INFINITY).expect("infinity is a valid exponent")
}

/// Band-limited random divergence-free field with maximum speed `amplitude`.
pub fn random_divfree(
    domain: &Domain,
    amplitude: f64,
    spectral_decay: f64,
    seed: u64,
) -> Result<SpectralField, HarnessError> {
    if !(amplitude >= 0.0 && amplitude.is_finite()) {
        return Err(HarnessError::config(
            "initial_data.amplitude",
            format!("must be a nonnegative number, got {amplitude}"),
        ));
    }
    if !spectral_decay.is_finite() {
        return Err(HarnessError::config(
            "initial_data.spectral_decay",
            "must be finite",
        ));
    }
    if amplitude == 0.0 {
        return Ok(SpectralField::zero_vector(domain));
    }
    let f = leray_project(&random_vector_field(domain, spectral_decay, seed, true));
    let peak = max_speed(&f);
    Ok(f.scaled(amplitude / peak))
}

/// Cutoff that equals 1 up to `radius / 2` and falls to 0 at `radius`.
fn taper(r: f64, radius: f64) -> f64 {
    if r <= 0.5 * radius {
        1.0
    } else if r >= radius {
        0.0
    } else {
        let s = (r - 0.5 * radius) / (0.5 * radius);
        (0.5 * PI * s).cos().powi(2)
    }
}

/// Scalar profile `|x - x0|^{-alpha}` times the taper, sampled on the grid
/// with distances measured to the nearest periodic image.
pub fn singular_profile(domain: &Domain, alpha: f64, center: &[f64]) -> Vec<f64> {
    let l = domain.box_length();
    let h = domain.spacing();
    let radius = 0.25 * l;
    (0..domain.len())
        .map(|flat| {
            let x = domain.coordinates(flat);
            let r = (0..domain.dim())
                .map(|a| {
                    let mut y = (x[a] - center[a]).rem_euclid(l);
                    if y > 0.5 * l {
                        y -= l;
                    }
                    y * y
                })
                .sum::<f64>()
                .sqrt();
            taper(r, radius) * r.max(0.5 * h).powf(-alpha)
        })
        .collect()
}

/// Gaussian mollifier `exp(-radius^2 |k|^2 / 2)` as a multiplier.
pub fn mollify(f: &SpectralField, radius: f64) -> SpectralField {
    let d = f.domain().clone();
    f.map_modes(|k| (-0.5 * radius * radius * d.k_squared(k)).exp())
}

/// Mollified `|x - x0|^{-alpha} e_1`, Leray-projected, mean-free and
/// truncated to the dealiasing band.
pub fn singular_ld(
    domain: &Domain,
    alpha: f64,
    mollification_radius: f64,
    center: Option<&[f64]>,
    scale: f64,
) -> Result<SpectralField, HarnessError> {
    // |x|^{-alpha} is locally in L^d iff alpha d < d.
    if !(0.0..1.0).contains(&alpha) {
        return Err(HarnessError::config(
            "initial_data.alpha",
            format!("must lie in [0, 1) for the data to stay in L^d, got {alpha}"),
        ));
    }
    if !(mollification_radius > 0.0 && mollification_radius.is_finite()) {
        return Err(HarnessError::config(
            "initial_data.mollification_radius",
            format!("must be positive, got {mollification_radius}"),
        ));
    }
    if !scale.is_finite() {
        return Err(HarnessError::config("initial_data.scale", "must be finite"));
    }
    let dim = domain.dim();
    let mut x0 = [0.0; MAX_DIM];
    match center {
        Some(c) if c.len() != dim => {
            return Err(HarnessError::config(
                "initial_data.center",
                format!("needs {dim} coordinates, got {}", c.len()),
            ))
        }
        Some(c) => x0[..dim].copy_from_slice(c),
        None => {
            let mid = 0.5 * domain.box_length() + 0.5 * domain.spacing();
            x0[..dim].iter_mut().for_each(|v| *v = mid);
        }
    }
    let mut samples = vec![vec![0.0; domain.len()]; dim];
    samples[0] = singular_profile(domain, alpha, &x0[..dim]);
    let raw = SpectralField::from_physical(domain, &samples).expect("shape matches domain");
    let mut f = leray_project(&mollify(&raw, mollification_radius));
    for c in 0..dim {
        let comp = f.component_mut(c);
        comp[0] = Complex64::default();
        for (k, z) in comp.iter_mut().enumerate() {
            if !domain.in_band(k) {
                *z = Complex64::default();
            }
        }
    }
    Ok(f.scaled(scale))
}
