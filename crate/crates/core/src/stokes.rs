//! Heat semigroup, Leray projector, Stokes semigroup and pressure recovery,
//! all as Fourier multipliers.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::product::{flux_divergence, Dealiasing};

/// `e^{t Delta} a`.
pub fn heat_semigroup(a: &SpectralField, t: f64) -> Result<SpectralField> {
    check_time(t)?;
    if t == 0.0 {
        return Ok(a.clone());
    }
    let d = a.domain().clone();
    Ok(a.map_modes(|k| (-t * d.k_squared(k)).exp()))
}

/// Projection onto divergence-free fields: `I - k k^T / |k|^2` per mode,
/// identity on the mean mode.
pub fn leray_project(f: &SpectralField) -> SpectralField {
    project_with_sign(f, -1.0)
}

/// `I + sign * k k^T / |k|^2`; `sign = -1` is the Leray projector.
///
/// Other signs only exist so acceptance checks can be run against a
/// deliberately broken projector.
pub fn project_with_sign(f: &SpectralField, sign: f64) -> SpectralField {
    let domain = f.domain();
    let dim = domain.dim();
    assert_eq!(f.ncomp(), dim, "projection needs a vector field");
    let mut out = f.clone();
    for k in 0..domain.len() {
        let kv = domain.wavevector(k);
        let k2: f64 = kv[..dim].iter().map(|v| v * v).sum();
        if k2 == 0.0 {
            continue;
        }
        let mut kdotf = Complex64::default();
        for j in 0..dim {
            kdotf += kv[j] * f.component(j)[k];
        }
        for i in 0..dim {
            out.component_mut(i)[k] += sign * kv[i] * kdotf / k2;
        }
    }
    out
}

/// `e^{s Delta} P f`, the action of convolution with the Oseen kernel.
pub fn stokes_semigroup(f: &SpectralField, s: f64) -> Result<SpectralField> {
    heat_semigroup(&leray_project(f), s)
}

/// Pressure `(-Delta)^{-1} d_i d_j (u_i u_j)` with zero mean.
///
/// `tolerance` bounds the accepted relative divergence of `u`.
pub fn pressure_from_velocity(u: &SpectralField, tolerance: f64) -> Result<SpectralField> {
    let relative = u.relative_divergence()?;
    if relative > tolerance {
        return Err(Error::NotDivergenceFree { relative });
    }
    let domain = u.domain();
    let up = u.band_limited_physical();
    // d_j (u_j u_i), then one more divergence in i.
    let flux = flux_divergence(domain, &up, &up, true, Dealiasing::TwoThirds);
    let div = flux.divergence()?;
    let d = domain.clone();
    Ok(div.map_modes(|k| {
        let k2 = d.k_squared(k);
        if k2 == 0.0 {
            0.0
        } else {
            1.0 / k2
        }
    }))
}

pub(crate) fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::NegativeTime(t))
    }
}
