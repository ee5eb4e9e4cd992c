//! Pseudo-spectral products with 2/3-rule dealiasing.

use num_complex::Complex64;

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::field::SpectralField;

/// How quadratic products are formed.
///
/// `Off` exists for aliasing studies only; every physical run uses the
/// 2/3 rule.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Dealiasing {
    #[default]
    TwoThirds,
    Off,
}

impl Dealiasing {
    pub(crate) fn physical(self, f: &SpectralField) -> Vec<Vec<f64>> {
        match self {
            Dealiasing::TwoThirds => f.band_limited_physical(),
            Dealiasing::Off => f.to_physical(),
        }
    }

    fn finish(self, domain: &Domain, mut buf: Vec<Complex64>) -> Vec<Complex64> {
        domain.forward(&mut buf);
        if self == Dealiasing::TwoThirds {
            for (k, z) in buf.iter_mut().enumerate() {
                if !domain.in_band(k) {
                    *z = Complex64::default();
                }
            }
        }
        buf
    }
}

/// Pointwise product of a scalar `f` with every component of `g`.
///
/// Inputs are truncated to the 2/3 band before multiplying and the result
/// is truncated again, so the product of two band-limited fields is exact.
pub fn dealiased_product(f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
    product_with(f, g, Dealiasing::TwoThirds)
}

pub fn product_with(
    f: &SpectralField,
    g: &SpectralField,
    mode: Dealiasing,
) -> Result<SpectralField> {
    f.ensure_same_domain(g)?;
    if f.ncomp() != 1 {
        return Err(Error::InvalidArgument(
            "first factor of a product must be scalar".into(),
        ));
    }
    let domain = f.domain();
    let fp = mode.physical(f);
    let gp = mode.physical(g);
    let comps = gp
        .iter()
        .map(|gc| {
            let buf = fp[0]
                .iter()
                .zip(gc)
                .map(|(a, b)| Complex64::new(a * b, 0.0))
                .collect();
            mode.finish(domain, buf)
        })
        .collect();
    SpectralField::from_coefficients(domain, comps)
}

/// `d_j(u_j v)` for vector fields given as physical samples.
///
/// `u` and `v` must already be in the form `mode` expects (band-limited for
/// the 2/3 rule). When `symmetric` is set `u` and `v` are the same field
/// and only the `d(d+1)/2` distinct products are transformed.
pub(crate) fn flux_divergence(
    domain: &Domain,
    u: &[Vec<f64>],
    v: &[Vec<f64>],
    symmetric: bool,
    mode: Dealiasing,
) -> SpectralField {
    let dim = domain.dim();
    let len = domain.len();
    let mut out = vec![vec![Complex64::default(); len]; dim];
    let product = |j: usize, i: usize| -> Vec<Complex64> {
        let buf = u[j]
            .iter()
            .zip(&v[i])
            .map(|(a, b)| Complex64::new(a * b, 0.0))
            .collect();
        mode.finish(domain, buf)
    };
    for j in 0..dim {
        for i in 0..dim {
            if symmetric && i < j {
                continue;
            }
            let p = product(j, i);
            // d_j (u_j v_i) contributes to component i.
            for (k, z) in p.iter().enumerate() {
                let kv = domain.wavevector(k);
                out[i][k] += Complex64::new(0.0, kv[j]) * z;
            }
            if symmetric && i != j {
                // Same product, roles swapped: d_i (u_i v_j) for component j.
                for (k, z) in p.iter().enumerate() {
                    let kv = domain.wavevector(k);
                    out[j][k] += Complex64::new(0.0, kv[i]) * z;
                }
            }
        }
    }
    SpectralField::from_coefficients(domain, out).expect("shape is domain-consistent")
}

/// Convective form `(u . grad) v` with the same dealiasing policy.
pub fn convective_term(u: &SpectralField, v: &SpectralField, mode: Dealiasing) -> Result<SpectralField> {
    u.ensure_same_domain(v)?;
    let domain = u.domain();
    let dim = domain.dim();
    if u.ncomp() != dim || v.ncomp() != dim {
        return Err(Error::InvalidArgument("convective term needs vector fields".into()));
    }
    let up = mode.physical(u);
    let mut out = vec![vec![Complex64::default(); domain.len()]; dim];
    for j in 0..dim {
        let mut alpha = vec![0; dim];
        alpha[j] = 1;
        let dv = mode.physical(&v.derivative(&alpha)?);
        for i in 0..dim {
            let buf = up[j]
                .iter()
                .zip(&dv[i])
                .map(|(a, b)| Complex64::new(a * b, 0.0))
                .collect();
            let p = mode.finish(domain, buf);
            for (o, z) in out[i].iter_mut().zip(p) {
                *o += z;
            }
        }
    }
    SpectralField::from_coefficients(domain, out)
}

/// Divergence form `d_j(u_j v)` of the nonlinearity.
pub fn divergence_form_term(
    u: &SpectralField,
    v: &SpectralField,
    mode: Dealiasing,
) -> Result<SpectralField> {
    u.ensure_same_domain(v)?;
    let dim = u.domain().dim();
    if u.ncomp() != dim || v.ncomp() != dim {
        return Err(Error::InvalidArgument("flux needs vector fields".into()));
    }
    let up = mode.physical(u);
    if std::ptr::eq(u, v) || u == v {
        Ok(flux_divergence(u.domain(), &up, &up, true, mode))
    } else {
        let vp = mode.physical(v);
        Ok(flux_divergence(u.domain(), &up, &vp, false, mode))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn dom() -> Domain {
        Domain::new(2, 2.0 * PI, 16).unwrap()
    }

    fn max_diff(a: &SpectralField, b: &SpectralField) -> f64 {
        (a - b).components().iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn zero_factor_absorbs() {
        let d = dom();
        let f = SpectralField::zeros(&d, 1);
        let g = SpectralField::from_fn(&d, 2, |x, v| v[0] = x[1].sin());
        assert!(dealiased_product(&f, &g).unwrap().is_zero());
    }

    #[test]
    fn unit_factor_truncates_to_band() {
        let d = dom();
        let one = SpectralField::from_fn(&d, 1, |_, v| v[0] = 1.0);
        let g = SpectralField::from_fn(&d, 2, |x, v| {
            v[0] = x[0].sin() + (7.0 * x[1]).cos();
            v[1] = (2.0 * x[0]).cos();
        });
        let p = dealiased_product(&one, &g).unwrap();
        assert!(max_diff(&p, &g.dealiased()) < 1e-14);
        // cutoff is 5 for N = 16, so the k = 7 mode is gone
        let expect = SpectralField::from_fn(&d, 2, |x, v| {
            v[0] = x[0].sin();
            v[1] = (2.0 * x[0]).cos();
        });
        assert!(max_diff(&p, &expect) < 1e-14);
    }

    #[test]
    fn sine_squared_expansion() {
        let d = dom();
        let f = SpectralField::from_fn(&d, 1, |x, v| v[0] = x[0].sin());
        let g = SpectralField::from_fn(&d, 2, |x, v| v[0] = x[0].sin());
        let expect = SpectralField::from_fn(&d, 2, |x, v| v[0] = 0.5 * (1.0 - (2.0 * x[0]).cos()));
        assert!(max_diff(&dealiased_product(&f, &g).unwrap(), &expect) < 1e-14);
    }

    #[test]
    fn product_rejects_mismatch() {
        let d = dom();
        let other = Domain::new(2, 2.0 * PI, 32).unwrap();
        let f = SpectralField::zeros(&d, 1);
        let g = SpectralField::zeros(&other, 2);
        assert!(matches!(dealiased_product(&f, &g), Err(Error::DomainMismatch)));
        let v = SpectralField::zeros(&d, 2);
        assert!(dealiased_product(&v, &v).is_err());
    }

    #[test]
    fn symmetric_flux_matches_general_path() {
        let d = dom();
        let u = SpectralField::from_fn(&d, 2, |x, v| {
            v[0] = x[1].sin() + 0.2 * (x[0] + x[1]).cos();
            v[1] = (2.0 * x[0]).sin();
        });
        let up = u.band_limited_physical();
        let sym = flux_divergence(&d, &up, &up, true, Dealiasing::TwoThirds);
        let gen = flux_divergence(&d, &up, &up, false, Dealiasing::TwoThirds);
        assert!(max_diff(&sym, &gen) < 1e-14);
    }
}
