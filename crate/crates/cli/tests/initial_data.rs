use std::f64::consts::PI;

use navier_mild::{Domain, SpectralField};
use navier_mild_cli::data::{
    make_initial_data, mollify, random_divfree, singular_ld, singular_profile, taylor_green,
    InitialData,
};

fn torus(dim: usize, n: usize) -> Domain {
    Domain::new(dim, 2.0 * PI, n).unwrap()
}

/// `4 pi int_0^R r^{2 - 3 alpha} taper(r)^3 dr` with `R = L/4` and the
/// cos^2 taper from `R/2` to `R`: exact on the inner ball, Simpson outside.
fn radial_cube_integral(alpha: f64, l: f64) -> f64 {
    let r_out = 0.25 * l;
    let inner = (0.5 * r_out).powf(3.0 - 3.0 * alpha) / (3.0 - 3.0 * alpha);
    let panels = 2000;
    let h = 0.5 * r_out / panels as f64;
    let f = |r: f64| {
        let s = (r - 0.5 * r_out) / (0.5 * r_out);
        r.powf(2.0 - 3.0 * alpha) * (0.5 * PI * s).cos().powi(6)
    };
    let mut outer = f(0.5 * r_out) + f(r_out);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        outer += w * f(0.5 * r_out + i as f64 * h);
    }
    outer *= h / 3.0;
    4.0 * PI * (inner + outer)
}

fn profile_cube_norm(d: &Domain, alpha: f64) -> f64 {
    let c = [0.5 * d.box_length() + 0.5 * d.spacing(); 3];
    let p = singular_profile(d, alpha, &c[..d.dim()]);
    p.iter().map(|v| v.abs().powi(3)).sum::<f64>() * d.cell_volume()
}

#[test]
fn singular_profile_approaches_radial_integral() {
    let l = 2.0 * PI;
    // alpha = 1/2 is resolved quickly
    let smooth = profile_cube_norm(&torus(3, 64), 0.5);
    let oracle = radial_cube_integral(0.5, l);
    assert!((smooth / oracle - 1.0).abs() < 0.01, "{smooth} vs {oracle}");

    // Near the L^3 boundary the missing core mass scales like h^{3 - 3 alpha}.
    let alpha = 0.9;
    let oracle = radial_cube_integral(alpha, l);
    let deficits: Vec<f64> = [16usize, 32, 64]
        .iter()
        .map(|&n| oracle - profile_cube_norm(&torus(3, n), alpha))
        .collect();
    let expected = 0.5f64.powf(3.0 - 3.0 * alpha);
    for w in deficits.windows(2) {
        assert!(w[1] > 0.0);
        assert!((w[1] / w[0] - expected).abs() < 0.02, "{deficits:?}");
    }
}

#[test]
fn singular_ld_norm_settles_as_mollification_shrinks() {
    let d = torus(3, 48);
    let h = d.spacing();
    let norms: Vec<f64> = [8.0, 4.0, 2.0, 1.0]
        .iter()
        .map(|&r| singular_ld(&d, 0.5, r * h, None, 1.0).unwrap().lebesgue_norm(3.0).unwrap())
        .collect();
    let steps: Vec<f64> = norms.windows(2).map(|w| w[1] - w[0]).collect();
    assert!(steps.iter().all(|s| *s > 0.0), "{norms:?}");
    assert!(steps.windows(2).all(|w| w[1] < w[0]), "{norms:?}");

    let a = singular_ld(&d, 0.9, 3.0 * h, None, 1.0).unwrap();
    assert!(a.relative_divergence().unwrap() < 1e-13);
    assert_eq!(a.mean_mode_norm(), 0.0);
    assert!(singular_ld(&d, 1.0, h, None, 1.0).is_err());
    assert!(singular_ld(&d, 0.5, 0.0, None, 1.0).is_err());
    assert!(singular_ld(&d, 0.5, h, Some(&[1.0, 2.0]), 1.0).is_err());
}

#[test]
fn mollifier_is_a_contraction_in_l2() {
    let d = torus(2, 32);
    let f = random_divfree(&d, 1.0, 1.0, 3).unwrap();
    assert!(mollify(&f, 0.3).l2_norm() < f.l2_norm());
    assert_eq!(mollify(&f, 0.0), f);
}

#[test]
fn library_choices() {
    let d = torus(2, 16);
    let tg = taylor_green(&d);
    let hand = SpectralField::from_fn(&d, 2, |x, v| {
        v[0] = x[0].sin() * x[1].cos();
        v[1] = -x[0].cos() * x[1].sin();
    });
    assert!((&tg - &hand).l2_norm() < 1e-13);
    assert!(tg.relative_divergence().unwrap() < 1e-15);

    let zero = make_initial_data(
        &InitialData::RandomDivfree {
            amplitude: 0.0,
            spectral_decay: 2.0,
            seed: 9,
        },
        &d,
    )
    .unwrap();
    assert!(zero.is_zero());

    let r = random_divfree(&d, 0.7, 2.0, 9).unwrap();
    assert_eq!(r, random_divfree(&d, 0.7, 2.0, 9).unwrap());
    assert_ne!(r, random_divfree(&d, 0.7, 2.0, 10).unwrap());
    assert!(r.relative_divergence().unwrap() < 1e-13);
}
