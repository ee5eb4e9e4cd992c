mod common;

use common::{random_divfree, random_field, rel, torus};
use navier_mild::field::scalar_lebesgue_norm;
use navier_mild::mild::heat_trajectory;
use navier_mild::norms::{weighted_mixed_norm, weighted_norm_terms, MixedNormSpec};
use navier_mild::product::{convective_term, divergence_form_term};
use navier_mild::stokes::{heat_semigroup, leray_project, stokes_semigroup};
use navier_mild::{Dealiasing, TimeGrid};
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(24)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn projector_is_idempotent_and_solenoidal(seed in any::<u64>(), dim in 2usize..=3) {
        let d = torus(dim, 16);
        let f = random_field(&d, 7, seed);
        let pf = leray_project(&f);
        prop_assert!(rel(&leray_project(&pf), &pf) < 1e-13);
        prop_assert!(pf.relative_divergence().unwrap() < 1e-13);
        // gradients are annihilated
        let phi = f.scalar_component(0);
        let grad = phi.gradient().unwrap();
        prop_assert!(leray_project(&grad).l2_norm() <= 1e-13 * grad.l2_norm());
    }

    #[test]
    fn projector_commutes_with_derivatives(seed in any::<u64>(), axis in 0usize..3) {
        let d = torus(3, 16);
        let f = random_field(&d, 7, seed);
        let mut alpha = [0; 3];
        alpha[axis] = 1;
        let a = leray_project(&f.derivative(&alpha).unwrap());
        let b = leray_project(&f).derivative(&alpha).unwrap();
        prop_assert!(rel(&a, &b) < 1e-13);
    }

    #[test]
    fn heat_semigroup_composes(seed in any::<u64>(), s in 0.0f64..0.5, t in 0.0f64..0.5) {
        let d = torus(2, 16);
        let f = random_field(&d, 5, seed);
        let two = heat_semigroup(&heat_semigroup(&f, s).unwrap(), t).unwrap();
        let one = heat_semigroup(&f, s + t).unwrap();
        prop_assert!(rel(&two, &one) < 1e-13);
        let a = stokes_semigroup(&f, t).unwrap();
        let b = leray_project(&heat_semigroup(&f, t).unwrap());
        prop_assert!(rel(&a, &b) < 1e-13);
    }

    #[test]
    fn lebesgue_norm_is_homogeneous(seed in any::<u64>(), lambda in -5.0f64..5.0, q in 1.0f64..8.0) {
        let d = torus(2, 16);
        let f = random_field(&d, 5, seed);
        let a = f.scaled(lambda).lebesgue_norm(q).unwrap();
        let b = lambda.abs() * f.lebesgue_norm(q).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * b.max(1e-300));
    }

    #[test]
    fn hoelder_on_grid_samples(seed in any::<u64>(), p in 1.1f64..6.0) {
        let d = torus(2, 16);
        let f = random_field(&d, 5, seed).to_physical();
        let g = random_field(&d, 5, seed ^ 0x9e37).to_physical();
        let fg: Vec<f64> = f[0].iter().zip(&g[1]).map(|(a, b)| a * b).collect();
        let dual = p / (p - 1.0);
        let lhs = scalar_lebesgue_norm(&d, &fg, 1.0);
        let rhs = scalar_lebesgue_norm(&d, &f[0], p) * scalar_lebesgue_norm(&d, &g[1], dual);
        prop_assert!(lhs <= rhs * (1.0 + 1e-12));
    }

    #[test]
    fn weighted_norm_triangle_inequality(seed in any::<u64>()) {
        let d = torus(2, 16);
        let grid = TimeGrid::graded(0.2, 8, 2.0).unwrap();
        let u = heat_trajectory(&random_divfree(&d, 5, seed, 1.0), &grid).unwrap();
        let v = heat_trajectory(&random_divfree(&d, 5, seed + 1, 2.0), &grid).unwrap();
        let w = u.axpy(1.0, &v).unwrap();
        let spec = MixedNormSpec::new(4.0, 4.0, 0, 2, 0.2).unwrap();
        let n = |t| weighted_mixed_norm(t, &spec).unwrap();
        prop_assert!(n(&w) <= n(&u) + n(&v) + 1e-10);
    }
}

#[test]
fn weighted_norm_is_monotone_in_delta() {
    let d = torus(3, 16);
    let grid = TimeGrid::graded(0.4, 12, 2.0).unwrap();
    let u = heat_trajectory(&random_divfree(&d, 5, 3, 1.0), &grid).unwrap();
    let mut last = 0.0;
    for delta in [0.01, 0.05, 0.1, 0.2, 0.3, 0.4] {
        let v = weighted_mixed_norm(&u, &MixedNormSpec::new(5.0, 5.0, 0, 1, delta).unwrap()).unwrap();
        assert!(v >= last, "delta {delta}: {v} < {last}");
        last = v;
    }
}

#[test]
fn m_zero_partial_sum_matches_m_zero_spec() {
    let d = torus(2, 16);
    let grid = TimeGrid::graded(0.1, 10, 2.0).unwrap();
    let u = heat_trajectory(&random_divfree(&d, 4, 8, 0.2), &grid).unwrap();
    let full = weighted_norm_terms(&u, &MixedNormSpec::new(4.0, 4.0, 2, 1, 0.1).unwrap()).unwrap();
    let zero = weighted_mixed_norm(&u, &MixedNormSpec::new(4.0, 4.0, 0, 1, 0.1).unwrap()).unwrap();
    assert!((full.partial(0, 1) - zero).abs() <= 1e-14 * zero);
}

#[test]
fn convective_and_divergence_forms_agree_for_solenoidal_fields() {
    for dim in [2, 3] {
        let d = torus(dim, 24);
        let u = random_divfree(&d, 7, 21, 1.0);
        let a = convective_term(&u, &u, Dealiasing::TwoThirds).unwrap();
        let b = divergence_form_term(&u, &u, Dealiasing::TwoThirds).unwrap();
        assert!(rel(&a, &b) < 1e-8, "dim {dim}: {}", rel(&a, &b));
    }
}
