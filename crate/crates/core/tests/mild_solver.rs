mod common;

use common::{random_divfree, rel, taylor_green, torus};
use navier_mild::mild::{
    duhamel_bilinear, heat_trajectory, nonlinear_forcing, picard_iterate, solve_mild,
    time_derivative, time_march, MarchOptions,
};
use navier_mild::norms::{linear_fit, weighted_mixed_norm};
use navier_mild::stokes::heat_semigroup;
use navier_mild::{Dealiasing, Domain, Error, SolverConfig, SpectralField, TimeGrid, Trajectory};
use num_complex::Complex64;

fn steady(a: &SpectralField, grid: &TimeGrid) -> Trajectory {
    Trajectory::new(grid.clone(), vec![a.clone(); grid.len()]).unwrap()
}

/// `-int_0^t e^{-(t-s)|k|^2} F_k(s) ds` per mode by the composite
/// trapezoid rule on `panels` uniform panels, `F` given as a function of `s`.
fn trapezoid_duhamel(
    domain: &Domain,
    t: f64,
    panels: usize,
    forcing: impl Fn(f64) -> SpectralField,
) -> SpectralField {
    let dim = domain.dim();
    let h = t / panels as f64;
    let mut acc = vec![vec![Complex64::default(); domain.len()]; dim];
    for i in 0..=panels {
        let s = i as f64 * h;
        let w = if i == 0 || i == panels { 0.5 * h } else { h };
        let f = forcing(s);
        for (c, out) in acc.iter_mut().enumerate() {
            for (k, o) in out.iter_mut().enumerate() {
                let decay = (-(t - s) * domain.k_squared(k)).exp();
                *o += w * decay * f.component(c)[k];
            }
        }
    }
    // nonlinear_forcing already carries the minus sign
    SpectralField::from_coefficients(domain, acc).unwrap()
}

#[test]
fn heat_trajectory_matches_semigroup_nodewise() {
    let d = torus(3, 16);
    let a = random_divfree(&d, 5, 1, 1.0);
    let grid = TimeGrid::graded(0.3, 7, 2.0).unwrap();
    let traj = heat_trajectory(&a, &grid).unwrap();
    for (t, u) in grid.nodes().iter().zip(traj.states()) {
        assert_eq!(u, &heat_semigroup(&a, *t).unwrap());
    }
    let tg = taylor_green(&torus(2, 16));
    let traj = heat_trajectory(&tg, &grid).unwrap();
    for (t, u) in grid.nodes().iter().zip(traj.states()) {
        assert!(rel(u, &tg.scaled((-2.0 * t).exp())) < 1e-14);
    }
}

#[test]
fn heat_trajectory_rejects_compressible_data() {
    let d = torus(2, 16);
    let f = SpectralField::from_fn(&d, 2, |x, v| v[0] = x[0].sin());
    let grid = TimeGrid::graded(0.1, 4, 2.0).unwrap();
    assert!(matches!(
        heat_trajectory(&f, &grid),
        Err(Error::NotDivergenceFree { .. })
    ));
}

#[test]
fn duhamel_is_bilinear() {
    let d = torus(2, 16);
    let grid = TimeGrid::graded(0.2, 6, 2.0).unwrap();
    let u = heat_trajectory(&random_divfree(&d, 5, 2, 1.0), &grid).unwrap();
    let v = heat_trajectory(&random_divfree(&d, 5, 3, 1.0), &grid).unwrap();
    let zero = Trajectory::zeros(&d, &grid);
    assert!(duhamel_bilinear(&zero, &v).unwrap().states().iter().all(|s| s.is_zero()));
    let base = duhamel_bilinear(&u, &v).unwrap();
    let scaled = duhamel_bilinear(&u.scaled(2.0), &v.scaled(-3.0)).unwrap();
    for (a, b) in scaled.states().iter().zip(base.states()) {
        assert!(rel(a, &b.scaled(-6.0)) < 1e-13);
    }
}

#[test]
fn duhamel_of_steady_flow_matches_dense_trapezoid() {
    let d = torus(2, 16);
    let a = random_divfree(&d, 1, 4, 1.0);
    let delta = 0.5;
    let m = 16;
    let grid = TimeGrid::graded(delta, m, 2.0).unwrap();
    let b = duhamel_bilinear(&steady(&a, &grid), &steady(&a, &grid)).unwrap();
    let f = nonlinear_forcing(&a, &a, Dealiasing::TwoThirds).unwrap();
    assert!(f.l2_norm() > 1e-3, "forcing must not vanish");
    for (t, state) in grid.nodes().iter().zip(b.states()) {
        // 64 times the node count on every subinterval, then one
        // Richardson step to remove the h^2 term
        let coarse = trapezoid_duhamel(&d, *t, 64 * m, |_| f.clone());
        let fine = trapezoid_duhamel(&d, *t, 128 * m, |_| f.clone());
        let oracle = fine.scaled(4.0 / 3.0).axpy(-1.0 / 3.0, &coarse).unwrap();
        assert!(rel(state, &oracle) < 1e-6, "t={t}: {}", rel(state, &oracle));
    }
}

#[test]
fn duhamel_of_heat_flow_converges_at_second_order() {
    let d = torus(2, 16);
    let a = random_divfree(&d, 3, 5, 2.0);
    let delta = 0.25;
    let forcing = |s: f64| {
        let u = heat_semigroup(&a, s).unwrap();
        nonlinear_forcing(&u, &u, Dealiasing::TwoThirds).unwrap()
    };
    let coarse = trapezoid_duhamel(&d, delta, 2048, forcing);
    let fine = trapezoid_duhamel(&d, delta, 4096, forcing);
    let oracle = fine.scaled(4.0 / 3.0).axpy(-1.0 / 3.0, &coarse).unwrap();
    let errors: Vec<f64> = [8usize, 16, 32]
        .iter()
        .map(|&m| {
            let grid = TimeGrid::uniform(delta, m).unwrap();
            let u = heat_trajectory(&a, &grid).unwrap();
            let b = duhamel_bilinear(&u, &u).unwrap();
            rel(b.state(m - 1), &oracle)
        })
        .collect();
    for w in errors.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!(order > 1.8, "errors {errors:?}");
    }
}

#[test]
fn zero_data_converges_immediately() {
    let d = torus(3, 16);
    let (traj, report) = solve_mild(&SpectralField::zero_vector(&d), &SolverConfig::default()).unwrap();
    assert!(traj.states().iter().all(|s| s.is_zero()));
    assert!(report.converged);
    assert_eq!(report.iterations.len(), 1);
}

#[test]
fn taylor_green_is_exact() {
    let d = torus(2, 32);
    let a = taylor_green(&d);
    let config = SolverConfig {
        delta: 1.0,
        ..SolverConfig::default()
    };
    let (traj, report) = solve_mild(&a, &config).unwrap();
    assert!(report.converged);
    for (t, u) in traj.times().iter().zip(traj.states()) {
        assert!(rel(u, &a.scaled((-2.0 * t).exp())) < 1e-6);
    }
    let marched = time_march(&a, 1.0, 20, &MarchOptions::default()).unwrap();
    for (t, u) in marched.times().iter().zip(marched.states()) {
        assert!(rel(u, &a.scaled((-2.0 * t).exp())) < 1e-6);
    }
    let dt = time_derivative(&traj, 1).unwrap();
    for (u, du) in traj.states().iter().zip(dt.states()) {
        assert!(rel(du, &u.scaled(-2.0)) < 1e-8);
    }
}

#[test]
fn converged_solution_is_a_fixed_point() {
    let d = torus(3, 16);
    let a = random_divfree(&d, 5, 6, 1.0);
    let config = SolverConfig::default();
    let (u, report) = solve_mild(&a, &config).unwrap();
    assert!(report.converged);
    let heat = heat_trajectory(&a, &config.time_grid().unwrap()).unwrap();
    let spec = config.control_spec(3).unwrap();
    let residual = weighted_mixed_norm(&picard_iterate(&u, &heat).unwrap().axpy(-1.0, &u).unwrap(), &spec).unwrap();
    let norm = weighted_mixed_norm(&u, &spec).unwrap();
    assert!(residual <= 2.0 * config.contraction_tolerance * norm);
    assert!(u.max_relative_divergence() < 1e-10);
}

#[test]
fn large_data_on_a_long_window_loses_contraction() {
    let d = torus(2, 32);
    let a = random_divfree(&d, 10, 7, 200.0);
    let config = SolverConfig {
        delta: 1.0,
        ..SolverConfig::default()
    };
    match solve_mild(&a, &config) {
        Err(Error::NoContraction { report, .. }) => assert!(!report.iterations.is_empty()),
        other => panic!("expected loss of contraction, got {:?}", other.map(|r| r.1)),
    }
}

#[test]
fn march_agrees_with_picard_on_the_overlap() {
    let d = torus(3, 16);
    let a = random_divfree(&d, 5, 8, 1.0);
    let delta = 0.1;
    let steps = 32;
    let config = SolverConfig {
        delta,
        time_nodes: steps,
        grading: 1.0,
        ..SolverConfig::default()
    };
    let (picard, _) = solve_mild(&a, &config).unwrap();
    let marched = time_march(&a, delta, steps, &MarchOptions::default()).unwrap();
    assert_eq!(picard.times(), marched.times());
    let scale = picard.states().iter().map(|s| s.l2_norm()).fold(0.0, f64::max);
    let gap = picard
        .states()
        .iter()
        .zip(marched.states())
        .map(|(p, m)| (p - m).l2_norm())
        .fold(0.0, f64::max);
    assert!(gap <= 1e-4 * scale, "gap {gap:e}");
}

#[test]
fn march_of_zero_is_zero_and_energy_decays() {
    let d = torus(2, 32);
    let zero = time_march(&SpectralField::zero_vector(&d), 1.0, 4, &MarchOptions::default()).unwrap();
    assert!(zero.states().iter().all(|s| s.is_zero()));

    let a = random_divfree(&d, 10, 9, 3.0);
    let traj = time_march(&a, 2.0, 200, &MarchOptions::default()).unwrap();
    let mut last = a.l2_norm();
    for u in traj.states() {
        let e = u.l2_norm();
        assert!(e <= last * (1.0 + 1e-8));
        last = e;
    }
}

#[test]
fn solutions_are_scale_covariant() {
    let d = torus(3, 16);
    let a = random_divfree(&d, 5, 10, 1.0);
    let lambda = 2.0;
    let small = Domain::new(3, d.box_length() / lambda, 16).unwrap();
    let a_small = SpectralField::from_coefficients(&small, a.scaled(lambda).into_components()).unwrap();
    let config = |delta: f64| SolverConfig {
        delta,
        time_nodes: 10,
        ..SolverConfig::default()
    };
    let (u, _) = solve_mild(&a, &config(0.1)).unwrap();
    let (v, _) = solve_mild(&a_small, &config(0.1 / (lambda * lambda))).unwrap();
    for (x, y) in u.states().iter().zip(v.states()) {
        let expected = x.scaled(lambda).into_components();
        let err: f64 = expected
            .iter()
            .zip(y.components())
            .flat_map(|(e, g)| e.iter().zip(g).map(|(a, b)| (a - b).norm_sqr()))
            .sum::<f64>()
            .sqrt();
        let scale: f64 = expected.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!(err <= 1e-6 * scale);
    }
}

#[test]
fn time_derivative_matches_centred_differences() {
    let d = torus(2, 16);
    let a = random_divfree(&d, 5, 12, 1.0);
    let t_star = 0.2;
    let mut steps = Vec::new();
    let mut errors = Vec::new();
    for k in [4usize, 8, 16, 32] {
        let h = t_star / k as f64;
        let traj = time_march(&a, t_star + h, k + 1, &MarchOptions::default()).unwrap();
        let fd = (traj.state(k) - traj.state(k - 2)).scaled(0.5 / h);
        let exact = time_derivative(&traj, 1).unwrap();
        errors.push(rel(&fd, exact.state(k - 1)).ln());
        steps.push(h.ln());
    }
    let (slope, _, _) = linear_fit(&steps, &errors);
    assert!((slope - 2.0).abs() <= 0.1, "slope {slope}");
    assert_eq!(time_derivative(&steady(&a, &TimeGrid::uniform(1.0, 2).unwrap()), 0).unwrap().state(0), &a);
}

#[test]
fn high_time_derivatives_of_rough_data_are_flagged() {
    let d = torus(2, 16);
    let a = random_divfree(&d, 8, 13, 50.0);
    let grid = TimeGrid::graded(1e-4, 2, 1.0).unwrap();
    let traj = heat_trajectory(&a, &grid).unwrap();
    assert!(matches!(
        time_derivative(&traj, 3),
        Err(Error::Underresolved { .. })
    ));
    assert!(time_derivative(&traj, 4).is_err());
}
