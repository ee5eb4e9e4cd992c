//! The Duhamel bilinear form
//! `B(u, v)(t) = -int_0^t e^{(t-s) Delta} P d_j(u_j v)(s) ds`.
//!
//! Each Fourier mode is integrated exactly against the piecewise-linear
//! interpolant of the forcing between nodes, so the stiff factor
//! `e^{-(t-s)|k|^2}` never enters a quadrature rule.

use crate::error::Result;
use crate::field::SpectralField;
use crate::mild::Trajectory;
use crate::product::{divergence_form_term, Dealiasing};
use crate::stokes::leray_project;

/// `-P d_j(u_j v)`: the forcing that enters the Duhamel integral.
pub fn nonlinear_forcing(
    u: &SpectralField,
    v: &SpectralField,
    mode: Dealiasing,
) -> Result<SpectralField> {
    Ok(leray_project(&divergence_form_term(u, v, mode)?).scaled(-1.0))
}

/// Exact weights of a linear interpolant against `e^{-z sigma}` on `[0, 1]`.
///
/// Returns `(g1, g2)` with `g1 = int e^{-z s} ds` and
/// `g2 = int s e^{-z s} ds`; the cell update is
/// `h * (g2 * F_left + (g1 - g2) * F_right)`.
pub fn exponential_weights(z: f64) -> (f64, f64) {
    if z < 0.5 {
        // Power series: the closed forms cancel catastrophically near 0.
        let mut g1 = 0.0;
        let mut g2 = 0.0;
        let mut term = 1.0; // (-z)^n / n!
        for n in 0..18 {
            let nf = n as f64;
            g1 += term / (nf + 1.0);
            g2 += term / (nf + 2.0);
            term *= -z / (nf + 1.0);
        }
        (g1, g2)
    } else {
        let e = (-z).exp();
        let g1 = -(-z).exp_m1() / z;
        let g2 = (1.0 - e * (1.0 + z)) / (z * z);
        (g1, g2)
    }
}

/// Per-mode exponential cell update shared by the Picard map and the
/// time-marching integrator:
/// `out = e^{-h|k|^2} prev + h (g2 left + (g1 - g2) right)`.
pub(crate) fn exponential_cell_update(
    prev: &SpectralField,
    left: &SpectralField,
    right: &SpectralField,
    h: f64,
) -> SpectralField {
    let domain = prev.domain();
    let ncomp = prev.ncomp();
    let mut out = prev.clone();
    for k in 0..domain.len() {
        let z = h * domain.k_squared(k);
        let decay = (-z).exp();
        let (g1, g2) = exponential_weights(z);
        let wl = h * g2;
        let wr = h * (g1 - g2);
        for c in 0..ncomp {
            let o = &mut out.component_mut(c)[k];
            *o = decay * *o + wl * left.component(c)[k] + wr * right.component(c)[k];
        }
    }
    out
}

/// `B(u, v)` at every node of the shared grid.
///
/// The first cell `(0, t_1]` uses the forcing linearly extrapolated from
/// `t_1, t_2` as its left value, so nothing is evaluated at `t = 0`.
pub fn duhamel_bilinear(u: &Trajectory, v: &Trajectory) -> Result<Trajectory> {
    duhamel_bilinear_with(u, v, Dealiasing::TwoThirds)
}

pub fn duhamel_bilinear_with(
    u: &Trajectory,
    v: &Trajectory,
    mode: Dealiasing,
) -> Result<Trajectory> {
    u.ensure_compatible(v)?;
    let grid = u.grid().clone();
    let nodes = grid.nodes();
    let m = nodes.len();
    let forcing = |i: usize| nonlinear_forcing(u.state(i), v.state(i), mode);
    let zero = SpectralField::zero_vector(u.domain());

    let first = forcing(0)?;
    if m == 1 {
        // Single node: constant forcing over (0, t_1].
        let only = exponential_cell_update(&zero, &first, &first, nodes[0]);
        return Trajectory::from_parts(grid, vec![only]);
    }
    let second = forcing(1)?;
    let slope = nodes[0] / (nodes[1] - nodes[0]);
    let extrapolated = first.axpy(slope, &(&first - &second))?;

    let mut states = Vec::with_capacity(m);
    states.push(exponential_cell_update(&zero, &extrapolated, &first, nodes[0]));
    let mut left = first;
    let mut right = second;
    for i in 1..m {
        if i > 1 {
            left = std::mem::replace(&mut right, forcing(i)?);
        }
        let next = exponential_cell_update(&states[i - 1], &left, &right, nodes[i] - nodes[i - 1]);
        states.push(next);
    }
    Trajectory::from_parts(grid, states)
}
