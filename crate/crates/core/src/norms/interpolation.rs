//! Interpolation between weighted Sobolev-in-space, Lebesgue-in-time norms.

use crate::error::{Error, Result};
use crate::mild::Trajectory;
use crate::norms::mixed::{active_nodes, check_horizon, time_lp_norm};

/// `|| t^{s/2} ||u(t)||_{W^{s,q}} ||_{L^p(0, delta)}` with the Bessel
/// multiplier defining `W^{s,q}`.
pub fn sobolev_time_norm(traj: &Trajectory, s: f64, q: f64, p: f64, delta: f64) -> Result<f64> {
    check_horizon(traj, delta)?;
    let count = active_nodes(traj, delta);
    let samples = traj.states()[..count]
        .iter()
        .map(|u| u.sobolev_norm(s, q))
        .collect::<Result<Vec<_>>>()?;
    Ok(time_lp_norm(&traj.times()[..count], &samples, 0.5 * s, p, delta))
}

/// Ratio of the two sides of
/// `||t^{m/2} u||_{W^m} <= ||t^{n/2} u||_{W^n}^{m/n} ||u||_{L^q L^p}^{1-m/n}`
/// (all norms `L^p` in time on `(0, delta)`).
///
/// The exponents are not required to sit on the scaling line: the
/// inequality is a Hölder statement valid for every `p, q >= 1`.
pub fn interpolation_check(
    traj: &Trajectory,
    m: f64,
    n: f64,
    q: f64,
    p: f64,
    delta: f64,
) -> Result<f64> {
    if !(m > 0.0 && m < n && n.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "interpolation needs 0 < m < n, got m={m}, n={n}"
        )));
    }
    if !(p >= 1.0) {
        return Err(Error::InvalidArgument(format!("time exponent must be >= 1, got {p}")));
    }
    let lhs = sobolev_time_norm(traj, m, q, p, delta)?;
    let top = sobolev_time_norm(traj, n, q, p, delta)?;
    let base = sobolev_time_norm(traj, 0.0, q, p, delta)?;
    let theta = m / n;
    let rhs = top.powf(theta) * base.powf(1.0 - theta);
    if !(rhs > 0.0) {
        return Err(Error::Degenerate("interpolation right-hand side vanishes".into()));
    }
    Ok(lhs / rhs)
}
