//! Time derivatives from the equation itself.
//!
//! Differentiating `u_t = Delta u - P d_i(u_i u)` repeatedly and applying the
//! Leibniz rule to the quadratic term gives
//!
//! `D^m u = Delta D^{m-1} u - P sum_j C(m-1, j) d_i((D^j u)_i D^{m-1-j} u)`,
//!
//! so every level follows from the lower ones at the same node.

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::mild::Trajectory;
use crate::product::{flux_divergence, Dealiasing};
use crate::stokes::leray_project;

/// Highest supported time-derivative order.
pub const MAX_TIME_DERIVATIVE: usize = 3;

/// Largest accepted `L^2` fraction outside the 2/3 band per level.
pub const DEFAULT_TAIL_TOLERANCE: f64 = 0.05;

/// `D_t^m u` at every node.
pub fn time_derivative(traj: &Trajectory, m: usize) -> Result<Trajectory> {
    let mut levels = time_derivatives(traj, m)?;
    Ok(levels.pop().expect("level 0 is always present"))
}

/// Levels `D_t^0 u, ..., D_t^m u`.
pub fn time_derivatives(traj: &Trajectory, m: usize) -> Result<Vec<Trajectory>> {
    time_derivatives_with(traj, m, DEFAULT_TAIL_TOLERANCE, Dealiasing::TwoThirds)
}

pub fn time_derivatives_with(
    traj: &Trajectory,
    m: usize,
    tail_tolerance: f64,
    mode: Dealiasing,
) -> Result<Vec<Trajectory>> {
    if m > MAX_TIME_DERIVATIVE {
        return Err(Error::InvalidArgument(format!(
            "time derivative order {m} exceeds {MAX_TIME_DERIVATIVE}"
        )));
    }
    let mut per_level: Vec<Vec<SpectralField>> = vec![Vec::with_capacity(traj.len()); m + 1];
    for state in traj.states() {
        let levels = node_derivatives(state, m, tail_tolerance, mode)?;
        for (slot, f) in per_level.iter_mut().zip(levels) {
            slot.push(f);
        }
    }
    per_level
        .into_iter()
        .map(|states| Trajectory::from_parts(traj.grid().clone(), states))
        .collect()
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn node_derivatives(
    u: &SpectralField,
    m: usize,
    tail_tolerance: f64,
    mode: Dealiasing,
) -> Result<Vec<SpectralField>> {
    let domain = u.domain();
    let mut levels = vec![u.clone()];
    let mut physical = vec![mode.physical(u)];
    for level in 1..=m {
        let mut flux = SpectralField::zero_vector(domain);
        for j in 0..level {
            let other = level - 1 - j;
            let term = flux_divergence(domain, &physical[j], &physical[other], j == other, mode);
            flux = flux.axpy(binomial(level - 1, j), &term)?;
        }
        let next = levels[level - 1]
            .laplacian()
            .axpy(-1.0, &leray_project(&flux))?;
        let tail = next.tail_ratio();
        if tail > tail_tolerance {
            return Err(Error::Underresolved {
                level,
                tail,
                tolerance: tail_tolerance,
            });
        }
        if level < m {
            physical.push(mode.physical(&next));
        }
        levels.push(next);
    }
    Ok(levels)
}
