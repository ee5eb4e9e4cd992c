//! Step-by-step Duhamel integration for horizons beyond a single Picard
//! window. Each step uses the same exponential cell update as the Picard
//! map, with the right-end forcing found by a short fixed-point sweep.

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::mild::duhamel::{exponential_cell_update, nonlinear_forcing};
use crate::mild::{TimeGrid, Trajectory};
use crate::product::Dealiasing;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MarchOptions {
    /// Abort once `||u(t)||_2` exceeds this multiple of `||a||_2`.
    pub blowup_threshold: f64,
    pub dealiasing: Dealiasing,
    /// Relative change that ends the per-step corrector sweep.
    pub corrector_tolerance: f64,
    pub max_corrector_sweeps: usize,
}

impl Default for MarchOptions {
    fn default() -> Self {
        Self {
            blowup_threshold: 10.0,
            dealiasing: Dealiasing::TwoThirds,
            corrector_tolerance: 1e-13,
            max_corrector_sweeps: 8,
        }
    }
}

/// Integrates from `a` at `t = 0` to `t_final` in `steps` uniform steps.
pub fn time_march(
    a: &SpectralField,
    t_final: f64,
    steps: usize,
    options: &MarchOptions,
) -> Result<Trajectory> {
    let grid = TimeGrid::uniform(t_final, steps)?;
    let relative = a.relative_divergence()?;
    if relative > crate::mild::DIVERGENCE_TOLERANCE {
        return Err(Error::NotDivergenceFree { relative });
    }
    let mode = options.dealiasing;
    let initial = a.l2_norm();
    let mut states = Vec::with_capacity(steps);
    let mut u = a.clone();
    let mut t = 0.0;
    for &next_t in grid.nodes() {
        let h = next_t - t;
        let left = nonlinear_forcing(&u, &u, mode)?;
        let mut guess = exponential_cell_update(&u, &left, &left, h);
        for _ in 0..options.max_corrector_sweeps {
            let right = nonlinear_forcing(&guess, &guess, mode)?;
            let refined = exponential_cell_update(&u, &left, &right, h);
            let change = (&refined - &guess).l2_norm();
            let scale = refined.l2_norm();
            guess = refined;
            if change <= options.corrector_tolerance * scale {
                break;
            }
        }
        let norm = guess.l2_norm();
        if !norm.is_finite() || norm > options.blowup_threshold * initial {
            return Err(Error::Blowup {
                time: next_t,
                growth: if initial > 0.0 { norm / initial } else { f64::INFINITY },
            });
        }
        states.push(guess.clone());
        u = guess;
        t = next_t;
    }
    Trajectory::from_parts(grid, states)
}
