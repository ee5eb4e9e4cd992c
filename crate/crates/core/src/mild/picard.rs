//! Heat trajectory, the Picard map `T(v) = U + B(v, v)` and its iteration.

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::mild::duhamel::duhamel_bilinear_with;
use crate::mild::{TimeGrid, Trajectory, DIVERGENCE_TOLERANCE};
use crate::norms::{weighted_mixed_norm, MixedNormSpec};
use crate::product::Dealiasing;
use crate::stokes::heat_semigroup;

/// Exponents and derivative order of the norm that controls the iteration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ControlNorm {
    pub p: f64,
    pub q: f64,
    pub n: u32,
}

impl ControlNorm {
    /// `(d+2, d+2)` with one weighted gradient.
    pub fn default_for(dim: usize) -> Self {
        let e = dim as f64 + 2.0;
        Self { p: e, q: e, n: 1 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub delta: f64,
    pub time_nodes: usize,
    pub grading: f64,
    pub picard_max_iterations: usize,
    /// Iteration stops once the correction is this small relative to the
    /// current iterate, both measured in the control norm.
    pub contraction_tolerance: f64,
    /// Abort when an iterate's control norm exceeds this multiple of `||U||`.
    pub blowup_threshold: f64,
    /// `None` selects [`ControlNorm::default_for`].
    pub control: Option<ControlNorm>,
    pub dealiasing: Dealiasing,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            delta: 0.1,
            time_nodes: 16,
            grading: 2.0,
            picard_max_iterations: 20,
            contraction_tolerance: 1e-10,
            blowup_threshold: 10.0,
            control: None,
            dealiasing: Dealiasing::TwoThirds,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::InvalidArgument("delta must be positive".into()));
        }
        if self.picard_max_iterations == 0 {
            return Err(Error::InvalidArgument(
                "picard_max_iterations must be at least 1".into(),
            ));
        }
        if !(self.contraction_tolerance > 0.0) {
            return Err(Error::InvalidArgument(
                "contraction_tolerance must be positive".into(),
            ));
        }
        if !(self.blowup_threshold > 0.0) {
            return Err(Error::InvalidArgument("blowup_threshold must be positive".into()));
        }
        Ok(())
    }

    pub fn time_grid(&self) -> Result<TimeGrid> {
        TimeGrid::graded(self.delta, self.time_nodes, self.grading)
    }

    pub fn control_spec(&self, dim: usize) -> Result<MixedNormSpec> {
        let c = self.control.unwrap_or_else(|| ControlNorm::default_for(dim));
        let spec = MixedNormSpec::new(c.p, c.q, 0, c.n, self.delta)?;
        spec.check_scaling(dim)?;
        Ok(spec)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PicardIteration {
    /// 1-based: iteration `k` produces `v_k = T(v_{k-1})`.
    pub iteration: usize,
    /// Control norm of the new iterate `v_k`.
    pub weighted_norm: f64,
    /// `||v_k - v_{k-1}||` in the control norm.
    pub correction_norm: f64,
    /// Correction divided by `||v_{k-1}||`.
    pub relative_correction: f64,
    /// Correction divided by the previous correction.
    pub contraction_ratio: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct PicardReport {
    /// Control norm of the heat trajectory `U = v_0`.
    pub heat_norm: f64,
    pub iterations: Vec<PicardIteration>,
    /// `||T(u) - u|| / ||u||` for the returned iterate.
    pub residual: Option<f64>,
    pub converged: bool,
}

impl PicardReport {
    pub fn first_relative_correction(&self) -> Option<f64> {
        self.iterations.first().map(|i| i.relative_correction)
    }
}

/// `e^{t Delta} a` at every node.
pub fn heat_trajectory(a: &SpectralField, grid: &TimeGrid) -> Result<Trajectory> {
    check_divergence_free(a)?;
    let states = grid
        .nodes()
        .iter()
        .map(|&t| heat_semigroup(a, t))
        .collect::<Result<Vec<_>>>()?;
    Trajectory::from_parts(grid.clone(), states)
}

/// `T(v) = U + B(v, v)`.
pub fn picard_iterate(v: &Trajectory, heat: &Trajectory) -> Result<Trajectory> {
    picard_iterate_with(v, heat, Dealiasing::TwoThirds)
}

pub fn picard_iterate_with(
    v: &Trajectory,
    heat: &Trajectory,
    mode: Dealiasing,
) -> Result<Trajectory> {
    v.ensure_compatible(heat)?;
    let b = duhamel_bilinear_with(v, v, mode)?;
    heat.axpy(1.0, &b)
}

fn check_divergence_free(a: &SpectralField) -> Result<()> {
    if a.ncomp() != a.domain().dim() {
        return Err(Error::InvalidArgument("initial data must be a vector field".into()));
    }
    let relative = a.relative_divergence()?;
    if relative > DIVERGENCE_TOLERANCE {
        return Err(Error::NotDivergenceFree { relative });
    }
    Ok(())
}

fn check_mean_free(a: &SpectralField) -> Result<()> {
    let scale = a.l2_norm() / a.domain().volume().sqrt();
    if a.mean_mode_norm() > 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NotMeanFree);
    }
    Ok(())
}

/// Picard iteration from `v_0 = U` until the relative correction drops
/// below the contraction tolerance.
///
/// Loss of contraction (three consecutive growing corrections) or growth of
/// the control norm past `blowup_threshold * ||U||` is reported as
/// [`Error::NoContraction`] carrying the partial report. Hitting the
/// iteration cap while still contracting returns the last iterate with
/// `converged = false`.
pub fn solve_mild(a: &SpectralField, config: &SolverConfig) -> Result<(Trajectory, PicardReport)> {
    config.validate()?;
    check_divergence_free(a)?;
    check_mean_free(a)?;
    let dim = a.domain().dim();
    let grid = config.time_grid()?;
    let spec = config.control_spec(dim)?;
    let mode = config.dealiasing;

    let heat = heat_trajectory(a, &grid)?;
    let heat_norm = weighted_mixed_norm(&heat, &spec)?;
    let mut report = PicardReport {
        heat_norm,
        ..Default::default()
    };

    let mut current = heat.clone();
    let mut current_norm = heat_norm;
    let mut previous_correction: Option<f64> = None;
    let mut growing = 0;

    for iteration in 1..=config.picard_max_iterations {
        let next = picard_iterate_with(&current, &heat, mode)?;
        let correction = weighted_mixed_norm(&next.axpy(-1.0, &current)?, &spec)?;
        let next_norm = weighted_mixed_norm(&next, &spec)?;
        let relative_correction = if current_norm > 0.0 {
            correction / current_norm
        } else if correction == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        let contraction_ratio = previous_correction.map(|prev| {
            if prev > 0.0 {
                correction / prev
            } else if correction == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        });
        report.iterations.push(PicardIteration {
            iteration,
            weighted_norm: next_norm,
            correction_norm: correction,
            relative_correction,
            contraction_ratio,
        });

        if !next_norm.is_finite() || next_norm > config.blowup_threshold * heat_norm {
            return Err(Error::NoContraction {
                reason: format!(
                    "control norm {next_norm:e} exceeds {} x heat norm {heat_norm:e}",
                    config.blowup_threshold
                ),
                report: Box::new(report),
            });
        }
        growing = match contraction_ratio {
            Some(r) if r > 1.0 => growing + 1,
            _ => 0,
        };
        if growing >= 3 {
            return Err(Error::NoContraction {
                reason: "corrections grew for 3 consecutive iterations".into(),
                report: Box::new(report),
            });
        }

        current = next;
        current_norm = next_norm;
        previous_correction = Some(correction);
        if relative_correction <= config.contraction_tolerance {
            report.converged = true;
            break;
        }
    }

    let image = picard_iterate_with(&current, &heat, mode)?;
    let residual = weighted_mixed_norm(&image.axpy(-1.0, &current)?, &spec)?;
    report.residual = Some(if current_norm > 0.0 {
        residual / current_norm
    } else {
        residual
    });
    Ok((current, report))
}
