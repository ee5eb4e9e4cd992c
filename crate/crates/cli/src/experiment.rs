//! One experiment: data, Picard solve, optional continuation, diagnostics.

use navier_mild::mild::{solve_mild, time_march, MarchOptions, PicardReport};
use navier_mild::norms::{derivative_lq_norm, smoothing_rate_fit, weighted_norm_terms};
use navier_mild::{Error as SolverError, SpectralField, Trajectory};

use crate::config::ExperimentConfig;
use crate::data::{make_initial_data, taylor_green, InitialData};
use crate::error::HarnessError;
use crate::report::{
    Checks, ExperimentReport, IterationRow, ManifestEntry, MarchSection, NormResult, PicardSection,
    RateResult, Status, TermRow, TimeRow,
};
use crate::trajfile::TrajectoryFile;

/// Result of [`run_experiment`] together with the solution, if any.
pub struct ExperimentOutcome {
    pub report: ExperimentReport,
    pub trajectory: Option<Trajectory>,
}

/// Validates, runs and persists an experiment.
///
/// Configuration problems are returned as errors. Solver failures (loss of
/// contraction, blow-up, under-resolution) end up in a report whose status
/// says so; the report is still written.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutcome, HarnessError> {
    config.validate()?;
    let outcome = execute(config)?;
    let file = outcome.trajectory.as_ref().map(TrajectoryFile::from_trajectory);
    outcome
        .report
        .persist(&config.output.directory, file.as_ref())?;
    Ok(outcome)
}

/// Everything except persistence.
pub fn execute(config: &ExperimentConfig) -> Result<ExperimentOutcome, HarnessError> {
    let domain = config.build_domain()?;
    let choice = config.initial_data()?;
    let specs = config.norm_specs()?;
    let a = make_initial_data(choice, &domain)?;
    let solver = config.solver.to_solver();
    let control = solver.control_spec(domain.dim())?;

    let mut report = ExperimentReport {
        status: Status::Converged,
        message: None,
        seed: choice.seed(),
        checks: Checks::default(),
        picard: None,
        march: None,
        norms: Vec::new(),
        rates: Vec::new(),
        timeseries: Vec::new(),
        manifest: Vec::new(),
        config: config.clone(),
    };
    let control_label = format!(
        "p={},q={},m=0,n={},delta={}",
        control.p, control.q, control.n, control.delta
    );

    let traj = match solve_mild(&a, &solver) {
        Ok((traj, picard)) => {
            report.status = if picard.converged {
                Status::Converged
            } else {
                Status::IterationCap
            };
            report.picard = Some(picard_section(&picard, &control_label));
            traj
        }
        Err(SolverError::NoContraction { reason, report: partial }) => {
            report.status = Status::NoContraction;
            report.message = Some(reason);
            report.picard = Some(picard_section(&partial, &control_label));
            finish_manifest(&mut report, &control_label);
            return Ok(ExperimentOutcome {
                report,
                trajectory: None,
            });
        }
        Err(e) => {
            report.status = Status::Failed;
            report.message = Some(e.to_string());
            return Ok(ExperimentOutcome {
                report,
                trajectory: None,
            });
        }
    };

    report.checks.max_relative_divergence = Some(traj.max_relative_divergence());
    if matches!(choice, InitialData::TaylorGreen) && domain.dim() == 2 {
        report.checks.solution_error = Some(taylor_green_error(&traj));
    }

    for spec in &specs {
        let mut row = NormResult {
            p: spec.p,
            q: spec.q,
            m: spec.m,
            n: spec.n,
            delta: spec.delta,
            value: None,
            error: None,
            terms: Vec::new(),
        };
        match weighted_norm_terms(&traj, spec) {
            Ok(terms) => {
                row.value = Some(terms.total());
                for j in 0..=spec.m {
                    for k in 0..=spec.n {
                        row.terms.push(TermRow {
                            j,
                            k,
                            value: terms.get(j, k),
                        });
                    }
                }
            }
            Err(e) => row.error = Some(e.to_string()),
        }
        report.norms.push(row);
    }

    for r in &config.rates {
        let window = match (r.t_min, r.t_max) {
            (None, None) => None,
            (lo, hi) => Some((lo.unwrap_or(0.0), hi.unwrap_or(f64::INFINITY))),
        };
        report.rates.push(match smoothing_rate_fit(&traj, r.k, r.q, window) {
            Ok(fit) => RateResult {
                k: r.k,
                q: r.q,
                slope: Some(fit.slope),
                intercept: Some(fit.intercept),
                r_squared: Some(fit.r_squared),
                error: None,
            },
            Err(e) => RateResult {
                k: r.k,
                q: r.q,
                slope: None,
                intercept: None,
                r_squared: None,
                error: Some(e.to_string()),
            },
        });
    }

    let dim = domain.dim() as f64;
    for (t, u) in traj.times().iter().zip(traj.states()) {
        report.timeseries.push(time_row("picard", *t, u, dim)?);
    }

    if let Some(m) = &config.march {
        let start = *traj.times().last().expect("trajectory is never empty");
        let last = traj.state(traj.len() - 1);
        let options = MarchOptions {
            blowup_threshold: solver.blowup_threshold,
            dealiasing: solver.dealiasing,
            ..MarchOptions::default()
        };
        let mut section = MarchSection {
            t_start: start,
            t_final: m.t_final,
            steps: m.steps,
            completed: true,
            message: None,
        };
        match time_march(last, m.t_final - start, m.steps, &options) {
            Ok(cont) => {
                for (t, u) in cont.times().iter().zip(cont.states()) {
                    report.timeseries.push(time_row("march", start + t, u, dim)?);
                }
            }
            Err(e @ SolverError::Blowup { .. }) => {
                report.status = Status::Blowup;
                section.completed = false;
                section.message = Some(e.to_string());
            }
            Err(e) => {
                report.status = Status::Failed;
                section.completed = false;
                section.message = Some(e.to_string());
            }
        }
        report.march = Some(section);
    }

    finish_manifest(&mut report, &control_label);
    Ok(ExperimentOutcome {
        report,
        trajectory: Some(traj),
    })
}

fn picard_section(p: &PicardReport, control: &str) -> PicardSection {
    PicardSection {
        control: control.to_string(),
        heat_norm: p.heat_norm,
        converged: p.converged,
        residual: p.residual,
        iterations: p
            .iterations
            .iter()
            .map(|i| IterationRow {
                iteration: i.iteration,
                weighted_norm: i.weighted_norm,
                correction_norm: i.correction_norm,
                relative_correction: i.relative_correction,
                contraction_ratio: i.contraction_ratio,
            })
            .collect(),
    }
}

fn time_row(phase: &'static str, t: f64, u: &SpectralField, dim: f64) -> Result<TimeRow, HarnessError> {
    let gradient_d = derivative_lq_norm(u, 1, dim)?;
    Ok(TimeRow {
        phase,
        t,
        l2: u.l2_norm(),
        lebesgue_d: u.lebesgue_norm(dim)?,
        gradient_d,
        scaled_gradient: t.sqrt() * gradient_d,
    })
}

/// Largest relative `L^2` distance from `e^{-2 w^2 t} a` over the nodes,
/// `w` the fundamental wavenumber.
pub fn taylor_green_error(traj: &Trajectory) -> f64 {
    let a = taylor_green(traj.domain());
    let w = 2.0 * std::f64::consts::PI / traj.domain().box_length();
    traj.times()
        .iter()
        .zip(traj.states())
        .map(|(t, u)| {
            let exact = a.scaled((-2.0 * w * w * t).exp());
            (u - &exact).l2_norm() / exact.l2_norm()
        })
        .fold(0.0, f64::max)
}

fn finish_manifest(report: &mut ExperimentReport, control: &str) {
    let mut manifest = Vec::new();
    if let Some(p) = &report.picard {
        if !p.iterations.is_empty() {
            manifest.push(ManifestEntry {
                table: "picard.csv".into(),
                first_row: 1,
                last_row: p.iterations.len(),
                operation: "solve_mild".into(),
                arguments: format!("control {control}"),
            });
        }
    }
    let mut row = 1;
    for (i, n) in report.norms.iter().enumerate() {
        if n.terms.is_empty() {
            continue;
        }
        manifest.push(ManifestEntry {
            table: "norms.csv".into(),
            first_row: row,
            last_row: row + n.terms.len() - 1,
            operation: "weighted_norm_terms".into(),
            arguments: format!(
                "spec {i}: p={},q={},m={},n={},delta={}",
                n.p, n.q, n.m, n.n, n.delta
            ),
        });
        row += n.terms.len();
    }
    for (phase, operation) in [("picard", "solve_mild"), ("march", "time_march")] {
        let rows: Vec<usize> = report
            .timeseries
            .iter()
            .enumerate()
            .filter(|(_, r)| r.phase == phase)
            .map(|(i, _)| i + 1)
            .collect();
        if let (Some(&first), Some(&last)) = (rows.first(), rows.last()) {
            manifest.push(ManifestEntry {
                table: "timeseries.csv".into(),
                first_row: first,
                last_row: last,
                operation: format!("{operation} states; l2_norm, lebesgue_norm, derivative_lq_norm"),
                arguments: "q = d".into(),
            });
        }
    }
    for (i, r) in report.rates.iter().enumerate() {
        manifest.push(ManifestEntry {
            table: "report.toml".into(),
            first_row: i + 1,
            last_row: i + 1,
            operation: "smoothing_rate_fit".into(),
            arguments: format!("k={},q={}", r.k, r.q),
        });
    }
    report.manifest = manifest;
}
