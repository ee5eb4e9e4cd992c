//! Experiment reports and their on-disk form.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::{ExperimentConfig, OutputFormat};
use crate::error::HarnessError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Converged,
    /// Still contracting when the iteration cap was reached.
    IterationCap,
    NoContraction,
    Blowup,
    Failed,
}

impl Status {
    /// Exit code for the `run` verb.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Converged | Status::IterationCap => 0,
            Status::NoContraction | Status::Blowup => 2,
            Status::Failed => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IterationRow {
    pub iteration: usize,
    pub weighted_norm: f64,
    pub correction_norm: f64,
    pub relative_correction: f64,
    /// Empty for the first iteration.
    pub contraction_ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PicardSection {
    pub control: String,
    pub heat_norm: f64,
    pub converged: bool,
    pub residual: Option<f64>,
    pub iterations: Vec<IterationRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TermRow {
    pub j: u32,
    pub k: u32,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormResult {
    pub p: f64,
    pub q: f64,
    pub m: u32,
    pub n: u32,
    pub delta: f64,
    pub value: Option<f64>,
    pub error: Option<String>,
    pub terms: Vec<TermRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateResult {
    pub k: u32,
    pub q: f64,
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    pub r_squared: Option<f64>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TimeRow {
    pub phase: &'static str,
    pub t: f64,
    pub l2: f64,
    pub lebesgue_d: f64,
    pub gradient_d: f64,
    /// `t^{1/2} ||grad u||_{L^d}`
    pub scaled_gradient: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Checks {
    pub max_relative_divergence: Option<f64>,
    /// Largest relative `L^2` error against the closed form, when known.
    pub solution_error: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MarchSection {
    pub t_start: f64,
    pub t_final: f64,
    pub steps: usize,
    pub completed: bool,
    pub message: Option<String>,
}

/// Which operation produced a block of table rows (1-based, header excluded).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ManifestEntry {
    pub table: String,
    pub first_row: usize,
    pub last_row: usize,
    pub operation: String,
    pub arguments: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub status: Status,
    pub message: Option<String>,
    pub seed: Option<u64>,
    pub checks: Checks,
    pub picard: Option<PicardSection>,
    pub march: Option<MarchSection>,
    pub norms: Vec<NormResult>,
    pub rates: Vec<RateResult>,
    #[serde(skip)]
    pub timeseries: Vec<TimeRow>,
    pub manifest: Vec<ManifestEntry>,
    pub config: ExperimentConfig,
}

#[derive(Serialize)]
struct NormCsvRow {
    spec: usize,
    p: f64,
    q: f64,
    m: u32,
    n: u32,
    delta: f64,
    j: u32,
    k: u32,
    value: f64,
}

impl ExperimentReport {
    pub fn to_toml(&self) -> Result<String, HarnessError> {
        Ok(toml::to_string(self)?)
    }

    /// Writes the selected formats; returns the files written.
    pub fn persist(&self, dir: &Path, traj: Option<&crate::trajfile::TrajectoryFile>) -> Result<Vec<PathBuf>, HarnessError> {
        fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
        let mut written = Vec::new();
        for format in &self.config.output.formats {
            match format {
                OutputFormat::Toml => {
                    let path = dir.join("report.toml");
                    fs::write(&path, self.to_toml()?).map_err(|e| HarnessError::io(&path, e))?;
                    written.push(path);
                }
                OutputFormat::Csv => {
                    written.push(self.write_picard(dir)?);
                    written.push(self.write_norms(dir)?);
                    written.push(self.write_timeseries(dir)?);
                }
                OutputFormat::Trajectory => {
                    if let Some(t) = traj {
                        let path = dir.join("solution.traj");
                        t.write(&path)?;
                        written.push(path);
                    }
                }
            }
        }
        Ok(written)
    }

    fn write_picard(&self, dir: &Path) -> Result<PathBuf, HarnessError> {
        let path = dir.join("picard.csv");
        let mut w = table_writer(&path)?;
        w.write_record([
            "iteration",
            "weighted_norm",
            "correction_norm",
            "relative_correction",
            "contraction_ratio",
        ])?;
        if let Some(p) = &self.picard {
            for row in &p.iterations {
                w.serialize(row)?;
            }
        }
        w.flush().map_err(|e| HarnessError::io(&path, e))?;
        Ok(path)
    }

    fn write_norms(&self, dir: &Path) -> Result<PathBuf, HarnessError> {
        let path = dir.join("norms.csv");
        let mut w = table_writer(&path)?;
        w.write_record(["spec", "p", "q", "m", "n", "delta", "j", "k", "value"])?;
        for (spec, r) in self.norms.iter().enumerate() {
            for t in &r.terms {
                w.serialize(NormCsvRow {
                    spec,
                    p: r.p,
                    q: r.q,
                    m: r.m,
                    n: r.n,
                    delta: r.delta,
                    j: t.j,
                    k: t.k,
                    value: t.value,
                })?;
            }
        }
        w.flush().map_err(|e| HarnessError::io(&path, e))?;
        Ok(path)
    }

    fn write_timeseries(&self, dir: &Path) -> Result<PathBuf, HarnessError> {
        let path = dir.join("timeseries.csv");
        let mut w = table_writer(&path)?;
        w.write_record(["phase", "t", "l2", "lebesgue_d", "gradient_d", "scaled_gradient"])?;
        for row in &self.timeseries {
            w.serialize(row)?;
        }
        w.flush().map_err(|e| HarnessError::io(&path, e))?;
        Ok(path)
    }
}

/// Header rows are written explicitly so empty tables still have one.
fn table_writer(path: &Path) -> Result<csv::Writer<fs::File>, HarnessError> {
    Ok(csv::WriterBuilder::new().has_headers(false).from_path(path)?)
}
