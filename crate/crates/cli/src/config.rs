//! Experiment configuration files (TOML, unknown keys rejected).

use std::fs;
use std::path::{Path, PathBuf};

use navier_mild::mild::ControlNorm;
use navier_mild::{Dealiasing, Domain, MixedNormSpec, SolverConfig};
use serde::{Deserialize, Serialize};

use crate::data::InitialData;
use crate::error::HarnessError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub domain: DomainConfig,
    #[serde(default)]
    pub solver: SolverSection,
    /// Required; kept optional so a missing table gives a named error.
    #[serde(default)]
    pub initial_data: Option<InitialData>,
    #[serde(default)]
    pub norms: Vec<NormSpecConfig>,
    #[serde(default)]
    pub rates: Vec<RateConfig>,
    #[serde(default)]
    pub march: Option<MarchConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainConfig {
    pub dim: usize,
    #[serde(default = "two_pi")]
    pub box_length: f64,
    pub grid_points: usize,
}

fn two_pi() -> f64 {
    2.0 * std::f64::consts::PI
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DealiasingChoice {
    #[default]
    TwoThirds,
    Off,
}

impl From<DealiasingChoice> for Dealiasing {
    fn from(c: DealiasingChoice) -> Self {
        match c {
            DealiasingChoice::TwoThirds => Dealiasing::TwoThirds,
            DealiasingChoice::Off => Dealiasing::Off,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControlConfig {
    pub p: f64,
    pub q: f64,
    pub n: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSection {
    pub delta: f64,
    pub time_nodes: usize,
    pub grading: f64,
    pub picard_max_iterations: usize,
    pub contraction_tolerance: f64,
    pub blowup_threshold: f64,
    pub dealiasing: DealiasingChoice,
    pub control: Option<ControlConfig>,
}

impl Default for SolverSection {
    fn default() -> Self {
        let s = SolverConfig::default();
        Self {
            delta: s.delta,
            time_nodes: s.time_nodes,
            grading: s.grading,
            picard_max_iterations: s.picard_max_iterations,
            contraction_tolerance: s.contraction_tolerance,
            blowup_threshold: s.blowup_threshold,
            dealiasing: DealiasingChoice::TwoThirds,
            control: None,
        }
    }
}

impl SolverSection {
    pub fn to_solver(&self) -> SolverConfig {
        SolverConfig {
            delta: self.delta,
            time_nodes: self.time_nodes,
            grading: self.grading,
            picard_max_iterations: self.picard_max_iterations,
            contraction_tolerance: self.contraction_tolerance,
            blowup_threshold: self.blowup_threshold,
            control: self.control.map(|c| ControlNorm {
                p: c.p,
                q: c.q,
                n: c.n,
            }),
            dealiasing: self.dealiasing.into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormSpecConfig {
    pub p: f64,
    pub q: f64,
    #[serde(default)]
    pub m: u32,
    #[serde(default)]
    pub n: u32,
    /// Defaults to the solver horizon.
    #[serde(default)]
    pub delta: Option<f64>,
}

/// Decay-rate fit of `||grad^k u(t)||_{L^q}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RateConfig {
    pub k: u32,
    pub q: f64,
    #[serde(default)]
    pub t_min: Option<f64>,
    #[serde(default)]
    pub t_max: Option<f64>,
}

/// Uniform-step continuation from the end of the Picard window.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarchConfig {
    pub t_final: f64,
    pub steps: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    /// `report.toml`
    Toml,
    /// `picard.csv`, `norms.csv`, `timeseries.csv`
    Csv,
    /// `solution.traj`
    Trajectory,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub directory: PathBuf,
    pub formats: Vec<OutputFormat>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            directory: PathBuf::from("nsmild-out"),
            formats: vec![OutputFormat::Toml, OutputFormat::Csv],
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, HarnessError> {
        let config: Self = toml::from_str(text)?;
        // serde lets unit variants of a tagged enum swallow stray keys.
        if config.initial_data == Some(InitialData::TaylorGreen) {
            let raw: toml::Table = toml::from_str(text)?;
            if let Some(table) = raw.get("initial_data").and_then(|v| v.as_table()) {
                if let Some(key) = table.keys().find(|k| *k != "kind") {
                    return Err(HarnessError::config(
                        "initial_data",
                        format!("unknown key `{key}` for kind taylor_green"),
                    ));
                }
            }
        }
        Ok(config)
    }

    /// Parses a file; a relative output directory is resolved against the
    /// file's location.
    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        let mut config = Self::from_toml(&text)?;
        if config.output.directory.is_relative() {
            if let Some(parent) = path.parent() {
                config.output.directory = parent.join(&config.output.directory);
            }
        }
        if let Some(InitialData::FromFile { path: data }) = &mut config.initial_data {
            if data.is_relative() {
                if let Some(parent) = path.parent() {
                    *data = parent.join(&*data);
                }
            }
        }
        Ok(config)
    }

    pub fn build_domain(&self) -> Result<Domain, HarnessError> {
        let d = &self.domain;
        Domain::new(d.dim, d.box_length, d.grid_points)
            .map_err(|e| HarnessError::config("domain", e.to_string()))
    }

    pub fn initial_data(&self) -> Result<&InitialData, HarnessError> {
        self.initial_data
            .as_ref()
            .ok_or_else(|| HarnessError::config("initial_data", "missing; exactly one choice is required"))
    }

    /// Norm specs with the default horizon filled in.
    pub fn norm_specs(&self) -> Result<Vec<MixedNormSpec>, HarnessError> {
        self.norms
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let field = format!("norms[{i}]");
                let delta = s.delta.unwrap_or(self.solver.delta);
                let spec = MixedNormSpec::new(s.p, s.q, s.m, s.n, delta)
                    .map_err(|e| HarnessError::config(&field, e.to_string()))?;
                spec.check_scaling(self.domain.dim)
                    .map_err(|e| HarnessError::config(&field, e.to_string()))?;
                if delta > self.solver.delta * (1.0 + 1e-12) {
                    return Err(HarnessError::config(
                        &field,
                        format!("horizon {delta} exceeds the solver horizon {}", self.solver.delta),
                    ));
                }
                Ok(spec)
            })
            .collect()
    }

    /// Checks everything that can be checked before running.
    pub fn validate(&self) -> Result<(), HarnessError> {
        let domain = self.build_domain()?;
        self.initial_data()?;
        let solver = self.solver.to_solver();
        solver
            .validate()
            .and_then(|_| solver.time_grid().map(|_| ()))
            .and_then(|_| solver.control_spec(domain.dim()).map(|_| ()))
            .map_err(|e| HarnessError::config("solver", e.to_string()))?;
        self.norm_specs()?;
        for (i, r) in self.rates.iter().enumerate() {
            if !(r.q >= 1.0) {
                return Err(HarnessError::config(
                    format!("rates[{i}].q"),
                    format!("must be >= 1, got {}", r.q),
                ));
            }
        }
        if let Some(m) = &self.march {
            if !(m.t_final > self.solver.delta) || m.steps == 0 {
                return Err(HarnessError::config(
                    "march",
                    "t_final must exceed solver.delta and steps must be positive",
                ));
            }
        }
        if self.output.formats.is_empty() {
            return Err(HarnessError::config("output.formats", "no output format selected"));
        }
        check_writable(&self.output.directory)
    }
}

fn check_writable(dir: &Path) -> Result<(), HarnessError> {
    let fail = |e: std::io::Error| {
        HarnessError::config("output.directory", format!("{}: {e}", dir.display()))
    };
    fs::create_dir_all(dir).map_err(fail)?;
    let probe = dir.join(".nsmild-write-probe");
    fs::write(&probe, b"").map_err(fail)?;
    fs::remove_file(&probe).map_err(fail)
}
