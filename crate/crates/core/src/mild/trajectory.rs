use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::mild::TimeGrid;

/// Relative divergence tolerated in every trajectory state.
pub const DIVERGENCE_TOLERANCE: f64 = 1e-10;

/// A velocity field sampled at the nodes of a time grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    domain: Domain,
    grid: TimeGrid,
    states: Vec<SpectralField>,
}

impl Trajectory {
    /// Checks lengths, domains and incompressibility of every state.
    pub fn new(grid: TimeGrid, states: Vec<SpectralField>) -> Result<Self> {
        let traj = Self::from_parts(grid, states)?;
        for s in &traj.states {
            let relative = s.relative_divergence()?;
            if relative > DIVERGENCE_TOLERANCE {
                return Err(Error::NotDivergenceFree { relative });
            }
        }
        Ok(traj)
    }

    /// Like [`Trajectory::new`] without the divergence check, for derived
    /// quantities whose incompressibility is guaranteed by construction.
    pub(crate) fn from_parts(grid: TimeGrid, states: Vec<SpectralField>) -> Result<Self> {
        if states.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "{} states for {} time nodes",
                states.len(),
                grid.len()
            )));
        }
        let domain = states[0].domain().clone();
        for s in &states {
            s.ensure_same_domain(&states[0])?;
            if s.ncomp() != domain.dim() {
                return Err(Error::InvalidArgument("trajectory states must be vector fields".into()));
            }
        }
        Ok(Self {
            domain,
            grid,
            states,
        })
    }

    pub fn zeros(domain: &Domain, grid: &TimeGrid) -> Self {
        Self {
            domain: domain.clone(),
            grid: grid.clone(),
            states: vec![SpectralField::zero_vector(domain); grid.len()],
        }
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn times(&self) -> &[f64] {
        self.grid.nodes()
    }

    pub fn states(&self) -> &[SpectralField] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &SpectralField {
        &self.states[i]
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn into_states(self) -> Vec<SpectralField> {
        self.states
    }

    pub fn ensure_compatible(&self, other: &Trajectory) -> Result<()> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch);
        }
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    /// `self + alpha * other`, node by node.
    pub fn axpy(&self, alpha: f64, other: &Trajectory) -> Result<Trajectory> {
        self.ensure_compatible(other)?;
        let states = self
            .states
            .iter()
            .zip(&other.states)
            .map(|(a, b)| a.axpy(alpha, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            domain: self.domain.clone(),
            grid: self.grid.clone(),
            states,
        })
    }

    pub fn scaled(&self, alpha: f64) -> Trajectory {
        Self {
            domain: self.domain.clone(),
            grid: self.grid.clone(),
            states: self.states.iter().map(|s| s.scaled(alpha)).collect(),
        }
    }

    /// Largest relative divergence over all nodes.
    pub fn max_relative_divergence(&self) -> f64 {
        self.states
            .iter()
            .map(|s| s.relative_divergence().unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    }
}
