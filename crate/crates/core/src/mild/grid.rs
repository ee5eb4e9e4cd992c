use crate::error::{Error, Result};

/// Strictly increasing positive time nodes ending at the horizon `delta`.
///
/// Graded grids place nodes at `delta * (i/M)^gamma`, clustering them near
/// `t = 0` where the weights `t^{j+k/2}` vary fastest. The origin itself is
/// never a node.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeGrid {
    nodes: Vec<f64>,
    grading: f64,
}

impl TimeGrid {
    pub fn graded(delta: f64, count: usize, grading: f64) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "time horizon must be positive, got {delta}"
            )));
        }
        if count == 0 {
            return Err(Error::InvalidArgument("time grid needs at least one node".into()));
        }
        if !(grading >= 1.0 && grading.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "grading exponent must be >= 1, got {grading}"
            )));
        }
        let m = count as f64;
        let mut nodes: Vec<f64> = (1..=count)
            .map(|i| delta * (i as f64 / m).powf(grading))
            .collect();
        nodes[count - 1] = delta;
        Ok(Self { nodes, grading })
    }

    /// Uniform nodes `h, 2h, ..., t_final`.
    pub fn uniform(t_final: f64, steps: usize) -> Result<Self> {
        Self::graded(t_final, steps, 1.0)
    }

    /// Arbitrary nodes; used when reading trajectories back from disk.
    pub fn from_nodes(nodes: Vec<f64>, grading: f64) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidArgument("time grid needs at least one node".into()));
        }
        if nodes[0] <= 0.0 || !nodes.iter().all(|t| t.is_finite()) {
            return Err(Error::InvalidArgument("time nodes must be positive".into()));
        }
        if nodes.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument(
                "time nodes must be strictly increasing".into(),
            ));
        }
        Ok(Self { nodes, grading })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn delta(&self) -> f64 {
        *self.nodes.last().expect("grid is never empty")
    }

    pub fn grading(&self) -> f64 {
        self.grading
    }

    /// Left end of cell `i` (the origin for the first cell).
    pub fn cell_start(&self, i: usize) -> f64 {
        if i == 0 {
            0.0
        } else {
            self.nodes[i - 1]
        }
    }
}
