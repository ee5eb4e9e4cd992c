use thiserror::Error;

use crate::mild::PicardReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("fields live on different domains")]
    DomainMismatch,

    #[error("trajectories use different time grids")]
    GridMismatch,

    #[error("negative time {0}")]
    NegativeTime(f64),

    #[error("field is not divergence-free (relative divergence {relative:e})")]
    NotDivergenceFree { relative: f64 },

    #[error("field has a nonzero mean mode")]
    NotMeanFree,

    #[error("exponents (p={p}, q={q}) violate 2/p + {dim}/q = 1")]
    ScalingLine { p: f64, q: f64, dim: usize },

    #[error("norm horizon {requested} exceeds trajectory horizon {available}")]
    Horizon { requested: f64, available: f64 },

    #[error("rate window spans a factor {span:.3} in time, need at least 10")]
    InsufficientDecade { span: f64 },

    #[error("derivative level {level} under-resolved: tail ratio {tail:e} above {tolerance:e}")]
    Underresolved { level: usize, tail: f64, tolerance: f64 },

    #[error("degenerate denominator: {0}")]
    Degenerate(String),

    #[error("no contraction after {} iterations: {reason}", report.iterations.len())]
    NoContraction {
        reason: String,
        report: Box<PicardReport>,
    },

    #[error("time march unstable at t={time}: norm grew by {growth:e}")]
    Blowup { time: f64, growth: f64 },
}
