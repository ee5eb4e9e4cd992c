//! Mild solutions: `u = U + B(u, u)` on a graded time grid.

mod derivative;
mod duhamel;
mod grid;
mod march;
mod picard;
mod trajectory;

pub use derivative::{
    time_derivative, time_derivatives, time_derivatives_with, DEFAULT_TAIL_TOLERANCE,
    MAX_TIME_DERIVATIVE,
};
pub use duhamel::{duhamel_bilinear, duhamel_bilinear_with, exponential_weights, nonlinear_forcing};
pub use grid::TimeGrid;
pub use march::{time_march, MarchOptions};
pub use picard::{
    heat_trajectory, picard_iterate, picard_iterate_with, solve_mild, ControlNorm,
    PicardIteration, PicardReport, SolverConfig,
};
pub use trajectory::{Trajectory, DIVERGENCE_TOLERANCE};
