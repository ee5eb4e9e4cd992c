//! Pseudo-spectral mild solutions of the incompressible Navier–Stokes
//! equations on a periodic box.
//!
//! The solution is built as the fixed point of `T(v) = U + B(v, v)` where
//! `U = e^{t Delta} a` is the heat trajectory and `B` is the Duhamel
//! bilinear form of the Stokes semigroup. Smoothing is measured with the
//! weighted norms `sum ||t^{j+k/2} D_t^j grad^k u||_{L^q_x L^p_t}` on the
//! scaling line `2/p + d/q = 1`.
//!
//! Module map:
//! - [`domain`], [`field`], [`product`]: grid, spectral fields, dealiased products
//! - [`stokes`], [`kernel`]: heat/Stokes semigroups, Leray projector, Oseen kernel
//! - [`mild`]: heat trajectory, Duhamel form, Picard iteration, time marching
//! - [`norms`]: weighted mixed norms, rate fits, interpolation and product norms

pub mod domain;
pub mod error;
pub mod field;
pub mod kernel;
pub mod mild;
pub mod norms;
pub mod product;
pub mod stokes;

pub use domain::Domain;
pub use error::{Error, Result};
pub use field::SpectralField;
pub use mild::{SolverConfig, TimeGrid, Trajectory};
pub use norms::MixedNormSpec;
pub use product::Dealiasing;
