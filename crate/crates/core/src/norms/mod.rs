//! Weighted space-time norms and the diagnostics built on them.

mod interpolation;
mod mixed;
mod product;
mod rates;

pub use interpolation::{interpolation_check, sobolev_time_norm};
pub use mixed::{
    derivative_lq_norm, time_lp_norm, weighted_mixed_norm, weighted_norm_terms,
    weighted_norm_terms_from_levels, MixedNormSpec, NormTerms, SCALING_LINE_TOLERANCE,
};
pub use product::product_norm;
pub use rates::{linear_fit, smoothing_rate_fit, RateFit};
