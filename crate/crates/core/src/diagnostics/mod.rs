//! Data and energy norms of a run, the A-quantities, exponent admissibility,
//! time-interval splitting and rate fitting.

mod exponents;
mod fit;
mod quantities;
mod split;

pub use exponents::{validate_exponents, Condition, ExponentConfig, Verdict};
pub use fit::{convergence_rate_fit, RateFit};
pub use quantities::{
    data_norm_d, energy_norm_x, limit_norms, norm_report, quantity_a, quantity_a_tilde, restrict, y_parts,
    Interval, NormReport, StateSeries, YParts,
};
pub use split::{interval_norm, split_time_intervals, Split};
