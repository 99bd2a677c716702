//! Torus grids, transforms, Littlewood-Paley blocks and Besov-type norms.

mod besov;
mod fft;
mod field;
mod filters;
mod grid;
mod snapshot;
mod trajectory;

pub use besov::{
    besov_norm, besov_norm_components, block_norms, dyadic_block, dyadic_sum, low_cut, lp_norm, sum_blocks, Band,
    BesovIndex,
};
pub use field::{Domain, SpectralField, Truncation, VectorField};
pub use filters::{bank_with_range, build_filter_bank, filter_value, theta, LpFilterBank, Shell};
pub use grid::Grid;
pub use snapshot::{read_fields, read_snapshot, write_snapshot};
pub use trajectory::{time_besov_norm, time_lr_norm, BlockSeries, SnapshotRef, TimeFlavor, TrajectorySeries};
