//! Pseudospectral machinery for the Mach-number-parameterized compressible
//! Navier-Stokes system on the periodic box and its incompressible limit.
//!
//! The crate is organized bottom-up:
//!
//! * [`lp_spectral`]: torus grid, FFTs, dyadic Littlewood-Paley blocks and
//!   every Besov-type norm (static and space-time).
//! * [`operators`]: Fourier multipliers (Helmholtz projections, Lame
//!   operator, effective velocity) and exact per-mode linear propagators.
//! * [`paraproduct`]: Bony decomposition, commutators and empirical
//!   probes of the product/commutator estimates.
//! * [`solvers`]: exponential integrators for the compressible and
//!   incompressible systems and the sampled run loop.
//! * [`diagnostics`]: data/energy norms, the A-quantities, exponent
//!   admissibility, interval splitting and rate fitting.

pub mod diagnostics;
pub mod error;
pub mod lp_spectral;
pub mod operators;
pub mod paraproduct;
pub mod solvers;

pub use error::{Error, Result};
pub use lp_spectral::{
    Band, BesovIndex, Domain, Grid, LpFilterBank, SpectralField, TimeFlavor, TrajectorySeries,
    VectorField,
};
