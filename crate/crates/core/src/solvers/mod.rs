//! Time integration of the rescaled compressible system and of the
//! incompressible reference system.

mod compressible;
mod etd;
mod incompressible;
mod pressure;
mod run;

pub use compressible::{nonlinearity, step_compressible, CompressibleParams, CompressibleSolver, CompressibleState};
pub use etd::{acoustic_generator, matrix_phi, scalar_phi, MatrixPhi};
pub use incompressible::{convection, step_incompressible, IncompressibleSolver, IncompressibleState};
pub use pressure::{j_of, j_value, k_of, normalize_parameters, LawKind, PressureLaw, ScaleFactors};
pub use run::{run, sample_entries, Evolve, SamplePolicy, StepPlan};
