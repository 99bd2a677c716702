use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("dyadic index {j} outside filter bank range [{j_min}, {j_max}]")]
    BlockOutOfRange { j: i32, j_min: i32, j_max: i32 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),

    #[error("vacuum-adjacent state: min(1 + a) = {min_density:.3e}")]
    VacuumAdjacent { min_density: f64 },

    #[error("reduce dt: {0}")]
    ReduceDt(String),

    #[error("hypothesis violated for {lemma}: {reason}")]
    Hypothesis { lemma: String, reason: String },

    #[error("malformed data: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
