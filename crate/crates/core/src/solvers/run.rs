use serde::{Deserialize, Serialize};

use super::compressible::{CompressibleSolver, CompressibleState};
use super::incompressible::{IncompressibleSolver, IncompressibleState};
use crate::error::{Error, Result};
use crate::lp_spectral::{block_norms, SpectralField};

/// A fixed-step time integrator.
pub trait Evolve {
    type State: Clone;
    fn dt(&self) -> f64;
    fn time(state: &Self::State) -> f64;
    fn step(&self, state: &Self::State) -> Result<Self::State>;
}

impl Evolve for CompressibleSolver {
    type State = CompressibleState;
    fn dt(&self) -> f64 {
        CompressibleSolver::dt(self)
    }
    fn time(state: &CompressibleState) -> f64 {
        state.t
    }
    fn step(&self, state: &CompressibleState) -> Result<CompressibleState> {
        CompressibleSolver::step(self, state)
    }
}

impl Evolve for IncompressibleSolver {
    type State = IncompressibleState;
    fn dt(&self) -> f64 {
        IncompressibleSolver::dt(self)
    }
    fn time(state: &IncompressibleState) -> f64 {
        state.t
    }
    fn step(&self, state: &IncompressibleState) -> Result<IncompressibleState> {
        IncompressibleSolver::step(self, state)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplePolicy {
    /// Sample every `k` steps and at the final time.
    Stride(usize),
    /// Sample at multiples of this time; the step is shrunk to divide it.
    Interval(f64),
}

/// Step size, step count and sampling stride for a run to `t_end`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepPlan {
    pub dt: f64,
    pub steps: usize,
    pub stride: usize,
}

impl StepPlan {
    pub fn new(t_end: f64, dt_max: f64, policy: SamplePolicy) -> Result<Self> {
        if !(t_end > 0.0) || !(dt_max > 0.0) {
            return Err(Error::InvalidArgument(format!("t_end = {t_end}, dt = {dt_max}")));
        }
        match policy {
            SamplePolicy::Stride(k) => {
                if k == 0 {
                    return Err(Error::InvalidArgument("zero sampling stride".into()));
                }
                let steps = (t_end / dt_max - 1e-9).ceil().max(1.0) as usize;
                Ok(StepPlan {
                    dt: t_end / steps as f64,
                    steps,
                    stride: k,
                })
            }
            SamplePolicy::Interval(s) => {
                if !(s > 0.0) {
                    return Err(Error::InvalidArgument(format!("sampling interval {s}")));
                }
                let samples = (t_end / s).round();
                if samples < 1.0 || (samples * s - t_end).abs() > 1e-9 * t_end {
                    return Err(Error::InvalidArgument(format!(
                        "t_end = {t_end} is not a multiple of the sampling interval {s}"
                    )));
                }
                let sub = (s / dt_max - 1e-9).ceil().max(1.0) as usize;
                Ok(StepPlan {
                    dt: s / sub as f64,
                    steps: samples as usize * sub,
                    stride: sub,
                })
            }
        }
    }
}

/// Advances `init` by `steps` steps, calling `observe` on the initial state,
/// every `stride` steps and on the final state.
pub fn run<S: Evolve>(
    solver: &S,
    init: S::State,
    steps: usize,
    stride: usize,
    mut observe: impl FnMut(&S::State) -> Result<()>,
) -> Result<S::State> {
    let stride = stride.max(1);
    let mut state = init;
    observe(&state)?;
    for k in 1..=steps {
        state = solver.step(&state)?;
        if k % stride == 0 || k == steps {
            observe(&state)?;
        }
    }
    Ok(state)
}

/// `(j, p, |Delta_j f|_{L^p})` for every block and every `p`, the entries of
/// one trajectory sample.
pub fn sample_entries(comps: &[&SpectralField], ps: &[f64]) -> Vec<(i32, f64, f64)> {
    let mut out = Vec::new();
    for &p in ps {
        out.extend(block_norms(comps, p).into_iter().map(|(j, v)| (j, p, v)));
    }
    out
}
