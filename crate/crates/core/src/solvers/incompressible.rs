use num_complex::Complex64;
use std::collections::HashMap;
use std::sync::Arc;

use super::etd::scalar_phi;
use crate::error::{Error, Result};
use crate::lp_spectral::{Domain, SpectralField, VectorField};
use crate::operators::helmholtz_p;

/// Divergence-free velocity `w` at time `t`.
#[derive(Debug, Clone)]
pub struct IncompressibleState {
    pub w: VectorField,
    pub t: f64,
}

impl IncompressibleState {
    /// Projects `w` onto divergence-free fields.
    pub fn new(w: VectorField) -> Self {
        IncompressibleState { w: helmholtz_p(&w), t: 0.0 }
    }

    pub fn domain(&self) -> &Arc<Domain> {
        self.w.domain()
    }
}

/// ETDRK2 for `w_t - mu Lap w = -P(w . grad w)`.
pub struct IncompressibleSolver {
    domain: Arc<Domain>,
    mu: f64,
    dt: f64,
    slot: Vec<usize>,
    coeffs: Vec<(f64, f64, f64)>,
}

impl IncompressibleSolver {
    pub fn new(domain: &Arc<Domain>, mu: f64, dt: f64) -> Result<Self> {
        if !(mu >= 0.0) {
            return Err(Error::InvalidArgument(format!("viscosity {mu}")));
        }
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::InvalidArgument(format!("time step {dt}")));
        }
        let unit = domain.grid().wavenumber_unit();
        let mut by_shell: HashMap<i64, usize> = HashMap::new();
        let mut coeffs = Vec::new();
        let slot = (0..domain.len())
            .map(|idx| {
                let k2 = domain.mode(idx).iter().map(|x| x * x).sum::<i64>();
                *by_shell.entry(k2).or_insert_with(|| {
                    coeffs.push(scalar_phi(-mu * unit * unit * k2 as f64 * dt));
                    coeffs.len() - 1
                })
            })
            .collect();
        Ok(IncompressibleSolver {
            domain: domain.clone(),
            mu,
            dt,
            slot,
            coeffs,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    fn apply(&self, pick: fn(&(f64, f64, f64)) -> f64, w: &VectorField) -> VectorField {
        w.map(|c| c.map_modes(|idx| Complex64::new(pick(&self.coeffs[self.slot[idx]]), 0.0)))
    }

    pub fn step(&self, state: &IncompressibleState) -> Result<IncompressibleState> {
        if !self.domain.same_grid(state.domain()) {
            return Err(Error::GridMismatch);
        }
        let h = self.dt;
        let n0 = convection(&state.w)?;
        let mut w = self.apply(|c| c.0, &state.w);
        w.axpy(h, &self.apply(|c| c.1, &n0));
        let n1 = convection(&w)?;
        w.axpy(h, &self.apply(|c| c.2, &(&n1 - &n0)));
        Ok(IncompressibleState {
            w: helmholtz_p(&w),
            t: state.t + h,
        })
    }
}

/// `-P(w . grad w)` on the 3/2-padded grid.
pub fn convection(w: &VectorField) -> Result<VectorField> {
    let dom = w.domain().clone();
    let d = dom.d();
    let mut inputs: Vec<SpectralField> = w.comps().to_vec();
    for i in 0..d {
        for j in 0..d {
            inputs.push(w.comp(i).partial(j));
        }
    }
    let refs: Vec<&SpectralField> = inputs.iter().collect();
    let out = dom.evaluate(&refs, dom.quadratic_size(), d, move |x, y| {
        for i in 0..d {
            y[i] = -(0..d).map(|j| x[j] * x[d + i * d + j]).sum::<f64>();
        }
    });
    Ok(helmholtz_p(&VectorField::from_components(out)?))
}

pub fn step_incompressible(state: &IncompressibleState, dt: f64, mu: f64) -> Result<IncompressibleState> {
    IncompressibleSolver::new(state.domain(), mu, dt)?.step(state)
}
