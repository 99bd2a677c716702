use num_complex::Complex64;
use rayon::prelude::*;
use std::collections::HashMap;
use std::sync::Arc;

use super::etd::{acoustic_generator, matrix_phi, scalar_phi, MatrixPhi};
use super::pressure::{j_value, PressureLaw};
use crate::error::{Error, Result};
use crate::lp_spectral::{Domain, SpectralField, Truncation, VectorField};
use crate::operators::{lame_apply, LameParams};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Density fluctuation `a` and velocity `u` at time `t`.
#[derive(Debug, Clone)]
pub struct CompressibleState {
    pub a: SpectralField,
    pub u: VectorField,
    pub t: f64,
}

impl CompressibleState {
    pub fn new(a: SpectralField, u: VectorField) -> Result<Self> {
        a.check_same_grid(u.comp(0))?;
        if u.len() != a.domain().d() {
            return Err(Error::InvalidArgument(format!(
                "velocity has {} components in dimension {}",
                u.len(),
                a.domain().d()
            )));
        }
        Ok(CompressibleState { a, u, t: 0.0 })
    }

    pub fn domain(&self) -> &Arc<Domain> {
        self.a.domain()
    }

    /// `min (1 + eps a)` on the native grid.
    pub fn min_density(&self, eps: f64) -> f64 {
        self.a
            .to_physical()
            .iter()
            .fold(f64::INFINITY, |m, &x| m.min(1.0 + eps * x))
    }
}

#[derive(Debug, Clone)]
pub struct CompressibleParams {
    pub eps: f64,
    pub lame: LameParams,
    pub law: PressureLaw,
    /// `false` drops `f` and `g`, leaving the exact linear flow.
    pub nonlinear: bool,
    /// Steps with `dt |u|_inf / dx` above this are rejected.
    pub cfl: f64,
    /// Steps ending with `min (1 + eps a)` below this are rejected.
    pub positivity_floor: f64,
}

impl CompressibleParams {
    pub fn new(eps: f64, lame: LameParams, law: PressureLaw) -> Self {
        CompressibleParams {
            eps,
            lame,
            law,
            nonlinear: true,
            cfl: 0.4,
            positivity_floor: 0.1,
        }
    }

    pub fn linear(mut self) -> Self {
        self.nonlinear = false;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0) {
            return Err(Error::InvalidArgument(format!("Mach number {} must be positive", self.eps)));
        }
        if !(self.lame.mu >= 0.0) || !(self.lame.nu() >= 0.0) {
            return Err(Error::InvalidArgument("negative viscosity".into()));
        }
        if !(self.cfl > 0.0) {
            return Err(Error::InvalidArgument(format!("CFL number {}", self.cfl)));
        }
        Ok(())
    }

    /// `min(cfl dx / |u|_inf, 0.1 eps dx)`.
    pub fn default_dt(&self, state: &CompressibleState) -> f64 {
        let dx = state.domain().grid().dx();
        let umax = state.u.max_magnitude();
        let acoustic = 0.1 * self.eps * dx;
        if umax > 0.0 {
            acoustic.min(self.cfl * dx / umax)
        } else {
            acoustic
        }
    }
}

#[derive(Clone, Copy)]
struct ModeCoeffs {
    acoustic: MatrixPhi,
    heat: (f64, f64, f64),
}

#[derive(Clone, Copy)]
enum Stage {
    Exp,
    Phi1,
    Phi2,
}

/// Second order exponential time differencing (ETDRK2) with the linear
/// acoustic and viscous part integrated exactly per mode.
pub struct CompressibleSolver {
    params: CompressibleParams,
    domain: Arc<Domain>,
    dt: f64,
    slot: Vec<usize>,
    coeffs: Vec<ModeCoeffs>,
}

impl CompressibleSolver {
    pub fn new(domain: &Arc<Domain>, params: CompressibleParams, dt: f64) -> Result<Self> {
        params.validate()?;
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::InvalidArgument(format!("time step {dt}")));
        }
        let unit = domain.grid().wavenumber_unit();
        let nu = params.lame.nu();
        let mu = params.lame.mu;
        let mut by_shell: HashMap<i64, usize> = HashMap::new();
        let mut coeffs = Vec::new();
        let mut slot = Vec::with_capacity(domain.len());
        for idx in 0..domain.len() {
            let k = domain.mode(idx);
            let k2 = k.iter().map(|x| x * x).sum::<i64>();
            let s = *by_shell.entry(k2).or_insert_with(|| {
                let r = unit * (k2 as f64).sqrt();
                let gen = acoustic_generator(r, params.eps, nu) * dt;
                coeffs.push(ModeCoeffs {
                    acoustic: matrix_phi(&gen),
                    heat: scalar_phi(-mu * r * r * dt),
                });
                coeffs.len() - 1
            });
            slot.push(s);
        }
        Ok(CompressibleSolver {
            params,
            domain: domain.clone(),
            dt,
            slot,
            coeffs,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn params(&self) -> &CompressibleParams {
        &self.params
    }

    /// `(f, g)` with `f = -div(a u)` and
    /// `g = -(u . grad u + J(eps a) L u + K(eps a) grad a / eps)`.
    pub fn nonlinearity(&self, state: &CompressibleState) -> Result<(SpectralField, VectorField)> {
        nonlinearity(state, &self.params)
    }

    fn apply(&self, stage: Stage, a: &SpectralField, u: &VectorField) -> (SpectralField, VectorField) {
        let dom = &self.domain;
        let d = dom.d();
        let ac = a.coeffs();
        let uc = u.coeff_slices();
        let rows: Vec<[Complex64; 4]> = (0..dom.len())
            .into_par_iter()
            .map(|idx| {
                let c = &self.coeffs[self.slot[idx]];
                let (m, h) = match stage {
                    Stage::Exp => (c.acoustic.e, c.heat.0),
                    Stage::Phi1 => (c.acoustic.phi1, c.heat.1),
                    Stage::Phi2 => (c.acoustic.phi2, c.heat.2),
                };
                let mut out = [Complex64::default(); 4];
                if idx == 0 {
                    out[0] = ac[0] * m[(0, 0)];
                    for i in 0..d {
                        out[1 + i] = uc[i][0] * h;
                    }
                    return out;
                }
                let xi = dom.xi(idx);
                let r = dom.xi_norm(idx);
                let mut dot = Complex64::default();
                for i in 0..d {
                    dot += uc[i][idx] * (xi[i] / r);
                }
                let v = I * dot;
                let a0 = ac[idx];
                let na = a0 * m[(0, 0)] + v * m[(0, 1)];
                let nv = a0 * m[(1, 0)] + v * m[(1, 1)];
                out[0] = na;
                let back = -I * nv;
                for i in 0..d {
                    let e = xi[i] / r;
                    out[1 + i] = (uc[i][idx] - dot * e) * h + back * e;
                }
                out
            })
            .collect();
        let na = SpectralField::from_coeffs(dom, rows.iter().map(|r| r[0]).collect()).expect("length");
        let nu = (0..d)
            .map(|i| SpectralField::from_coeffs(dom, rows.iter().map(|r| r[1 + i]).collect()).expect("length"))
            .collect();
        (na, VectorField::from_components(nu).expect("same grid"))
    }

    fn check_cfl(&self, state: &CompressibleState) -> Result<()> {
        let dx = self.domain.grid().dx();
        let umax = state.u.max_magnitude();
        let courant = self.dt * umax / dx;
        if courant > self.params.cfl {
            return Err(Error::ReduceDt(format!(
                "Courant number {courant:.3} exceeds {} at t = {}",
                self.params.cfl, state.t
            )));
        }
        Ok(())
    }

    /// One ETDRK2 step. Rejected with [`Error::ReduceDt`] if the Courant
    /// number is too large or the density approaches vacuum.
    pub fn step(&self, state: &CompressibleState) -> Result<CompressibleState> {
        if !self.domain.same_grid(state.domain()) {
            return Err(Error::GridMismatch);
        }
        let h = self.dt;
        let (a1, u1) = self.apply(Stage::Exp, &state.a, &state.u);
        let (mut a, mut u) = (a1, u1);
        if self.params.nonlinear {
            self.check_cfl(state)?;
            let (f0, g0) = self.nonlinearity(state)?;
            let (pf, pg) = self.apply(Stage::Phi1, &f0, &g0);
            a.axpy(h, &pf);
            u.axpy(h, &pg);
            let mid = CompressibleState { a: a.clone(), u: u.clone(), t: state.t + h };
            let (f1, g1) = self.nonlinearity(&mid)?;
            let (qf, qg) = self.apply(Stage::Phi2, &(&f1 - &f0), &(&g1 - &g0));
            a.axpy(h, &qf);
            u.axpy(h, &qg);
        }
        let next = CompressibleState { a, u, t: state.t + h };
        if self.params.nonlinear {
            let floor = next.min_density(self.params.eps);
            if floor < self.params.positivity_floor {
                return Err(Error::ReduceDt(format!(
                    "min(1 + eps a) = {floor:.4} below {} at t = {}",
                    self.params.positivity_floor, next.t
                )));
            }
        }
        Ok(next)
    }
}

/// Single step with a freshly built coefficient table.
pub fn step_compressible(state: &CompressibleState, dt: f64, params: &CompressibleParams) -> Result<CompressibleState> {
    CompressibleSolver::new(state.domain(), params.clone(), dt)?.step(state)
}

/// `(f, g)` of the rescaled system, evaluated on the 2x oversampled grid.
pub fn nonlinearity(state: &CompressibleState, params: &CompressibleParams) -> Result<(SpectralField, VectorField)> {
    let dom = state.domain().clone();
    let d = dom.d();
    if !params.nonlinear {
        return Ok((SpectralField::zeros(&dom), VectorField::zeros(&dom)));
    }
    let eps = params.eps;
    let lu = lame_apply(&state.u, &params.lame);
    let mut inputs: Vec<SpectralField> = vec![state.a.clone()];
    inputs.extend(state.u.comps().iter().cloned());
    for i in 0..d {
        for j in 0..d {
            inputs.push(state.u.comp(i).partial(j));
        }
    }
    inputs.extend(lu.comps().iter().cloned());
    for i in 0..d {
        inputs.push(state.a.partial(i));
    }
    let m = dom.composition_size();
    let slices: Vec<&[Complex64]> = inputs.iter().map(|f| f.coeffs()).collect();
    let phys = dom.physical(&slices, m);
    let min = phys[0].iter().fold(f64::INFINITY, |acc, &x| acc.min(1.0 + eps * x));
    if !(min > 0.0) {
        return Err(Error::VacuumAdjacent { min_density: min });
    }
    let pts = phys[0].len();
    let law = &params.law;
    let du = 1 + d;
    let dl = du + d * d;
    let da = dl + d;
    let per_point: Vec<[f64; 6]> = (0..pts)
        .into_par_iter()
        .map(|p| {
            let a = phys[0][p];
            let ea = eps * a;
            let jv = j_value(ea);
            let kv = law.k_value(ea) / eps;
            let mut out = [0.0; 6];
            for i in 0..d {
                let ui = phys[1 + i][p];
                out[i] = a * ui;
                let mut conv = 0.0;
                for j in 0..d {
                    conv += phys[1 + j][p] * phys[du + i * d + j][p];
                }
                out[3 + i] = -(conv + jv * phys[dl + i][p] + kv * phys[da + i][p]);
            }
            out
        })
        .collect();
    let mut outs = Vec::with_capacity(2 * d);
    for c in (0..d).chain(3..3 + d) {
        outs.push(per_point.iter().map(|o| o[c]).collect::<Vec<f64>>());
    }
    let spec = dom.spectral(&outs, m, Truncation::Dealias);
    let mut fields = spec
        .into_iter()
        .map(|c| SpectralField::from_coeffs(&dom, c).expect("length"))
        .collect::<Vec<_>>();
    let g = VectorField::from_components(fields.split_off(d))?;
    let flux = VectorField::from_components(fields)?;
    let f = -&flux.divergence();
    Ok((f, g))
}
