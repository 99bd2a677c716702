use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;
use std::sync::Arc;

use machlimit_core::lp_spectral::{lp_norm, Domain, Grid, SpectralField, VectorField};
use machlimit_core::operators::{
    acoustic_propagate, acoustic_velocity, helmholtz_p, helmholtz_q, inner_l2, LameParams,
};
use machlimit_core::paraproduct::bony_reconstruct;
use machlimit_core::solvers::{CompressibleParams, CompressibleSolver, CompressibleState, PressureLaw};

use crate::error::HarnessResult;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: usize,
    pub total: usize,
    /// Largest error seen, to compare with `tol`.
    pub worst: f64,
    pub tol: f64,
}

impl SuiteResult {
    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

fn suite(name: &'static str, tol: f64, errors: impl IntoIterator<Item = f64>) -> SuiteResult {
    let errors: Vec<f64> = errors.into_iter().collect();
    SuiteResult {
        name,
        passed: errors.iter().filter(|&&e| e <= tol).count(),
        total: errors.len(),
        worst: errors.iter().copied().fold(0.0, f64::max),
        tol,
    }
}

fn random_vector(dom: &Arc<Domain>, rng: &mut ChaCha8Rng, k_max: f64) -> VectorField {
    let comps = (0..dom.d())
        .map(|_| SpectralField::random_band(dom, rng, 1.0, k_max, 0.0))
        .collect();
    VectorField::from_components(comps).expect("same grid")
}

/// Idempotence, orthogonality and completeness of the Helmholtz pair and
/// `div P u = 0`, relative to the size of `u`.
pub fn projection_suite(trials: usize, seed: u64) -> HarnessResult<SuiteResult> {
    let dom = Domain::new(Grid::new(2, 32, TAU)?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut errors = Vec::new();
    for _ in 0..trials {
        let u = random_vector(&dom, &mut rng, 15.0);
        let scale = u.max_coeff();
        let p = helmholtz_p(&u);
        let q = helmholtz_q(&u);
        let e = [
            helmholtz_p(&p).max_coeff_diff(&p),
            helmholtz_q(&q).max_coeff_diff(&q),
            (&p + &q).max_coeff_diff(&u),
            inner_l2(&p, &q).abs() / (u.l2_norm().powi(2)),
            p.divergence().max_coeff() / dom.grid().dealias_cutoff() as f64,
        ];
        errors.push(e.iter().copied().fold(0.0, f64::max) / scale.max(1e-300));
    }
    Ok(suite("projection", 1e-12, errors))
}

/// Paraproducts, remainder and mean corrections add up to the product.
pub fn bony_suite(trials: usize, seed: u64) -> HarnessResult<SuiteResult> {
    let dom = Domain::new(Grid::new(2, 32, TAU)?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut errors = Vec::new();
    for _ in 0..trials {
        let f = SpectralField::random_band(&dom, &mut rng, 0.0, 10.0, 0.0);
        let g = SpectralField::random_band(&dom, &mut rng, 0.0, 10.0, 0.0);
        let fg = f.product(&g)?;
        errors.push(bony_reconstruct(&f, &g)?.max_coeff_diff(&fg) / fg.max_coeff().max(1e-300));
    }
    Ok(suite("bony", 1e-10, errors))
}

/// Without viscosity or nonlinearity the solver rotates each mode of
/// `(a, |grad|^{-1} div Q u)` by `|xi| t / eps`.
pub fn acoustic_suite(trials: usize, seed: u64) -> HarnessResult<SuiteResult> {
    let dom = Domain::new(Grid::new(2, 16, TAU)?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let eps = 0.1;
    let params = CompressibleParams::new(eps, LameParams::inviscid(), PressureLaw::gamma_law(1.4)?).linear();
    let steps = 10;
    let dt = 0.05;
    let solver = CompressibleSolver::new(&dom, params, dt)?;
    let mut errors = Vec::new();
    for _ in 0..trials {
        let a = SpectralField::random_band(&dom, &mut rng, 1.0, 5.0, 0.0);
        let u = random_vector(&dom, &mut rng, 5.0);
        let mut s = CompressibleState::new(a.clone(), u.clone())?;
        for _ in 0..steps {
            s = solver.step(&s)?;
        }
        let (ea, ev) = acoustic_propagate(&a, &acoustic_velocity(&u), s.t / eps)?;
        let err = s.a.max_coeff_diff(&ea).max(acoustic_velocity(&s.u).max_coeff_diff(&ev));
        errors.push(err);
    }
    Ok(suite("acoustic", 1e-10, errors))
}

/// The mean of `a` stays put in nonlinear runs.
pub fn mass_suite(trials: usize, seed: u64) -> HarnessResult<SuiteResult> {
    let dom = Domain::new(Grid::new(2, 16, TAU)?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params = CompressibleParams::new(0.5, LameParams::new(0.05, 0.0)?, PressureLaw::gamma_law(1.4)?);
    let solver = CompressibleSolver::new(&dom, params, 0.01)?;
    let mut errors = Vec::new();
    for _ in 0..trials {
        let a = SpectralField::random_band(&dom, &mut rng, 1.0, 4.0, 0.0);
        let a = a.scale(0.1 / lp_norm(&[&a], f64::INFINITY));
        let u = random_vector(&dom, &mut rng, 4.0);
        let u = u.scale(0.1 / u.max_magnitude());
        let mut s = CompressibleState::new(a.clone(), u)?;
        let mut drift: f64 = 0.0;
        for _ in 0..20 {
            s = solver.step(&s)?;
            drift = drift.max((s.a.mean() - a.mean()).abs());
        }
        errors.push(drift / s.t);
    }
    Ok(suite("mass", 1e-12, errors))
}

pub fn selftest(seed: u64) -> HarnessResult<Vec<SuiteResult>> {
    Ok(vec![
        projection_suite(20, seed)?,
        bony_suite(20, seed)?,
        acoustic_suite(5, seed)?,
        mass_suite(5, seed)?,
    ])
}
