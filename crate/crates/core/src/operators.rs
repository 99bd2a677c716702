//! Fourier multipliers: Helmholtz projections, the Lame operator, inverse
//! Laplacian, effective velocity and the exact heat and acoustic propagators.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lp_spectral::{Domain, SpectralField, VectorField};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// `L = mu Lap + (mu + lambda) grad div`, with `nu = 2 mu + lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LameParams {
    pub mu: f64,
    pub lambda: f64,
}

impl LameParams {
    /// Requires `mu > 0` and `nu > 0`.
    pub fn new(mu: f64, lambda: f64) -> Result<Self> {
        let lp = LameParams { mu, lambda };
        if !(mu > 0.0) || !(lp.nu() > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "Lame coefficients need mu > 0 and 2 mu + lambda > 0, got mu = {mu}, lambda = {lambda}"
            )));
        }
        Ok(lp)
    }

    /// `mu = lambda = 0`, for inviscid reference computations.
    pub fn inviscid() -> Self {
        LameParams { mu: 0.0, lambda: 0.0 }
    }

    pub fn nu(&self) -> f64 {
        2.0 * self.mu + self.lambda
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ZeroModeRule {
    Annihilate,
    Identity,
}

#[derive(Clone)]
pub enum Symbol {
    Identity,
    /// `I - xi xi^T / |xi|^2`.
    Leray,
    /// `xi xi^T / |xi|^2`.
    Gradient,
    /// Scalar multiplier applied to every component.
    Scalar(Arc<dyn Fn(&[f64; 3]) -> Complex64 + Send + Sync>),
}

/// A Fourier multiplier `eta(D)` with an explicit rule for the mean mode.
#[derive(Clone)]
pub struct SymbolOp {
    pub name: String,
    pub symbol: Symbol,
    pub zero_mode_rule: ZeroModeRule,
}

impl fmt::Debug for SymbolOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SymbolOp")
            .field("name", &self.name)
            .field("zero_mode_rule", &self.zero_mode_rule)
            .finish()
    }
}

impl SymbolOp {
    pub fn identity() -> Self {
        SymbolOp {
            name: "identity".into(),
            symbol: Symbol::Identity,
            zero_mode_rule: ZeroModeRule::Identity,
        }
    }

    pub fn leray() -> Self {
        SymbolOp {
            name: "P".into(),
            symbol: Symbol::Leray,
            zero_mode_rule: ZeroModeRule::Identity,
        }
    }

    pub fn gradient_projection() -> Self {
        SymbolOp {
            name: "Q".into(),
            symbol: Symbol::Gradient,
            zero_mode_rule: ZeroModeRule::Annihilate,
        }
    }

    pub fn scalar(
        name: &str,
        zero_mode_rule: ZeroModeRule,
        m: impl Fn(&[f64; 3]) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        SymbolOp {
            name: name.into(),
            symbol: Symbol::Scalar(Arc::new(m)),
            zero_mode_rule,
        }
    }

    pub fn is_matrix(&self) -> bool {
        matches!(self.symbol, Symbol::Leray | Symbol::Gradient)
    }

    /// Applies to a scalar field; matrix symbols are rejected.
    pub fn apply_scalar(&self, f: &SpectralField) -> Result<SpectralField> {
        let dom = f.domain().clone();
        let rule = self.zero_mode_rule;
        match &self.symbol {
            Symbol::Identity => Ok(zero_rule(f.clone(), rule)),
            Symbol::Scalar(m) => Ok(f.map_modes(|idx| {
                if idx == 0 {
                    match rule {
                        ZeroModeRule::Identity => Complex64::new(1.0, 0.0),
                        ZeroModeRule::Annihilate => ZERO,
                    }
                } else {
                    m(&dom.xi(idx))
                }
            })),
            _ => Err(Error::InvalidArgument(format!(
                "{} is matrix-valued and needs a vector argument",
                self.name
            ))),
        }
    }

    pub fn apply_vector(&self, u: &VectorField) -> Result<VectorField> {
        match &self.symbol {
            Symbol::Leray => check_dim(u).map(|_| helmholtz_p(u)),
            Symbol::Gradient => check_dim(u).map(|_| helmholtz_q(u)),
            _ => {
                let comps = u
                    .comps()
                    .iter()
                    .map(|c| self.apply_scalar(c))
                    .collect::<Result<Vec<_>>>()?;
                VectorField::from_components(comps)
            }
        }
    }
}

fn zero_rule(mut f: SpectralField, rule: ZeroModeRule) -> SpectralField {
    if rule == ZeroModeRule::Annihilate {
        f.coeffs_mut()[0] = ZERO;
    }
    f
}

fn check_dim(u: &VectorField) -> Result<()> {
    if u.len() != u.domain().d() {
        return Err(Error::InvalidArgument(format!(
            "{} components on a {}-dimensional grid",
            u.len(),
            u.domain().d()
        )));
    }
    Ok(())
}

/// Per-mode map on the `d` components of a velocity field.
pub fn map_vector_modes(
    u: &VectorField,
    f: impl Fn(usize, &Domain, &mut [Complex64; 3]) + Sync,
) -> VectorField {
    let dom = u.domain().clone();
    let d = dom.d();
    let mut outs: Vec<Vec<Complex64>> = vec![vec![ZERO; dom.len()]; u.len()];
    for idx in 0..dom.len() {
        let mut v = [ZERO; 3];
        for a in 0..u.len().min(3) {
            v[a] = u.comp(a).coeffs()[idx];
        }
        f(idx, &dom, &mut v);
        for a in 0..u.len().min(3) {
            outs[a][idx] = v[a];
        }
    }
    debug_assert!(u.len() <= 3 && d <= 3);
    VectorField::from_components(
        outs.into_iter()
            .map(|c| SpectralField::from_coeffs(&dom, c).expect("length matches"))
            .collect(),
    )
    .expect("same grid")
}

fn unit_dot(dom: &Domain, idx: usize, v: &[Complex64; 3]) -> ([f64; 3], Complex64) {
    let xi = dom.xi(idx);
    let r = dom.xi_norm(idx);
    let e = [xi[0] / r, xi[1] / r, xi[2] / r];
    let dot = v[0] * e[0] + v[1] * e[1] + v[2] * e[2];
    (e, dot)
}

/// `P = I + grad div (-Lap)^{-1}`; the mean passes through.
pub fn helmholtz_p(u: &VectorField) -> VectorField {
    map_vector_modes(u, |idx, dom, v| {
        if idx == 0 {
            return;
        }
        let (e, dot) = unit_dot(dom, idx, v);
        for a in 0..dom.d() {
            v[a] -= dot * e[a];
        }
    })
}

/// `Q = -grad div (-Lap)^{-1}`; the mean is removed.
pub fn helmholtz_q(u: &VectorField) -> VectorField {
    map_vector_modes(u, |idx, dom, v| {
        if idx == 0 {
            *v = [ZERO; 3];
            return;
        }
        let (e, dot) = unit_dot(dom, idx, v);
        for a in 0..dom.d() {
            v[a] = dot * e[a];
        }
    })
}

/// Per mode `-mu |xi|^2 u - (mu + lambda) xi (xi . u)`.
pub fn lame_apply(u: &VectorField, lp: &LameParams) -> VectorField {
    let (mu, ml) = (lp.mu, lp.mu + lp.lambda);
    map_vector_modes(u, move |idx, dom, v| {
        let xi = dom.xi(idx);
        let r2 = dom.xi_norm(idx).powi(2);
        let dot = v[0] * xi[0] + v[1] * xi[1] + v[2] * xi[2];
        for a in 0..dom.d() {
            v[a] = v[a] * (-mu * r2) - dot * (ml * xi[a]);
        }
    })
}

/// `(-Lap)^{-1}`, annihilating the mean.
pub fn inverse_neg_laplacian(f: &SpectralField) -> SpectralField {
    let dom = f.domain().clone();
    f.map_modes(|idx| {
        if idx == 0 {
            ZERO
        } else {
            Complex64::new(1.0 / dom.xi_norm(idx).powi(2), 0.0)
        }
    })
}

/// `|grad|`, the multiplier `|xi|`.
pub fn abs_grad(f: &SpectralField) -> SpectralField {
    let dom = f.domain().clone();
    f.map_modes(|idx| Complex64::new(dom.xi_norm(idx), 0.0))
}

/// `|grad|^{-1}`, annihilating the mean.
pub fn inv_abs_grad(f: &SpectralField) -> SpectralField {
    let dom = f.domain().clone();
    f.map_modes(|idx| {
        if idx == 0 {
            ZERO
        } else {
            Complex64::new(1.0 / dom.xi_norm(idx), 0.0)
        }
    })
}

/// `v = |grad|^{-1} div Q u`, the scalar acoustic velocity.
pub fn acoustic_velocity(u: &VectorField) -> SpectralField {
    let dom = u.domain().clone();
    let mut out = SpectralField::zeros(&dom);
    let c = out.coeffs_mut();
    for (idx, slot) in c.iter_mut().enumerate().skip(1) {
        let mut v = [ZERO; 3];
        for (a, comp) in u.comps().iter().enumerate().take(dom.d()) {
            v[a] = comp.coeffs()[idx];
        }
        *slot = I * unit_dot(&dom, idx, &v).1;
    }
    out
}

/// Inverse of [`acoustic_velocity`] on gradient fields: `Q u` from `v`.
pub fn gradient_from_acoustic(v: &SpectralField) -> VectorField {
    let dom = v.domain().clone();
    let comps = (0..dom.d())
        .map(|a| {
            v.map_modes(|idx| {
                if idx == 0 {
                    ZERO
                } else {
                    -I * (dom.xi(idx)[a] / dom.xi_norm(idx))
                }
            })
        })
        .collect();
    VectorField::from_components(comps).expect("same grid")
}

/// `w = Q u + eps^{-1} grad (-Lap)^{-1} a`.
pub fn effective_velocity(a: &SpectralField, u: &VectorField, eps: f64) -> Result<VectorField> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("Mach number {eps} must be positive")));
    }
    a.check_same_grid(u.comp(0))?;
    let pot = inverse_neg_laplacian(a).scale(1.0 / eps);
    Ok(&helmholtz_q(u) + &pot.gradient())
}

/// Per mode rotation of `(a, v)` by the angle `|xi| t`:
/// `a <- cos a - sin v`, `v <- sin a + cos v`.
pub fn acoustic_propagate(a: &SpectralField, v: &SpectralField, t: f64) -> Result<(SpectralField, SpectralField)> {
    a.check_same_grid(v)?;
    let dom = a.domain().clone();
    let mut na = a.clone();
    let mut nv = v.clone();
    {
        let ca = na.coeffs_mut();
        let cv = nv.coeffs_mut();
        for idx in 0..dom.len() {
            let (s, c) = (dom.xi_norm(idx) * t).sin_cos();
            let (x, y) = (ca[idx], cv[idx]);
            ca[idx] = x * c - y * s;
            cv[idx] = x * s + y * c;
        }
    }
    Ok((na, nv))
}

/// Per mode factor `exp(-kappa |xi|^2 t)`.
pub fn heat_propagate(f: &SpectralField, t: f64, kappa: f64) -> Result<SpectralField> {
    if !(t >= 0.0) {
        return Err(Error::InvalidArgument(format!("negative time {t}")));
    }
    if !(kappa >= 0.0) {
        return Err(Error::InvalidArgument(format!("negative diffusivity {kappa}")));
    }
    let dom = f.domain().clone();
    Ok(f.map_modes(|idx| Complex64::new((-kappa * dom.xi_norm(idx).powi(2) * t).exp(), 0.0)))
}

/// Real L^2 inner product `sum_i int u_i v_i`.
pub fn inner_l2(u: &VectorField, v: &VectorField) -> f64 {
    let vol = u.domain().grid().volume();
    let mut s = 0.0;
    for (a, b) in u.comps().iter().zip(v.comps()) {
        for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
            s += (x * y.conj()).re;
        }
    }
    vol * s
}

/// Dealiased `v . grad a`.
pub fn transport(v: &VectorField, a: &SpectralField) -> Result<SpectralField> {
    let dom = a.domain().clone();
    v.comp(0).check_same_grid(a)?;
    let d = v.len();
    let grads: Vec<SpectralField> = (0..d).map(|i| a.partial(i)).collect();
    let mut inputs: Vec<&SpectralField> = v.comps().iter().collect();
    inputs.extend(grads.iter());
    let m = dom.quadratic_size();
    Ok(dom
        .evaluate(&inputs, m, 1, move |x, y| {
            y[0] = (0..d).map(|i| x[i] * x[d + i]).sum();
        })
        .remove(0))
}
