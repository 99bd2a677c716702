use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::operators::LameParams;

#[derive(Clone)]
pub enum LawKind {
    /// `P(rho) = kappa rho^gamma`.
    Gamma { gamma: f64, kappa: f64 },
    /// User supplied `rho -> (P(rho), P'(rho))`.
    Custom(Arc<dyn Fn(f64) -> (f64, f64) + Send + Sync>),
}

/// Barotropic pressure `P(rho) = P_base(rho_scale rho) / p_scale`.
#[derive(Clone)]
pub struct PressureLaw {
    pub kind: LawKind,
    rho_scale: f64,
    p_scale: f64,
}

impl fmt::Debug for PressureLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = f.debug_struct("PressureLaw");
        if let LawKind::Gamma { gamma, kappa } = self.kind {
            s.field("gamma", &gamma).field("kappa", &kappa);
        } else {
            s.field("kind", &"custom");
        }
        s.field("rho_scale", &self.rho_scale)
            .field("p_scale", &self.p_scale)
            .field("normalized", &self.is_normalized())
            .finish()
    }
}

impl PressureLaw {
    /// `P(rho) = rho^gamma / gamma`, which already has `P'(1) = 1`.
    pub fn gamma_law(gamma: f64) -> Result<Self> {
        Self::gamma_with_coefficient(gamma, 1.0 / gamma)
    }

    pub fn gamma_with_coefficient(gamma: f64, kappa: f64) -> Result<Self> {
        if !(gamma >= 1.0) || !(kappa > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "pressure law needs gamma >= 1 and kappa > 0, got {gamma}, {kappa}"
            )));
        }
        Ok(PressureLaw {
            kind: LawKind::Gamma { gamma, kappa },
            rho_scale: 1.0,
            p_scale: 1.0,
        })
    }

    pub fn custom(f: impl Fn(f64) -> (f64, f64) + Send + Sync + 'static) -> Self {
        PressureLaw {
            kind: LawKind::Custom(Arc::new(f)),
            rho_scale: 1.0,
            p_scale: 1.0,
        }
    }

    fn base(&self, rho: f64) -> (f64, f64) {
        match &self.kind {
            LawKind::Gamma { gamma, kappa } => (kappa * rho.powf(*gamma), kappa * gamma * rho.powf(gamma - 1.0)),
            LawKind::Custom(f) => f(rho),
        }
    }

    pub fn pressure(&self, rho: f64) -> f64 {
        self.base(self.rho_scale * rho).0 / self.p_scale
    }

    pub fn derivative(&self, rho: f64) -> f64 {
        self.base(self.rho_scale * rho).1 * self.rho_scale / self.p_scale
    }

    pub fn is_normalized(&self) -> bool {
        (self.derivative(1.0) - 1.0).abs() <= 1e-14
    }

    /// `K(a) = P'(1 + a) / (1 + a) - 1`, valid for `1 + a > 0`.
    pub fn k_value(&self, a: f64) -> f64 {
        self.derivative(1.0 + a) / (1.0 + a) - 1.0
    }

    /// Rescaled law `P(rho_inf rho) / (rho_inf c_inf)` with `c_inf = P'(rho_inf)`.
    fn rescaled(&self, rho_inf: f64, c_inf: f64) -> Self {
        PressureLaw {
            kind: self.kind.clone(),
            rho_scale: self.rho_scale * rho_inf,
            p_scale: self.p_scale * rho_inf * c_inf,
        }
    }
}

/// `J(a) = a / (1 + a)`.
pub fn j_value(a: f64) -> f64 {
    a / (1.0 + a)
}

/// Pointwise `J` with the vacuum guard.
pub fn j_of(values: &[f64]) -> Result<Vec<f64>> {
    guard(values)?;
    Ok(values.iter().map(|&a| j_value(a)).collect())
}

/// Pointwise `K` with the vacuum guard.
pub fn k_of(values: &[f64], law: &PressureLaw) -> Result<Vec<f64>> {
    guard(values)?;
    Ok(values.iter().map(|&a| law.k_value(a)).collect())
}

fn guard(values: &[f64]) -> Result<()> {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    if !(1.0 + min > 0.0) {
        return Err(Error::VacuumAdjacent { min_density: 1.0 + min });
    }
    Ok(())
}

/// Multipliers mapping physical variables to normalized ones.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleFactors {
    /// `t_physical = time * t_normalized`.
    pub time: f64,
    /// `x_physical = length * x_normalized`.
    pub length: f64,
    /// `u_normalized = velocity * u_physical`.
    pub velocity: f64,
    /// `rho_normalized = density * rho_physical`.
    pub density: f64,
}

impl ScaleFactors {
    pub fn identity() -> Self {
        ScaleFactors {
            time: 1.0,
            length: 1.0,
            velocity: 1.0,
            density: 1.0,
        }
    }
}

/// Brings `(rho_inf, P, mu, lambda)` to `rho_inf = P'(1) = nu = 1`.
pub fn normalize_parameters(
    rho_inf: f64,
    law: &PressureLaw,
    lame: &LameParams,
) -> Result<(PressureLaw, LameParams, ScaleFactors)> {
    if !(rho_inf > 0.0) {
        return Err(Error::InvalidArgument(format!("reference density {rho_inf}")));
    }
    let nu = lame.nu();
    if !(nu > 0.0) || !(lame.mu > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "viscosity is not elliptic: mu = {}, nu = {nu}",
            lame.mu
        )));
    }
    let c_inf = law.derivative(rho_inf);
    if !(c_inf > 0.0) {
        return Err(Error::InvalidArgument(format!("P'(rho_inf) = {c_inf} must be positive")));
    }
    let new_law = law.rescaled(rho_inf, c_inf);
    let new_lame = LameParams {
        mu: lame.mu / nu,
        lambda: lame.lambda / nu,
    };
    let scales = ScaleFactors {
        time: nu / (rho_inf * c_inf),
        length: nu / (rho_inf * c_inf.sqrt()),
        velocity: 1.0 / c_inf.sqrt(),
        density: 1.0 / rho_inf,
    };
    Ok((new_law, new_lame, scales))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_functions_at_simple_points() {
        let law = PressureLaw::gamma_law(1.4).unwrap();
        assert_eq!(j_value(0.0), 0.0);
        assert_eq!(j_value(1.0), 0.5);
        assert!(law.k_value(0.0).abs() < 1e-15);
        assert!(matches!(j_of(&[0.1, -1.0]), Err(Error::VacuumAdjacent { .. })));
    }

    #[test]
    fn custom_law_normalizes() {
        let law = PressureLaw::custom(|r| (r * r * r + r, 3.0 * r * r + 1.0));
        let (n, _, s) = normalize_parameters(2.0, &law, &LameParams::new(1.0, 0.0).unwrap()).unwrap();
        assert!((n.derivative(1.0) - 1.0).abs() < 1e-14);
        assert!((s.density - 0.5).abs() < 1e-15);
    }
}
