use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponents `(d, q, r)`, the low/mid cutoff `alpha`, the high-frequency
/// constant `beta0` and the Mach number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentConfig {
    pub d: usize,
    pub q: f64,
    pub r: f64,
    pub alpha: f64,
    #[serde(default = "default_beta0")]
    pub beta0: f64,
    pub eps: f64,
}

fn default_beta0() -> f64 {
    1.0
}

impl ExponentConfig {
    pub fn new(d: usize, q: f64, r: f64, alpha: f64, eps: f64) -> Self {
        ExponentConfig {
            d,
            q,
            r,
            alpha,
            beta0: 1.0,
            eps,
        }
    }

    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }

    /// `beta0 / eps`, the mid/high cutoff.
    pub fn high_cut(&self) -> f64 {
        self.beta0 / self.eps
    }

    pub(crate) fn check_positive(&self) -> Result<()> {
        if !(self.eps > 0.0) || !(self.alpha > 0.0) || !(self.beta0 > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "need eps, alpha, beta0 > 0, got {}, {}, {}",
                self.eps, self.alpha, self.beta0
            )));
        }
        if self.alpha > self.high_cut() {
            return Err(Error::InvalidArgument(format!(
                "eps = {} exceeds beta0 / alpha = {}",
                self.eps,
                self.beta0 / self.alpha
            )));
        }
        if !(self.r > 1.0) || !(self.q >= 1.0) {
            return Err(Error::InvalidArgument(format!("exponents q = {}, r = {}", self.q, self.r)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub admissible: bool,
    pub conditions: Vec<Condition>,
}

impl Verdict {
    pub fn violations(&self) -> impl Iterator<Item = &Condition> {
        self.conditions.iter().filter(|c| !c.holds)
    }
}

const SLACK: f64 = 1e-12;

/// Checks `2 < q < min{4, 2d/(d-2)}`,
/// `0 < 1/r <= min{1/2 - (d/2)(1/2 - 1/q), ((d-1)/2)(1/2 - 1/q)}`,
/// `1/r < 2d/q - 1` and `0 < eps <= beta0/alpha`.
pub fn validate_exponents(cfg: &ExponentConfig) -> Verdict {
    let d = cfg.d as f64;
    let q = cfg.q;
    let inv_r = 1.0 / cfg.r;
    let gap = 0.5 - 1.0 / q;
    let q_cap = if cfg.d > 2 { 4f64.min(2.0 * d / (d - 2.0)) } else { 4.0 };
    let r_cap = (0.5 - 0.5 * d * gap).min(0.5 * (d - 1.0) * gap);
    let mut conditions = vec![
        Condition {
            name: "2 < q".into(),
            lhs: 2.0,
            rhs: q,
            holds: q > 2.0,
        },
        Condition {
            name: "q < min{4, 2d/(d-2)}".into(),
            lhs: q,
            rhs: q_cap,
            holds: q < q_cap,
        },
        Condition {
            name: "0 < 1/r".into(),
            lhs: 0.0,
            rhs: inv_r,
            holds: inv_r > 0.0,
        },
        Condition {
            name: "1/r <= min{1/2 - (d/2)(1/2 - 1/q), ((d-1)/2)(1/2 - 1/q)}".into(),
            lhs: inv_r,
            rhs: r_cap,
            holds: inv_r <= r_cap + SLACK * r_cap.abs().max(1.0),
        },
        Condition {
            name: "1/r < 2d/q - 1".into(),
            lhs: inv_r,
            rhs: 2.0 * d / q - 1.0,
            holds: inv_r < 2.0 * d / q - 1.0,
        },
        Condition {
            name: "0 < eps".into(),
            lhs: 0.0,
            rhs: cfg.eps,
            holds: cfg.eps > 0.0,
        },
    ];
    let eps_cap = cfg.beta0 / cfg.alpha;
    conditions.push(Condition {
        name: "eps <= beta0/alpha".into(),
        lhs: cfg.eps,
        rhs: eps_cap,
        holds: cfg.eps <= eps_cap,
    });
    let admissible = cfg.d >= 2 && conditions.iter().all(|c| c.holds);
    Verdict { admissible, conditions }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_exponents() {
        let ok = validate_exponents(&ExponentConfig::new(2, 3.0, 12.0, 1.0, 0.1));
        assert!(ok.admissible);
        let bad = validate_exponents(&ExponentConfig::new(2, 3.0, 6.0, 1.0, 0.1));
        assert!(!bad.admissible);
        let names: Vec<_> = bad.violations().map(|c| c.name.clone()).collect();
        assert_eq!(names.len(), 1);
        assert!(names[0].starts_with("1/r <="));
        assert!(!validate_exponents(&ExponentConfig::new(2, 2.0, 12.0, 1.0, 0.1)).admissible);
    }
}
