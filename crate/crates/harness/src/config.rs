use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use std::path::Path;

use machlimit_core::diagnostics::ExponentConfig;
use machlimit_core::lp_spectral::Grid;
use machlimit_core::operators::LameParams;
use machlimit_core::solvers::{CompressibleParams, PressureLaw, SamplePolicy};

use crate::error::{HarnessError, HarnessResult};

/// One experiment, read from a TOML file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub d: usize,
    pub n: usize,
    #[serde(rename = "L", default = "default_box")]
    pub box_length: f64,
    pub eps: f64,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(default)]
    pub mu: f64,
    #[serde(default)]
    pub lambda: f64,
    /// Fixed step; the solver default applies when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    pub t_end: f64,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_stride: Option<usize>,
    /// Sample at multiples of this time instead of every `sample_stride` steps.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_dt: Option<f64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_true")]
    pub nonlinear: bool,
    pub q: f64,
    pub r: f64,
    pub alpha: f64,
    #[serde(default = "default_beta0")]
    pub beta0: f64,
    #[serde(default)]
    pub override_admissibility: bool,
    /// Mach numbers of a sweep, strictly decreasing.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub eps_list: Vec<f64>,
    pub init: InitSpec,
}

fn default_box() -> f64 {
    TAU
}

fn default_gamma() -> f64 {
    1.4
}

fn default_cfl() -> f64 {
    0.4
}

fn default_true() -> bool {
    true
}

fn default_beta0() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preparation {
    /// `a0 = 0` and `u0` divergence free.
    Well,
    /// Density and both velocity components as drawn.
    Ill,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitSpec {
    RandomBand {
        k_min: f64,
        k_max: f64,
        #[serde(default)]
        slope: f64,
        /// Sup norm of `a0` and of `|u0|`.
        amplitude: f64,
        #[serde(default = "default_preparation")]
        preparation: Preparation,
    },
    TaylorGreen {
        #[serde(default = "default_amplitude")]
        amplitude: f64,
    },
    /// `Pu0 = sin(m x3) (-d2 phi, d1 phi, 0)` in `d = 3`, `a0 = 0`.
    RemarkExample {
        m: f64,
        #[serde(default = "default_amplitude")]
        amplitude: f64,
    },
}

fn default_preparation() -> Preparation {
    Preparation::Ill
}

fn default_amplitude() -> f64 {
    1.0
}

impl Config {
    pub fn from_toml(text: &str) -> HarnessResult<Self> {
        toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> HarnessResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn grid(&self) -> HarnessResult<Grid> {
        Ok(Grid::new(self.d, self.n, self.box_length)?)
    }

    pub fn exponents(&self) -> ExponentConfig {
        ExponentConfig {
            d: self.d,
            q: self.q,
            r: self.r,
            alpha: self.alpha,
            beta0: self.beta0,
            eps: self.eps,
        }
    }

    pub fn lame(&self) -> HarnessResult<LameParams> {
        Ok(LameParams::new(self.mu, self.lambda)?)
    }

    pub fn params(&self) -> HarnessResult<CompressibleParams> {
        let mut p = CompressibleParams::new(self.eps, self.lame()?, PressureLaw::gamma_law(self.gamma)?);
        p.nonlinear = self.nonlinear;
        p.cfl = self.cfl;
        Ok(p)
    }

    pub fn sample_policy(&self) -> SamplePolicy {
        match (self.sample_dt, self.sample_stride) {
            (Some(s), _) => SamplePolicy::Interval(s),
            (None, Some(k)) => SamplePolicy::Stride(k),
            (None, None) => SamplePolicy::Stride(1),
        }
    }

    pub fn with_eps(&self, eps: f64) -> Self {
        let mut c = self.clone();
        c.eps = eps;
        c.eps_list.clear();
        c
    }

    /// Checks that do not need the grid or the exponent verdict.
    pub fn check(&self) -> HarnessResult<()> {
        self.grid()?;
        self.lame()?;
        if !(self.eps > 0.0) || !self.eps.is_finite() {
            return Err(HarnessError::Config(format!("eps = {} must be positive", self.eps)));
        }
        if !(self.t_end >= 0.0) || !self.t_end.is_finite() {
            return Err(HarnessError::Config(format!("t_end = {} must be nonnegative", self.t_end)));
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0) {
                return Err(HarnessError::Config(format!("dt = {dt} must be positive")));
            }
        }
        if self.sample_stride == Some(0) {
            return Err(HarnessError::Config("sample_stride must be at least 1".into()));
        }
        if let Some(s) = self.sample_dt {
            if !(s > 0.0) {
                return Err(HarnessError::Config(format!("sample_dt = {s} must be positive")));
            }
        }
        if !(self.gamma >= 1.0) {
            return Err(HarnessError::Config(format!("gamma = {} must be at least 1", self.gamma)));
        }
        if !(self.cfl > 0.0) {
            return Err(HarnessError::Config(format!("cfl = {} must be positive", self.cfl)));
        }
        Ok(())
    }
}
