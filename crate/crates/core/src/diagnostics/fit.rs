use serde::{Deserialize, Serialize};
use std::io::Write;

use crate::error::{Error, Result};

/// Least-squares fit `log error = slope log eps + intercept`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub eps_values: Vec<f64>,
    pub error_values: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

impl RateFit {
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "eps,error")?;
        for (e, v) in self.eps_values.iter().zip(&self.error_values) {
            writeln!(w, "{e:e},{v:e}")?;
        }
        Ok(())
    }
}

pub fn convergence_rate_fit(points: &[(f64, f64)]) -> Result<RateFit> {
    if points.len() < 3 {
        return Err(Error::InsufficientSamples(format!(
            "rate fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    if points.iter().any(|&(e, v)| !(e > 0.0) || !(v > 0.0) || !e.is_finite() || !v.is_finite()) {
        return Err(Error::InvalidArgument("rate fit needs positive finite points".into()));
    }
    if points.windows(2).any(|w| !(w[0].0 > w[1].0)) {
        return Err(Error::InvalidArgument("eps values must be strictly decreasing".into()));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let r_squared = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    Ok(RateFit {
        eps_values: points.iter().map(|p| p.0).collect(),
        error_values: points.iter().map(|p| p.1).collect(),
        slope,
        intercept,
        r_squared,
    })
}
