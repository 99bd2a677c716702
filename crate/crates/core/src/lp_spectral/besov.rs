use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::field::SpectralField;
use crate::error::{Error, Result};

/// `(p, sigma, s)` of a homogeneous Besov space. Infinite exponents are
/// `f64::INFINITY`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesovIndex {
    pub p: f64,
    pub sigma: f64,
    pub s: f64,
}

impl BesovIndex {
    pub fn new(p: f64, sigma: f64, s: f64) -> Result<Self> {
        if !(p >= 1.0) || !(sigma >= 1.0) || !s.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "Besov index needs p, sigma >= 1 and finite s, got ({p}, {sigma}, {s})"
            )));
        }
        Ok(BesovIndex { p, sigma, s })
    }

    /// `(p, 1, s)`, the only summation exponent the critical spaces use.
    pub fn critical(p: f64, s: f64) -> Self {
        BesovIndex { p, sigma: 1.0, s }
    }
}

/// Restriction of the dyadic sum to `2^j < alpha`, `alpha <= 2^j < beta` or
/// `beta <= 2^j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Band {
    All,
    Low(f64),
    Mid(f64, f64),
    High(f64),
}

impl Band {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Band::All => true,
            Band::Low(a) | Band::High(a) => a > 0.0,
            Band::Mid(a, b) => a > 0.0 && b > 0.0 && a <= b,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("invalid band {self:?}")))
        }
    }

    pub fn contains(&self, j: i32) -> bool {
        let f = 2f64.powi(j);
        match *self {
            Band::All => true,
            Band::Low(a) => f < a,
            Band::Mid(a, b) => a <= f && f < b,
            Band::High(b) => b <= f,
        }
    }
}

/// `Delta_j f`.
pub fn dyadic_block(f: &SpectralField, j: i32) -> Result<SpectralField> {
    let shell = f.domain().bank().shell(j)?;
    let mut out = SpectralField::zeros(f.domain());
    let src = f.coeffs();
    let dst = out.coeffs_mut();
    for &(idx, w) in &shell.entries {
        dst[idx] = src[idx] * w;
    }
    Ok(out)
}

/// `S_j f = sum_{j' <= j} Delta_j' f`; empty below the bank, `f - mean(f)`
/// at or above its top.
pub fn low_cut(f: &SpectralField, j: i32) -> SpectralField {
    let bank = f.domain().bank();
    let mut out = SpectralField::zeros(f.domain());
    if j < bank.j_min() {
        return out;
    }
    let top = j.min(bank.j_max());
    let src = f.coeffs();
    let dst = out.coeffs_mut();
    for jj in bank.j_min()..=top {
        for &(idx, w) in &bank.shell(jj).expect("in range").entries {
            dst[idx] += src[idx] * w;
        }
    }
    out
}

/// `sum_j Delta_j f`, which is `f` without its mean for resolved fields.
pub fn sum_blocks(f: &SpectralField) -> SpectralField {
    low_cut(f, f.domain().bank().j_max())
}

/// L^p norm of the pointwise Euclidean magnitude of `comps`. p = 2 is exact
/// by Parseval, p = inf is the max on the native grid, other p use a Riemann
/// sum on the doubled grid.
pub fn lp_norm(comps: &[&SpectralField], p: f64) -> f64 {
    let dom = comps[0].domain();
    let slices: Vec<&[Complex64]> = comps.iter().map(|c| c.coeffs()).collect();
    lp_norm_coeffs(dom, &slices, p)
}

fn lp_norm_coeffs(dom: &super::field::Domain, comps: &[&[Complex64]], p: f64) -> f64 {
    let volume = dom.grid().volume();
    if p == 2.0 {
        let s: f64 = comps.iter().map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>()).sum();
        return (volume * s).sqrt();
    }
    let n = dom.grid().n;
    let m = if p.is_infinite() { n } else { 2 * n };
    let phys = dom.physical(comps, m);
    let pts = phys[0].len();
    let mag = |i: usize| phys.iter().map(|c| c[i] * c[i]).sum::<f64>().sqrt();
    if p.is_infinite() {
        (0..pts).into_par_iter().map(mag).reduce(|| 0.0, f64::max)
    } else {
        // Fixed chunks keep the summation order independent of scheduling.
        let partial: Vec<f64> = (0..pts)
            .into_par_iter()
            .chunks(4096)
            .map(|c| c.into_iter().map(|i| mag(i).powf(p)).sum::<f64>())
            .collect();
        let s: f64 = partial.iter().sum();
        (s * volume / pts as f64).powf(1.0 / p)
    }
}

/// `||Delta_j comps||_{L^p}` for every shell of the bank, ordered by j.
pub fn block_norms(comps: &[&SpectralField], p: f64) -> Vec<(i32, f64)> {
    let dom = comps[0].domain();
    let bank = dom.bank();
    let volume = dom.grid().volume();
    bank.shells()
        .iter()
        .map(|shell| {
            let value = if p == 2.0 {
                let s: f64 = shell
                    .entries
                    .iter()
                    .map(|&(idx, w)| w * w * comps.iter().map(|c| c.coeffs()[idx].norm_sqr()).sum::<f64>())
                    .sum();
                (volume * s).sqrt()
            } else if shell.entries.is_empty() {
                0.0
            } else {
                let blocks: Vec<Vec<Complex64>> = comps
                    .iter()
                    .map(|c| {
                        let mut b = vec![Complex64::default(); dom.len()];
                        for &(idx, w) in &shell.entries {
                            b[idx] = c.coeffs()[idx] * w;
                        }
                        b
                    })
                    .collect();
                let slices: Vec<&[Complex64]> = blocks.iter().map(|b| b.as_slice()).collect();
                lp_norm_coeffs(dom, &slices, p)
            };
            (shell.j, value)
        })
        .collect()
}

/// `l^sigma` over the band of `2^{sj} * value_j`.
pub fn dyadic_sum(blocks: impl IntoIterator<Item = (i32, f64)>, idx: &BesovIndex, band: &Band) -> f64 {
    let weighted = blocks
        .into_iter()
        .filter(|(j, _)| band.contains(*j))
        .map(|(j, v)| 2f64.powf(idx.s * j as f64) * v);
    lsum(weighted, idx.sigma)
}

pub(crate) fn lsum(values: impl Iterator<Item = f64>, sigma: f64) -> f64 {
    if sigma.is_infinite() {
        values.fold(0.0, f64::max)
    } else if sigma == 1.0 {
        values.sum()
    } else {
        values.map(|v| v.powf(sigma)).sum::<f64>().powf(1.0 / sigma)
    }
}

/// Truncated homogeneous Besov norm of a scalar field.
pub fn besov_norm(f: &SpectralField, idx: &BesovIndex, band: &Band) -> f64 {
    besov_norm_components(&[f], idx, band)
}

/// Besov norm of a multi-component field, blocks measured through the
/// pointwise Euclidean magnitude.
pub fn besov_norm_components(comps: &[&SpectralField], idx: &BesovIndex, band: &Band) -> f64 {
    let bank = comps[0].domain().bank();
    if !bank.js().any(|j| band.contains(j)) {
        return 0.0;
    }
    dyadic_sum(block_norms(comps, idx.p), idx, band)
}
