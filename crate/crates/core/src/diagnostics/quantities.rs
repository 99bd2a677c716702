use serde::{Deserialize, Serialize};

use super::exponents::ExponentConfig;
use crate::error::{Error, Result};
use crate::lp_spectral::{
    besov_norm_components, time_besov_norm, Band, BesovIndex, SpectralField, TimeFlavor, TrajectorySeries,
    VectorField,
};
use crate::operators::{helmholtz_p, helmholtz_q};
use crate::solvers::sample_entries;

/// Block-norm histories of `a`, `Qu`, `Pu` and `u`, each at `p = 2` and `p = q`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StateSeries {
    pub a: TrajectorySeries,
    pub qu: TrajectorySeries,
    pub pu: TrajectorySeries,
    pub u: TrajectorySeries,
}

impl StateSeries {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, t: f64, a: &SpectralField, u: &VectorField, ps: &[f64]) -> Result<()> {
        let qu = helmholtz_q(u);
        let pu = helmholtz_p(u);
        self.a.push_sample(t, &sample_entries(&[a], ps))?;
        self.qu.push_sample(t, &sample_entries(&qu.comps().iter().collect::<Vec<_>>(), ps))?;
        self.pu.push_sample(t, &sample_entries(&pu.comps().iter().collect::<Vec<_>>(), ps))?;
        self.u.push_sample(t, &sample_entries(&u.comps().iter().collect::<Vec<_>>(), ps))?;
        Ok(())
    }

    pub fn times(&self) -> &[f64] {
        self.a.times()
    }

    pub fn scaled(&self, c: f64) -> Self {
        StateSeries {
            a: self.a.scaled(c),
            qu: self.qu.scaled(c),
            pu: self.pu.scaled(c),
            u: self.u.scaled(c),
        }
    }

    pub fn restrict(&self, interval: Interval) -> Result<Self> {
        Ok(StateSeries {
            a: restrict(&self.a, interval)?,
            qu: restrict(&self.qu, interval)?,
            pu: restrict(&self.pu, interval)?,
            u: restrict(&self.u, interval)?,
        })
    }
}

/// Time interval `[start, end]`; `end = inf` runs to the last sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub start: f64,
    pub end: f64,
}

impl Interval {
    pub fn new(start: f64, end: f64) -> Self {
        Interval { start, end }
    }

    pub fn all() -> Self {
        Interval {
            start: 0.0,
            end: f64::INFINITY,
        }
    }
}

pub fn restrict(traj: &TrajectorySeries, interval: Interval) -> Result<TrajectorySeries> {
    let times = traj.times();
    let (Some(&first), Some(&last)) = (times.first(), times.last()) else {
        return Err(Error::InsufficientSamples("empty trajectory".into()));
    };
    if interval.start <= first && interval.end >= last {
        return Ok(traj.clone());
    }
    traj.restrict(interval.start, interval.end)
}

fn piece(traj: &TrajectorySeries, r: f64, p: f64, s: f64, band: Band, flavor: TimeFlavor) -> Result<f64> {
    time_besov_norm(traj, r, &BesovIndex::critical(p, s), &band, flavor)
}

/// `L^inf B^{s0} cap L^1 B^{s1}` as the sum of both norms.
fn energy_pair(traj: &TrajectorySeries, p: f64, s0: f64, s1: f64, band: Band) -> Result<f64> {
    Ok(piece(traj, f64::INFINITY, p, s0, band, TimeFlavor::CheminLerner)?
        + piece(traj, 1.0, p, s1, band, TimeFlavor::CheminLerner)?)
}

/// `D_p^eps` of the initial data (`p = q` or `p = 2`).
pub fn data_norm_d(a0: &SpectralField, u0: &VectorField, cfg: &ExponentConfig, p: f64) -> Result<f64> {
    cfg.check_positive()?;
    let d = cfg.d as f64;
    let qu = helmholtz_q(u0);
    let pu = helmholtz_p(u0);
    let qc: Vec<&SpectralField> = qu.comps().iter().collect();
    let pc: Vec<&SpectralField> = pu.comps().iter().collect();
    let high = Band::High(cfg.high_cut());
    let mid = Band::Mid(cfg.alpha, cfg.high_cut());
    let low = Band::Low(cfg.alpha);
    let crit2 = BesovIndex::critical(2.0, 0.5 * d - 1.0);
    let pair = |band: &Band| besov_norm_components(&[a0], &crit2, band) + besov_norm_components(&qc, &crit2, band);
    let h = cfg.eps * besov_norm_components(&[a0], &BesovIndex::critical(p, d / p), &high)
        + besov_norm_components(&qc, &BesovIndex::critical(p, d / p - 1.0), &high)
        + pair(&mid);
    Ok(h + pair(&low) + besov_norm_components(&pc, &crit2, &Band::All))
}

/// `||(a, v)||_{X^eps(I)}`; pass `u` or `Qu` as the velocity series.
pub fn energy_norm_x(a: &TrajectorySeries, v: &TrajectorySeries, cfg: &ExponentConfig) -> Result<f64> {
    cfg.check_positive()?;
    let d = cfg.d as f64;
    let high = Band::High(cfg.high_cut());
    let low_a = Band::Low(cfg.high_cut());
    let hs = d / 2.0;
    Ok(cfg.eps * piece(a, f64::INFINITY, 2.0, hs, high, TimeFlavor::CheminLerner)?
        + piece(a, 1.0, 2.0, hs, high, TimeFlavor::CheminLerner)? / cfg.eps
        + energy_pair(a, 2.0, hs - 1.0, hs + 1.0, low_a)?
        + energy_pair(v, 2.0, hs - 1.0, hs + 1.0, Band::All)?)
}

/// The three channels of `||(a, u)||_{Y^{eps,alpha}_{q,r}(I)}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct YParts {
    pub high: f64,
    pub low: f64,
    pub solenoidal: f64,
}

impl YParts {
    pub fn total(&self) -> f64 {
        self.high + self.low + self.solenoidal
    }
}

pub fn y_parts(s: &StateSeries, cfg: &ExponentConfig) -> Result<YParts> {
    cfg.check_positive()?;
    let d = cfg.d as f64;
    let (q, r) = (cfg.q, cfg.r);
    let high = Band::High(cfg.high_cut());
    let mid = Band::Mid(cfg.alpha, cfg.high_cut());
    let low = Band::Low(cfg.alpha);
    let hs = d / 2.0;
    let cl = TimeFlavor::CheminLerner;
    let y_high = cfg.eps * piece(&s.a, f64::INFINITY, q, d / q, high, cl)?
        + piece(&s.a, 1.0, q, d / q, high, cl)? / cfg.eps
        + energy_pair(&s.qu, q, d / q - 1.0, d / q + 1.0, high)?
        + energy_pair(&s.a, 2.0, hs - 1.0, hs + 1.0, mid)?
        + energy_pair(&s.qu, 2.0, hs - 1.0, hs + 1.0, mid)?;
    let sr = d / q - 1.0 + 2.0 / r;
    let y_low = piece(&s.a, r, q, sr, low, cl)? + piece(&s.qu, r, q, sr, low, cl)?;
    let y_p = solenoidal_norm(&s.pu, cfg)?;
    Ok(YParts {
        high: y_high,
        low: y_low,
        solenoidal: y_p,
    })
}

/// `L^r B^{d/q-1+2/r}_{q,1} cap L^1 B^{d/q+1}_{q,1}`.
fn solenoidal_norm(traj: &TrajectorySeries, cfg: &ExponentConfig) -> Result<f64> {
    let d = cfg.d as f64;
    let (q, r) = (cfg.q, cfg.r);
    let cl = TimeFlavor::CheminLerner;
    Ok(piece(traj, r, q, d / q - 1.0 + 2.0 / r, Band::All, cl)? + piece(traj, 1.0, q, d / q + 1.0, Band::All, cl)?)
}

/// `A = alpha eps X(a, Qu) + Y(a, u) + (Y^{l;alpha})^{1/(r-1)} X(a, Qu)^{(r-2)/(r-1)}`.
pub fn quantity_a(s: &StateSeries, cfg: &ExponentConfig) -> Result<f64> {
    let x = energy_norm_x(&s.a, &s.qu, cfg)?;
    let y = y_parts(s, cfg)?;
    let r = cfg.r;
    let mixed = if y.low == 0.0 || x == 0.0 {
        0.0
    } else {
        y.low.powf(1.0 / (r - 1.0)) * x.powf((r - 2.0) / (r - 1.0))
    };
    Ok(cfg.alpha * cfg.eps * x + y.total() + mixed)
}

/// `A~ = ||w||_{L^r B^{d/q-1+2/r}_{q,1} cap L^1 B^{d/q+1}_{q,1}} + A`.
pub fn quantity_a_tilde(s: &StateSeries, w: &TrajectorySeries, cfg: &ExponentConfig) -> Result<f64> {
    Ok(solenoidal_norm(w, cfg)? + quantity_a(s, cfg)?)
}

/// Distances of the compressible solution to the incompressible limit:
/// `rate = ||(a, Qu)||_{L^r B^{d/q-1+1/r}_{q,1}} + ||Pu - w||_{L^inf B^{d/q-1-1/r}_{q,1} cap L^1 B^{d/q+1-1/r}_{q,1}}`
/// and `critical` with `1/r` replaced by `2/r` in the first term and by `0`
/// in the second.
pub fn limit_norms(s: &StateSeries, diff: &TrajectorySeries, cfg: &ExponentConfig) -> Result<(f64, f64)> {
    if s.a.times() != diff.times() {
        return Err(Error::InvalidArgument(
            "compressible and difference series must share sample times".into(),
        ));
    }
    let d = cfg.d as f64;
    let (q, r) = (cfg.q, cfg.r);
    let lb = TimeFlavor::Lebesgue;
    let all = Band::All;
    let base = d / q - 1.0;
    let measure = |k: f64| -> Result<f64> {
        let s1 = base + k / r;
        Ok(piece(&s.a, r, q, s1, all, lb)?
            + piece(&s.qu, r, q, s1, all, lb)?
            + piece(diff, f64::INFINITY, q, base - (2.0 - k) / r, all, lb)?
            + piece(diff, 1.0, q, base + 2.0 - (2.0 - k) / r, all, lb)?)
    };
    Ok((measure(1.0)?, measure(2.0)?))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub exponents: ExponentConfig,
    pub interval: Interval,
    pub d_eps: f64,
    pub x_eps: f64,
    pub y_high: f64,
    pub y_low: f64,
    pub y_p: f64,
    pub a: f64,
    pub a_tilde: f64,
    pub limit_lhs_rate_norm: f64,
    pub limit_lhs_critical_norm: f64,
}

impl NormReport {
    pub fn is_consistent(&self) -> bool {
        let all = [
            self.d_eps,
            self.x_eps,
            self.y_high,
            self.y_low,
            self.y_p,
            self.a,
            self.a_tilde,
            self.limit_lhs_rate_norm,
            self.limit_lhs_critical_norm,
        ];
        all.iter().all(|v| v.is_finite() && *v >= 0.0) && self.y_high + self.y_low + self.y_p <= self.a
    }
}

/// Every diagnostic of one run over `interval`.
pub fn norm_report(
    a0: &SpectralField,
    u0: &VectorField,
    s: &StateSeries,
    w: &TrajectorySeries,
    diff: &TrajectorySeries,
    cfg: &ExponentConfig,
    interval: Interval,
) -> Result<NormReport> {
    let s = s.restrict(interval)?;
    let w = restrict(w, interval)?;
    let diff = restrict(diff, interval)?;
    let y = y_parts(&s, cfg)?;
    let (rate, critical) = limit_norms(&s, &diff, cfg)?;
    Ok(NormReport {
        exponents: *cfg,
        interval,
        d_eps: data_norm_d(a0, u0, cfg, cfg.q)?,
        x_eps: energy_norm_x(&s.a, &s.u, cfg)?,
        y_high: y.high,
        y_low: y.low,
        y_p: y.solenoidal,
        a: quantity_a(&s, cfg)?,
        a_tilde: quantity_a_tilde(&s, &w, cfg)?,
        limit_lhs_rate_norm: rate,
        limit_lhs_critical_norm: critical,
    })
}
