use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cuts `0 = T_0 < ... < T_N = inf` with `||f||_{L^r(T_{n-1}, T_n)} <= delta`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Split {
    pub cuts: Vec<f64>,
    /// `||f||_{L^r(0, inf)}`.
    pub total: f64,
    /// `ceil((total / delta)^r)`.
    pub bound: usize,
}

impl Split {
    pub fn intervals(&self) -> usize {
        self.cuts.len() - 1
    }
}

/// Cumulative `int_0^t f^r` for `f` sampled at `times` (piecewise linear
/// `f^r`, zero past the last sample).
struct Cumulative<'a> {
    times: &'a [f64],
    pow: Vec<f64>,
    acc: Vec<f64>,
}

impl<'a> Cumulative<'a> {
    fn new(times: &'a [f64], values: &[f64], r: f64) -> Self {
        let pow: Vec<f64> = values.iter().map(|v| v.abs().powf(r)).collect();
        let mut acc = vec![0.0; times.len()];
        for k in 1..times.len() {
            acc[k] = acc[k - 1] + 0.5 * (times[k] - times[k - 1]) * (pow[k - 1] + pow[k]);
        }
        Cumulative { times, pow, acc }
    }

    fn total(&self) -> f64 {
        *self.acc.last().unwrap_or(&0.0)
    }

    fn at(&self, t: f64) -> f64 {
        let ts = self.times;
        if t <= ts[0] {
            return 0.0;
        }
        if t >= ts[ts.len() - 1] {
            return self.total();
        }
        let k = ts.partition_point(|&s| s <= t);
        let (t0, t1) = (ts[k - 1], ts[k]);
        let w = (t - t0) / (t1 - t0);
        let y = self.pow[k - 1] * (1.0 - w) + self.pow[k] * w;
        self.acc[k - 1] + 0.5 * (t - t0) * (self.pow[k - 1] + y)
    }

    /// Largest `t` with `at(t) <= target`, by bisection.
    fn solve(&self, target: f64) -> f64 {
        let ts = self.times;
        let k = self.acc.partition_point(|&a| a <= target);
        if k >= ts.len() {
            return f64::INFINITY;
        }
        let (mut lo, mut hi) = (ts[k - 1], ts[k]);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.at(mid) <= target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }
}

const MAX_INTERVALS: usize = 1_000_000;

/// Splits the time axis so that `f` has `L^r` norm at most `delta` on every
/// piece, following `T_n = sup{T : ||f||_{L^r(T_{n-1}, T)} <= delta}`.
pub fn split_time_intervals(times: &[f64], values: &[f64], r: f64, delta: f64) -> Result<Split> {
    if !(delta > 0.0) {
        return Err(Error::InvalidArgument(format!("delta = {delta} must be positive")));
    }
    if !(r >= 1.0) || r.is_infinite() {
        return Err(Error::InvalidArgument(format!("time exponent {r} must be finite and >= 1")));
    }
    if times.len() != values.len() || times.len() < 2 {
        return Err(Error::InsufficientSamples("splitting needs at least two samples".into()));
    }
    if times.windows(2).any(|w| !(w[0] < w[1])) || times[0] != 0.0 {
        return Err(Error::InvalidArgument("sample times must start at 0 and increase".into()));
    }
    let cum = Cumulative::new(times, values, r);
    let total_r = cum.total();
    let total = total_r.powf(1.0 / r);
    let ratio = (total / delta).powf(r).ceil().max(1.0);
    if ratio > MAX_INTERVALS as f64 {
        return Err(Error::InvalidArgument(format!(
            "delta = {delta} would need about {ratio:e} intervals"
        )));
    }
    let bound = ratio as usize;
    let step = delta.powf(r);
    let tol = 1e-12 * step.max(total_r);
    let mut cuts = vec![0.0];
    let mut base = 0.0;
    while total_r - base > step + tol {
        let t = cum.solve(base + step);
        cuts.push(t);
        base = cum.at(t);
    }
    cuts.push(f64::INFINITY);
    Ok(Split { cuts, total, bound })
}

/// `||f||_{L^r(t0, t1)}` under the same quadrature as the splitter.
pub fn interval_norm(times: &[f64], values: &[f64], r: f64, t0: f64, t1: f64) -> f64 {
    let cum = Cumulative::new(times, values, r);
    (cum.at(t1) - cum.at(t0)).max(0.0).powf(1.0 / r)
}
