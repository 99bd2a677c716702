use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};

use super::besov::{dyadic_sum, lsum, Band, BesovIndex};
use crate::error::{Error, Result};

/// Order of the time and dyadic norms in a space-time Besov norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TimeFlavor {
    /// `l^sigma_j ( L^r_t ||Delta_j f||_{L^p} )`.
    CheminLerner,
    /// `L^r_t ( ||f(t)||_{B^s_{p,sigma}} )`.
    Lebesgue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockSeries {
    pub j: i32,
    pub p: f64,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotRef {
    pub t: f64,
    pub path: String,
}

/// Sampled `t -> ||Delta_j f(t)||_{L^p}` for a set of `(j, p)`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySeries {
    times: Vec<f64>,
    blocks: Vec<BlockSeries>,
    pub snapshot_refs: Vec<SnapshotRef>,
}

impl TrajectorySeries {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn blocks(&self) -> &[BlockSeries] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Appends one sample. The first sample fixes the set of `(j, p)` keys;
    /// later samples must supply exactly that set.
    pub fn push_sample(&mut self, t: f64, entries: &[(i32, f64, f64)]) -> Result<()> {
        if !t.is_finite() {
            return Err(Error::InvalidArgument(format!("sample time {t}")));
        }
        if let Some(&last) = self.times.last() {
            if t <= last {
                return Err(Error::InvalidArgument(format!(
                    "sample times must increase strictly ({t} after {last})"
                )));
            }
        }
        for &(_, _, v) in entries {
            if !(v >= 0.0) {
                return Err(Error::InvalidArgument(format!("block norm {v} is not a nonnegative number")));
            }
        }
        if self.times.is_empty() {
            self.blocks = entries
                .iter()
                .map(|&(j, p, v)| BlockSeries { j, p, values: vec![v] })
                .collect();
            self.blocks
                .sort_by(|a, b| a.p.total_cmp(&b.p).then(a.j.cmp(&b.j)));
        } else {
            if entries.len() != self.blocks.len() {
                return Err(Error::InvalidArgument("sample does not match the stored block set".into()));
            }
            for &(j, p, v) in entries {
                let series = self
                    .blocks
                    .iter_mut()
                    .find(|b| b.j == j && b.p == p)
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown block (j={j}, p={p})")))?;
                if series.values.len() != self.times.len() {
                    return Err(Error::InvalidArgument(format!("duplicate block (j={j}, p={p})")));
                }
                series.values.push(v);
            }
        }
        self.times.push(t);
        Ok(())
    }

    /// Series for one Lebesgue exponent, ordered by j.
    pub fn series_for(&self, p: f64) -> Vec<&BlockSeries> {
        self.blocks.iter().filter(|b| b.p == p).collect()
    }

    pub fn block_values(&self, j: i32, p: f64) -> Option<&[f64]> {
        self.blocks
            .iter()
            .find(|b| b.j == j && b.p == p)
            .map(|b| b.values.as_slice())
    }

    /// Samples in `[t0, t1]`, with linearly interpolated end samples when the
    /// endpoints fall between stored times.
    pub fn restrict(&self, t0: f64, t1: f64) -> Result<TrajectorySeries> {
        if !(t0 < t1) {
            return Err(Error::InvalidArgument(format!("empty interval [{t0}, {t1}]")));
        }
        let first = *self.times.first().ok_or_else(|| Error::InsufficientSamples("empty trajectory".into()))?;
        let last = *self.times.last().unwrap();
        let t0 = t0.max(first);
        let t1 = t1.min(last);
        let mut times = Vec::new();
        if t0 <= t1 {
            times.push(t0);
            times.extend(self.times.iter().copied().filter(|&t| t > t0 && t < t1));
            if t1 > t0 {
                times.push(t1);
            }
        }
        self.resample(&times)
    }

    /// Linear interpolation onto `times` (which must lie within the stored range).
    pub fn resample(&self, times: &[f64]) -> Result<TrajectorySeries> {
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                Ok(BlockSeries {
                    j: b.j,
                    p: b.p,
                    values: times
                        .iter()
                        .map(|&t| interpolate(&self.times, &b.values, t))
                        .collect::<Result<Vec<f64>>>()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TrajectorySeries {
            times: times.to_vec(),
            blocks,
            snapshot_refs: Vec::new(),
        })
    }

    /// Every block series multiplied by `c >= 0`.
    pub fn scaled(&self, c: f64) -> TrajectorySeries {
        let mut out = self.clone();
        for b in &mut out.blocks {
            for v in &mut b.values {
                *v *= c;
            }
        }
        out
    }

    /// CSV with columns `t,j,p,value`, one row per sample and block.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "t,j,p,value")?;
        for (i, t) in self.times.iter().enumerate() {
            for b in &self.blocks {
                writeln!(w, "{},{},{},{:e}", t, b.j, b.p, b.values[i])?;
            }
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: R) -> Result<TrajectorySeries> {
        let mut traj = TrajectorySeries::new();
        let mut current: Option<f64> = None;
        let mut row: Vec<(i32, f64, f64)> = Vec::new();
        for (lineno, line) in r.lines().enumerate() {
            let line = line?;
            if lineno == 0 {
                if line.trim() != "t,j,p,value" {
                    return Err(Error::Format(format!("unexpected norm CSV header {line:?}")));
                }
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 4 {
                return Err(Error::Format(format!("line {}: expected 4 columns", lineno + 1)));
            }
            let parse = |s: &str| -> Result<f64> {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Format(format!("line {}: {e}", lineno + 1)))
            };
            let t = parse(cols[0])?;
            let j: i32 = cols[1]
                .trim()
                .parse()
                .map_err(|e| Error::Format(format!("line {}: {e}", lineno + 1)))?;
            let p = parse(cols[2])?;
            let v = parse(cols[3])?;
            if current != Some(t) {
                if let Some(tc) = current {
                    traj.push_sample(tc, &row)?;
                }
                row.clear();
                current = Some(t);
            }
            row.push((j, p, v));
        }
        if let Some(tc) = current {
            traj.push_sample(tc, &row)?;
        }
        Ok(traj)
    }
}

fn interpolate(times: &[f64], values: &[f64], t: f64) -> Result<f64> {
    let n = times.len();
    if n == 0 {
        return Err(Error::InsufficientSamples("empty trajectory".into()));
    }
    let tol = 1e-12 * (1.0 + times[n - 1].abs());
    if t < times[0] - tol || t > times[n - 1] + tol {
        return Err(Error::InvalidArgument(format!(
            "time {t} outside sampled range [{}, {}]",
            times[0],
            times[n - 1]
        )));
    }
    if n == 1 || t <= times[0] {
        return Ok(values[0]);
    }
    if t >= times[n - 1] {
        return Ok(values[n - 1]);
    }
    let k = times.partition_point(|&s| s <= t);
    let (ta, tb) = (times[k - 1], times[k]);
    let w = (t - ta) / (tb - ta);
    Ok(values[k - 1] * (1.0 - w) + values[k] * w)
}

/// `L^r` norm in time of sampled values: composite trapezoid on `g^r`, or the
/// max for `r = inf`.
pub fn time_lr_norm(times: &[f64], values: &[f64], r: f64) -> Result<f64> {
    if times.is_empty() {
        return Err(Error::InsufficientSamples("empty trajectory".into()));
    }
    if r.is_infinite() {
        return Ok(values.iter().copied().fold(0.0, f64::max));
    }
    if times.len() < 2 {
        return Err(Error::InsufficientSamples(format!(
            "L^{r} in time needs at least two samples"
        )));
    }
    if !(r > 0.0) {
        return Err(Error::InvalidArgument(format!("time exponent {r}")));
    }
    let mut acc = 0.0;
    for k in 1..times.len() {
        acc += 0.5 * (times[k] - times[k - 1]) * (values[k - 1].powf(r) + values[k].powf(r));
    }
    Ok(acc.powf(1.0 / r))
}

/// Space-time Besov norm of a sampled trajectory over its full time range.
pub fn time_besov_norm(
    traj: &TrajectorySeries,
    r: f64,
    idx: &BesovIndex,
    band: &Band,
    flavor: TimeFlavor,
) -> Result<f64> {
    band.validate()?;
    if traj.is_empty() {
        return Err(Error::InsufficientSamples("empty trajectory".into()));
    }
    if traj.len() < 2 && r.is_finite() {
        return Err(Error::InsufficientSamples(format!(
            "L^{r} in time needs at least two samples"
        )));
    }
    let series: Vec<&BlockSeries> = traj
        .series_for(idx.p)
        .into_iter()
        .filter(|b| band.contains(b.j))
        .collect();
    if traj.series_for(idx.p).is_empty() {
        return Err(Error::InvalidArgument(format!("trajectory stores no blocks for p = {}", idx.p)));
    }
    if series.is_empty() {
        return Ok(0.0);
    }
    match flavor {
        TimeFlavor::CheminLerner => {
            let per_block = series
                .iter()
                .map(|b| Ok((b.j, time_lr_norm(&traj.times, &b.values, r)?)))
                .collect::<Result<Vec<_>>>()?;
            Ok(dyadic_sum(per_block, idx, band))
        }
        TimeFlavor::Lebesgue => {
            let g: Vec<f64> = (0..traj.len())
                .map(|i| {
                    lsum(
                        series.iter().map(|b| 2f64.powf(idx.s * b.j as f64) * b.values[i]),
                        idx.sigma,
                    )
                })
                .collect();
            time_lr_norm(&traj.times, &g, r)
        }
    }
}
