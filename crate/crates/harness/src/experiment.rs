use serde::{Deserialize, Serialize};
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;
use std::sync::Arc;

use machlimit_core::diagnostics::{
    data_norm_d, norm_report, validate_exponents, Interval, NormReport, StateSeries, Verdict,
};
use machlimit_core::lp_spectral::{read_fields, write_snapshot, Domain, SpectralField, TrajectorySeries, VectorField};
use machlimit_core::operators::helmholtz_p;
use machlimit_core::solvers::{
    run, sample_entries, CompressibleSolver, CompressibleState, IncompressibleSolver, IncompressibleState,
    SamplePolicy, StepPlan,
};

use crate::config::Config;
use crate::error::{HarnessError, HarnessResult};
use crate::initial::gen_initial_data;
use crate::manifest::{now, write_manifest};
use crate::oracle::linear_propagate;

pub const CONFIG_FILE: &str = "config.toml";
pub const RUN_FILE: &str = "run.json";
pub const REPORT_FILE: &str = "report.json";
pub const SERIES: [&str; 6] = ["a", "qu", "pu", "u", "w", "diff"];

/// Block-norm exponents recorded for every series.
pub fn recorded_ps(q: f64) -> Vec<f64> {
    if q == 2.0 {
        vec![2.0]
    } else {
        vec![2.0, q]
    }
}

/// Solver bookkeeping of one compressible run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunInfo {
    pub eps: f64,
    pub dt: f64,
    pub steps: usize,
    pub stride: usize,
    pub reference_dt: f64,
    pub status: RunStatus,
    /// Smallest `min(1 + eps a)` over the samples.
    pub min_density: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", content = "reason", rename_all = "snake_case")]
pub enum RunStatus {
    Completed,
    Rejected(String),
}

/// Everything derived from a run directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub eps: f64,
    pub t_final: f64,
    pub samples: usize,
    pub status: RunStatus,
    pub verdict: Verdict,
    /// `D^eps` at `p = q` and `p = 2`.
    pub data_norm_q: Option<f64>,
    pub data_norm_2: Option<f64>,
    /// Space-time diagnostics; absent with fewer than two samples.
    pub norms: Option<NormReport>,
    pub y_le_a: Option<bool>,
    /// Largest `|m(t) - m(0)|` over the samples for the mean of `a`, of `u`
    /// and of `(1 + eps a) u`.
    pub mean_a_drift: f64,
    pub mean_u_drift: f64,
    pub momentum_drift: f64,
    /// Largest coefficient deviation of the final state from the exact
    /// linear flow; only for runs without the nonlinearity.
    pub linear_deviation: Option<f64>,
    pub min_density: f64,
}

/// Samples of the incompressible limit `w` at the sweep sample times.
pub struct Reference {
    pub dt: f64,
    pub times: Vec<f64>,
    pub fields: Vec<VectorField>,
}

impl Reference {
    /// Runs the limit system from `P u0`; sampling needs `sample_dt` unless
    /// `t_end = 0`.
    pub fn compute(cfg: &Config, u0: &VectorField) -> HarnessResult<Reference> {
        let domain = u0.domain().clone();
        let w0 = IncompressibleState::new(u0.clone());
        let dx = domain.grid().dx();
        let umax = w0.w.max_magnitude();
        let dt_max = cfg
            .dt
            .unwrap_or(if umax > 0.0 { cfg.cfl * dx / umax } else { cfg.t_end.max(1.0) });
        if cfg.t_end == 0.0 {
            return Ok(Reference {
                dt: dt_max,
                times: vec![0.0],
                fields: vec![w0.w],
            });
        }
        let SamplePolicy::Interval(_) = cfg.sample_policy() else {
            return Err(HarnessError::Config("a shared reference needs sample_dt".into()));
        };
        let plan = StepPlan::new(cfg.t_end, dt_max, cfg.sample_policy())?;
        let solver = IncompressibleSolver::new(&domain, cfg.mu, plan.dt)?;
        let mut times = Vec::new();
        let mut fields = Vec::new();
        run(&solver, w0, plan.steps, plan.stride, |s| {
            times.push(s.t);
            fields.push(s.w.clone());
            Ok(())
        })?;
        Ok(Reference {
            dt: plan.dt,
            times,
            fields,
        })
    }

    /// Linear interpolation in time.
    pub fn at(&self, t: f64) -> HarnessResult<VectorField> {
        let ts = &self.times;
        let last = ts.len() - 1;
        let tol = 1e-9 * (1.0 + ts[last].abs());
        if t < ts[0] - tol || t > ts[last] + tol {
            return Err(HarnessError::Integrity(format!("time {t} outside the reference run")));
        }
        let k = ts.partition_point(|&s| s <= t);
        if k == 0 {
            return Ok(self.fields[0].clone());
        }
        if k > last || (t - ts[k - 1]).abs() <= 1e-12 * (1.0 + t.abs()) {
            return Ok(self.fields[k - 1].clone());
        }
        let w = (t - ts[k - 1]) / (ts[k] - ts[k - 1]);
        let mut out = self.fields[k - 1].scale(1.0 - w);
        out.axpy(w, &self.fields[k]);
        Ok(out)
    }
}

enum Limit<'a> {
    Lockstep {
        solver: IncompressibleSolver,
        state: IncompressibleState,
    },
    Shared(&'a Reference),
}

impl Limit<'_> {
    fn at(&mut self, t: f64) -> HarnessResult<VectorField> {
        match self {
            Limit::Lockstep { solver, state } => {
                while state.t < t - 1e-12 * (1.0 + t.abs()) {
                    *state = solver.step(state)?;
                }
                Ok(state.w.clone())
            }
            Limit::Shared(r) => r.at(t),
        }
    }
}

struct Recorder {
    ps: Vec<f64>,
    eps: f64,
    series: StateSeries,
    w: TrajectorySeries,
    diff: TrajectorySeries,
    means: Vec<Vec<f64>>,
    min_density: f64,
    last_w: Option<VectorField>,
}

fn comps(u: &VectorField) -> Vec<&SpectralField> {
    u.comps().iter().collect()
}

impl Recorder {
    fn observe(&mut self, s: &CompressibleState, limit: &mut Limit) -> HarnessResult<()> {
        let w = limit.at(s.t)?;
        self.series.record(s.t, &s.a, &s.u, &self.ps)?;
        self.w.push_sample(s.t, &sample_entries(&comps(&w), &self.ps))?;
        let diff = &helmholtz_p(&s.u) - &w;
        self.diff.push_sample(s.t, &sample_entries(&comps(&diff), &self.ps))?;
        let mut row = vec![s.t, s.a.mean()];
        row.extend(s.u.mean());
        for c in s.u.comps() {
            let cross: f64 = s.a.coeffs().iter().zip(c.coeffs()).map(|(x, y)| (x * y.conj()).re).sum();
            row.push(c.mean() + self.eps * cross);
        }
        self.means.push(row);
        self.min_density = self.min_density.min(s.min_density(self.eps));
        self.last_w = Some(w);
        Ok(())
    }
}

/// Runs the compressible system from `(a0, u0)` and writes the run directory.
/// `reference` supplies `w`; without it the limit system is stepped in
/// lockstep with the same step size.
pub fn run_member(
    cfg: &Config,
    a0: &SpectralField,
    u0: &VectorField,
    reference: Option<&Reference>,
    dir: &Path,
) -> HarnessResult<RunReport> {
    let started = now();
    let domain = a0.domain().clone();
    let params = cfg.params()?;
    let init = CompressibleState::new(a0.clone(), u0.clone())?;
    let dt_max = cfg.dt.unwrap_or_else(|| params.default_dt(&init));
    let plan = if cfg.t_end == 0.0 {
        StepPlan {
            dt: dt_max,
            steps: 0,
            stride: 1,
        }
    } else {
        StepPlan::new(cfg.t_end, dt_max, cfg.sample_policy())?
    };
    let solver = CompressibleSolver::new(&domain, params, plan.dt)?;
    let (mut limit, reference_dt) = match reference {
        Some(r) => (Limit::Shared(r), r.dt),
        None => (
            Limit::Lockstep {
                solver: IncompressibleSolver::new(&domain, cfg.mu, plan.dt)?,
                state: IncompressibleState::new(u0.clone()),
            },
            plan.dt,
        ),
    };
    let mut rec = Recorder {
        ps: recorded_ps(cfg.q),
        eps: cfg.eps,
        series: StateSeries::new(),
        w: TrajectorySeries::new(),
        diff: TrajectorySeries::new(),
        means: Vec::new(),
        min_density: f64::INFINITY,
        last_w: None,
    };
    let mut last = init.clone();
    let mut failure: Option<HarnessError> = None;
    let outcome = run(&solver, init, plan.steps, plan.stride, |s| {
        last = s.clone();
        rec.observe(s, &mut limit).map_err(|e| match e {
            HarnessError::Core(c) => c,
            other => {
                let msg = other.to_string();
                failure = Some(other);
                machlimit_core::Error::InvalidArgument(msg)
            }
        })
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let status = match &outcome {
        Ok(_) => RunStatus::Completed,
        Err(e) => RunStatus::Rejected(e.to_string()),
    };
    let info = RunInfo {
        eps: cfg.eps,
        dt: plan.dt,
        steps: plan.steps,
        stride: plan.stride,
        reference_dt,
        status,
        min_density: rec.min_density,
    };
    write_run_dir(dir, cfg, a0, u0, &last, &rec, &info)?;
    let report = analyze_run_files(dir)?;
    write_manifest(dir, cfg, started)?;
    match outcome {
        Ok(_) => Ok(report),
        Err(e) => Err(e.into()),
    }
}

fn create(path: &Path) -> HarnessResult<BufWriter<File>> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

fn write_fields(path: &Path, fields: &[&SpectralField]) -> HarnessResult<()> {
    let mut w = create(path)?;
    write_snapshot(&mut w, fields)?;
    w.flush()?;
    Ok(())
}

fn write_series(path: &Path, s: &TrajectorySeries) -> HarnessResult<()> {
    let mut w = create(path)?;
    s.write_csv(&mut w)?;
    w.flush()?;
    Ok(())
}

pub fn write_initial(path: &Path, a0: &SpectralField, u0: &VectorField) -> HarnessResult<()> {
    let mut f = vec![a0];
    f.extend(u0.comps());
    write_fields(path, &f)
}

fn write_run_dir(
    dir: &Path,
    cfg: &Config,
    a0: &SpectralField,
    u0: &VectorField,
    last: &CompressibleState,
    rec: &Recorder,
    info: &RunInfo,
) -> HarnessResult<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(CONFIG_FILE), cfg.to_toml())?;
    std::fs::write(dir.join(RUN_FILE), serde_json::to_string_pretty(info)?)?;
    let series = [&rec.series.a, &rec.series.qu, &rec.series.pu, &rec.series.u, &rec.w, &rec.diff];
    for (name, s) in SERIES.iter().zip(series) {
        write_series(&dir.join("series").join(format!("{name}.csv")), s)?;
    }
    let mut w = create(&dir.join("series/means.csv"))?;
    let d = cfg.d;
    let mut header = vec!["t".to_string(), "mean_a".to_string()];
    header.extend((0..d).map(|i| format!("mean_u{i}")));
    header.extend((0..d).map(|i| format!("momentum{i}")));
    writeln!(w, "{}", header.join(","))?;
    for row in &rec.means {
        let cols: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
        writeln!(w, "{}", cols.join(","))?;
    }
    w.flush()?;
    write_initial(&dir.join("snapshots/initial.mlsf"), a0, u0)?;
    let mut fin = vec![&last.a];
    fin.extend(last.u.comps());
    write_fields(&dir.join("snapshots/final.mlsf"), &fin)?;
    if let Some(wf) = &rec.last_w {
        write_fields(&dir.join("snapshots/reference_final.mlsf"), &comps(wf))?;
    }
    Ok(())
}

fn read_series(dir: &Path, name: &str) -> HarnessResult<TrajectorySeries> {
    let f = File::open(dir.join("series").join(format!("{name}.csv")))?;
    Ok(TrajectorySeries::read_csv(BufReader::new(f))?)
}

/// `(a, u)` from a snapshot holding `a` followed by the velocity components.
pub fn read_state(path: &Path, domain: &Arc<Domain>) -> HarnessResult<(SpectralField, VectorField)> {
    let mut fields = read_fields(BufReader::new(File::open(path)?), domain)?;
    if fields.len() != domain.d() + 1 {
        return Err(HarnessError::Integrity(format!(
            "{} holds {} fields, expected {}",
            path.display(),
            fields.len(),
            domain.d() + 1
        )));
    }
    let u = fields.split_off(1);
    Ok((fields.remove(0), VectorField::from_components(u)?))
}

fn read_means(path: &Path) -> HarnessResult<Vec<Vec<f64>>> {
    let text = std::fs::read_to_string(path)?;
    text.lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            l.split(',')
                .map(|c| {
                    c.trim()
                        .parse::<f64>()
                        .map_err(|e| HarnessError::Integrity(format!("means.csv: {e}")))
                })
                .collect()
        })
        .collect()
}

fn max_drift(rows: &[Vec<f64>], cols: std::ops::Range<usize>) -> f64 {
    let Some(first) = rows.first() else {
        return 0.0;
    };
    rows.iter()
        .flat_map(|r| cols.clone().map(move |c| (r[c] - first[c]).abs()))
        .fold(0.0, f64::max)
}

/// Rebuilds the report of a run directory from its files and writes
/// `report.json`.
pub fn analyze_run_files(dir: &Path) -> HarnessResult<RunReport> {
    let cfg = Config::load(&dir.join(CONFIG_FILE))?;
    let info: RunInfo = serde_json::from_str(&std::fs::read_to_string(dir.join(RUN_FILE))?)?;
    let domain = Domain::new(cfg.grid()?)?;
    let (a0, u0) = read_state(&dir.join("snapshots/initial.mlsf"), &domain)?;
    let s = StateSeries {
        a: read_series(dir, "a")?,
        qu: read_series(dir, "qu")?,
        pu: read_series(dir, "pu")?,
        u: read_series(dir, "u")?,
    };
    let w = read_series(dir, "w")?;
    let diff = read_series(dir, "diff")?;
    let exps = cfg.exponents();
    let times = s.times().to_vec();
    let t_final = times.last().copied().unwrap_or(0.0);
    let norms = if times.len() < 2 {
        None
    } else {
        let n = norm_report(&a0, &u0, &s, &w, &diff, &exps, Interval::new(0.0, t_final));
        if cfg.override_admissibility {
            n.ok()
        } else {
            Some(n?)
        }
    };
    let means = read_means(&dir.join("series/means.csv"))?;
    let d = cfg.d;
    let linear_deviation = if cfg.nonlinear {
        None
    } else {
        let (a, u) = read_state(&dir.join("snapshots/final.mlsf"), &domain)?;
        let (ea, eu) = linear_propagate(&a0, &u0, t_final, cfg.eps, &cfg.lame()?)?;
        Some(a.max_coeff_diff(&ea).max(u.max_coeff_diff(&eu)))
    };
    let report = RunReport {
        eps: cfg.eps,
        t_final,
        samples: times.len(),
        status: info.status.clone(),
        verdict: validate_exponents(&exps),
        data_norm_q: data_norm_d(&a0, &u0, &exps, cfg.q).ok(),
        data_norm_2: data_norm_d(&a0, &u0, &exps, 2.0).ok(),
        y_le_a: norms.as_ref().map(|n| n.y_high + n.y_low + n.y_p <= n.a),
        norms,
        mean_a_drift: max_drift(&means, 1..2),
        mean_u_drift: max_drift(&means, 2..2 + d),
        momentum_drift: max_drift(&means, 2 + d..2 + 2 * d),
        linear_deviation,
        min_density: info.min_density,
    };
    std::fs::write(dir.join(REPORT_FILE), serde_json::to_string_pretty(&report)?)?;
    Ok(report)
}

/// Checks the configuration and its exponents before anything runs.
pub fn preflight(cfg: &Config) -> HarnessResult<Verdict> {
    cfg.check()?;
    let verdict = validate_exponents(&cfg.exponents());
    if !verdict.admissible && !cfg.override_admissibility {
        let names: Vec<String> = verdict.violations().map(|c| c.name.clone()).collect();
        return Err(HarnessError::Inadmissible(names.join("; ")));
    }
    Ok(verdict)
}

/// Generates the initial data, runs the compressible and incompressible
/// systems and writes a self-contained run directory to `out`.
pub fn run_experiment(cfg: &Config, out: &Path) -> HarnessResult<RunReport> {
    preflight(cfg)?;
    let domain = Domain::new(cfg.grid()?)?;
    let (a0, u0) = gen_initial_data(&cfg.init, &domain, cfg.seed)?;
    run_member(cfg, &a0, &u0, None, out)
}
