use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::Path;

use machlimit_core::diagnostics::{convergence_rate_fit, validate_exponents, RateFit};
use machlimit_core::lp_spectral::{Domain, TrajectorySeries};
use machlimit_core::solvers::sample_entries;

use crate::config::Config;
use crate::error::{HarnessError, HarnessResult};
use crate::experiment::{
    analyze_run_files, preflight, recorded_ps, run_member, write_initial, Reference, RunStatus, CONFIG_FILE,
    RUN_FILE,
};
use crate::initial::gen_initial_data;
use crate::manifest::{now, write_manifest};

pub const SWEEP_FILE: &str = "sweep.json";
pub const REPORT_MD: &str = "report.md";
const FAILURE_FILE: &str = "failure.txt";

/// A base configuration evaluated at several Mach numbers from one datum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPlan {
    pub base: Config,
    pub eps_list: Vec<f64>,
}

impl SweepPlan {
    pub fn from_config(cfg: &Config) -> Self {
        SweepPlan {
            base: cfg.clone(),
            eps_list: cfg.eps_list.clone(),
        }
    }

    pub fn validate(&self) -> HarnessResult<()> {
        if self.eps_list.len() < 3 {
            return Err(HarnessError::Config(format!(
                "a sweep needs at least 3 values in eps_list, got {}",
                self.eps_list.len()
            )));
        }
        if self.eps_list.windows(2).any(|w| !(w[0] > w[1])) {
            return Err(HarnessError::Config("eps_list must be strictly decreasing".into()));
        }
        if self.base.t_end > 0.0 && self.base.sample_dt.is_none() {
            return Err(HarnessError::Config("a sweep needs sample_dt so members share sample times".into()));
        }
        for &eps in &self.eps_list {
            preflight(&self.base.with_eps(eps))?;
        }
        Ok(())
    }
}

pub fn member_dir(eps: f64) -> String {
    format!("eps_{eps}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberRow {
    pub eps: f64,
    pub dir: String,
    /// `None` when the member finished and produced norms.
    pub failure: Option<String>,
    pub rate_norm: Option<f64>,
    pub critical_norm: Option<f64>,
    pub y_le_a: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub eps_list: Vec<f64>,
    pub members: Vec<MemberRow>,
    /// Some member failed; fits use the rest.
    pub partial: bool,
    /// Both norms strictly decrease with `eps` over the finished members.
    pub rate_decreasing: bool,
    pub critical_decreasing: bool,
    pub rate_fit: Option<RateFit>,
    pub critical_fit: Option<RateFit>,
    /// `1/r`.
    pub target_slope: f64,
}

/// Runs every member of `plan` against one shared incompressible reference
/// and writes the sweep directory.
pub fn run_sweep(plan: &SweepPlan, out: &Path) -> HarnessResult<SweepReport> {
    let started = now();
    plan.validate()?;
    let mut base = plan.base.clone();
    base.eps_list = plan.eps_list.clone();
    let domain = Domain::new(base.grid()?)?;
    let (a0, u0) = gen_initial_data(&base.init, &domain, base.seed)?;
    std::fs::create_dir_all(out)?;
    std::fs::write(out.join(CONFIG_FILE), base.to_toml())?;
    write_initial(&out.join("initial.mlsf"), &a0, &u0)?;

    let reference = Reference::compute(&base, &u0)?;
    let ps = recorded_ps(base.q);
    let mut w = TrajectorySeries::new();
    for (t, f) in reference.times.iter().zip(&reference.fields) {
        w.push_sample(*t, &sample_entries(&f.comps().iter().collect::<Vec<_>>(), &ps))?;
    }
    let rdir = out.join("reference");
    std::fs::create_dir_all(&rdir)?;
    let mut buf = Vec::new();
    w.write_csv(&mut buf)?;
    std::fs::write(rdir.join("w.csv"), buf)?;

    plan.eps_list.par_iter().try_for_each(|&eps| -> HarnessResult<()> {
        let cfg = base.with_eps(eps);
        let dir = out.join(member_dir(eps));
        if let Err(e) = run_member(&cfg, &a0, &u0, Some(&reference), &dir) {
            if !dir.join(RUN_FILE).is_file() {
                std::fs::create_dir_all(&dir)?;
                std::fs::write(dir.join(FAILURE_FILE), e.to_string())?;
            }
        }
        Ok(())
    })?;

    let report = analyze_sweep_files(out)?;
    write_manifest(out, &base, started)?;
    Ok(report)
}

fn strictly_decreasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] < w[0])
}

/// Rebuilds every member report and the sweep summary from the files under
/// `out`, then writes `sweep.json`, the rate fits and `report.md`.
pub fn analyze_sweep_files(out: &Path) -> HarnessResult<SweepReport> {
    let base = Config::load(&out.join(CONFIG_FILE))?;
    let mut members = Vec::new();
    for &eps in &base.eps_list {
        let name = member_dir(eps);
        let dir = out.join(&name);
        let mut row = MemberRow {
            eps,
            dir: name,
            failure: None,
            rate_norm: None,
            critical_norm: None,
            y_le_a: None,
        };
        if dir.join(RUN_FILE).is_file() {
            let rep = analyze_run_files(&dir)?;
            if let RunStatus::Rejected(why) = &rep.status {
                row.failure = Some(why.clone());
            }
            if let Some(n) = &rep.norms {
                row.rate_norm = Some(n.limit_lhs_rate_norm);
                row.critical_norm = Some(n.limit_lhs_critical_norm);
            }
            row.y_le_a = rep.y_le_a;
        } else if dir.join(FAILURE_FILE).is_file() {
            row.failure = Some(std::fs::read_to_string(dir.join(FAILURE_FILE))?);
        } else {
            row.failure = Some("no output".into());
        }
        if row.failure.is_none() && row.rate_norm.is_none() {
            row.failure = Some("fewer than two samples".into());
        }
        members.push(row);
    }
    let done: Vec<&MemberRow> = members.iter().filter(|m| m.failure.is_none()).collect();
    let rate: Vec<(f64, f64)> = done.iter().map(|m| (m.eps, m.rate_norm.unwrap())).collect();
    let critical: Vec<(f64, f64)> = done.iter().map(|m| (m.eps, m.critical_norm.unwrap())).collect();
    let fit = |pts: &[(f64, f64)]| convergence_rate_fit(pts).ok();
    let report = SweepReport {
        eps_list: base.eps_list.clone(),
        partial: done.len() < members.len(),
        rate_decreasing: strictly_decreasing(&rate.iter().map(|p| p.1).collect::<Vec<_>>()),
        critical_decreasing: strictly_decreasing(&critical.iter().map(|p| p.1).collect::<Vec<_>>()),
        rate_fit: fit(&rate),
        critical_fit: fit(&critical),
        target_slope: 1.0 / base.r,
        members,
    };
    std::fs::write(out.join(SWEEP_FILE), serde_json::to_string_pretty(&report)?)?;
    for (name, f) in [("rate", &report.rate_fit), ("critical", &report.critical_fit)] {
        if let Some(f) = f {
            std::fs::write(out.join(format!("rate_fit_{name}.json")), serde_json::to_string_pretty(f)?)?;
            let mut buf = Vec::new();
            f.write_csv(&mut buf)?;
            std::fs::write(out.join(format!("rate_fit_{name}.csv")), buf)?;
        }
    }
    std::fs::write(out.join(REPORT_MD), markdown(&base, &report))?;
    Ok(report)
}

fn markdown(base: &Config, rep: &SweepReport) -> String {
    let verdict = validate_exponents(&base.exponents());
    let mut s = String::new();
    let _ = writeln!(s, "# Low Mach number sweep\n");
    let _ = writeln!(
        s,
        "d = {}, n = {}, L = {}, (q, r) = ({}, {}), alpha = {}, beta0 = {}, mu = {}, lambda = {}, t_end = {}, seed = {}\n",
        base.d, base.n, base.box_length, base.q, base.r, base.alpha, base.beta0, base.mu, base.lambda, base.t_end, base.seed
    );
    let _ = writeln!(s, "Exponents admissible: {}\n", if verdict.admissible { "yes" } else { "no" });
    let _ = writeln!(s, "| eps | rate norm | critical norm | Y <= A | status |");
    let _ = writeln!(s, "|---|---|---|---|---|");
    let fmt = |v: Option<f64>| v.map(|x| format!("{x:.6e}")).unwrap_or_else(|| "-".into());
    for m in &rep.members {
        let _ = writeln!(
            s,
            "| {} | {} | {} | {} | {} |",
            m.eps,
            fmt(m.rate_norm),
            fmt(m.critical_norm),
            m.y_le_a.map(|b| if b { "yes" } else { "no" }).unwrap_or("-"),
            m.failure.as_deref().map(|f| format!("failed: {}", f.replace('|', "/"))).unwrap_or_else(|| "ok".into()),
        );
    }
    let _ = writeln!(s);
    for (name, f) in [("rate", &rep.rate_fit), ("critical", &rep.critical_fit)] {
        match f {
            Some(f) => {
                let _ = writeln!(
                    s,
                    "Fitted slope of the {name} norm: {:.4} (R^2 = {:.4}, reference 1/r = {:.4})",
                    f.slope, f.r_squared, rep.target_slope
                );
            }
            None => {
                let _ = writeln!(s, "Fitted slope of the {name} norm: not available");
            }
        }
    }
    let yn = |b: bool| if b { "yes" } else { "no" };
    let _ = writeln!(
        s,
        "\nRate norm strictly decreasing in eps: {}\nCritical norm strictly decreasing in eps: {}",
        yn(rep.rate_decreasing),
        yn(rep.critical_decreasing)
    );
    if rep.partial {
        let _ = writeln!(s, "\nPartial sweep: at least one member failed.");
    }
    let _ = writeln!(
        s,
        "\nOn the periodic box acoustic waves do not disperse, so the fitted slope describes this datum \
         and grid only. It is compared with 1/r as a lower bound on the observed decay, not as an exact rate."
    );
    s
}
