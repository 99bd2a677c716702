use clap::{Parser, Subcommand};
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use machlimit_core::diagnostics::validate_exponents;

use crate::analyze::analyze;
use crate::config::Config;
use crate::error::{HarnessError, HarnessResult};
use crate::experiment::run_experiment;
use crate::selftest::selftest;
use crate::sweep::{run_sweep, SweepPlan, REPORT_MD};

#[derive(Debug, Parser)]
#[command(name = "machlimit", version, about = "Low Mach number limit experiments on the periodic box")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the exponents of a configuration.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run one experiment into a fresh directory.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run every Mach number in `eps_list` and fit the convergence rate.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Verify checksums and rebuild the reports of a run or sweep directory.
    Analyze {
        #[arg(long)]
        out: PathBuf,
    },
    /// Projection, paraproduct, acoustic and mass invariants.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Caps the global thread pool at `MACHLIMIT_THREADS` when set.
fn init_threads() {
    if let Some(n) = std::env::var("MACHLIMIT_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn fail(e: &HarnessError) -> i32 {
    eprintln!("error: {e}");
    e.exit_code()
}

fn validate(path: &Path) -> HarnessResult<i32> {
    let cfg = Config::load(path)?;
    cfg.check()?;
    let verdict = validate_exponents(&cfg.exponents());
    if verdict.admissible {
        println!("admissible");
        return Ok(0);
    }
    println!("not admissible");
    for c in verdict.violations() {
        println!("violated: {} (lhs = {}, rhs = {})", c.name, c.lhs, c.rhs);
    }
    Ok(1)
}

fn dispatch(cmd: Command) -> HarnessResult<i32> {
    match cmd {
        Command::Validate { config } => validate(&config),
        Command::Run { config, out } => {
            let cfg = Config::load(&config)?;
            let report = run_experiment(&cfg, &out)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(0)
        }
        Command::Sweep { config, out } => {
            let cfg = Config::load(&config)?;
            let report = run_sweep(&SweepPlan::from_config(&cfg), &out)?;
            print!("{}", std::fs::read_to_string(out.join(REPORT_MD))?);
            Ok(if report.partial { 1 } else { 0 })
        }
        Command::Analyze { out } => {
            let a = analyze(&out)?;
            println!("{}", serde_json::to_string_pretty(&a)?);
            Ok(0)
        }
        Command::Selftest { seed } => {
            let results = selftest(seed)?;
            for r in &results {
                println!(
                    "{}: {}/{} passed (worst {:.3e}, tolerance {:.0e})",
                    r.name, r.passed, r.total, r.worst, r.tol
                );
            }
            Ok(if results.iter().all(|r| r.ok()) { 0 } else { 1 })
        }
    }
}

/// Parses `args` (program name first) and runs the command; returns the
/// process exit status: 0 ok, 1 violation or failure, 2 usage.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    init_threads();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => fail(&e),
    }
}
