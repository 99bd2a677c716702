use serde::Serialize;
use std::path::Path;

use crate::error::HarnessResult;
use crate::experiment::{analyze_run_files, RunReport, RUN_FILE};
use crate::manifest::{verify_manifest, MANIFEST};
use crate::sweep::{analyze_sweep_files, SweepReport, SWEEP_FILE};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Analysis {
    Run(Box<RunReport>),
    Sweep(Box<SweepReport>),
}

/// Verifies the manifest of `dir` and rebuilds its reports from the files
/// alone. Rebuilt reports overwrite the stored ones byte for byte.
pub fn analyze(dir: &Path) -> HarnessResult<Analysis> {
    verify_manifest(dir)?;
    if dir.join(SWEEP_FILE).is_file() {
        for entry in std::fs::read_dir(dir)? {
            let sub = entry?.path();
            if sub.join(MANIFEST).is_file() {
                verify_manifest(&sub)?;
            }
        }
        Ok(Analysis::Sweep(Box::new(analyze_sweep_files(dir)?)))
    } else if dir.join(RUN_FILE).is_file() {
        Ok(Analysis::Run(Box::new(analyze_run_files(dir)?)))
    } else {
        Err(crate::error::HarnessError::Integrity(format!(
            "{} is neither a run nor a sweep directory",
            dir.display()
        )))
    }
}
