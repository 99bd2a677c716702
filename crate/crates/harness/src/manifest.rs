use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use crate::config::Config;
use crate::error::{HarnessError, HarnessResult};

pub const MANIFEST: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileEntry {
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

/// Everything needed to audit a run or sweep directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config: Config,
    pub version: String,
    pub seed: u64,
    /// Seconds since the Unix epoch.
    pub started: f64,
    pub finished: f64,
    pub files: Vec<FileEntry>,
}

pub fn now() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}

pub fn sha256_file(path: &Path) -> HarnessResult<(u64, String)> {
    let bytes = std::fs::read(path)?;
    Ok((bytes.len() as u64, hex::encode(Sha256::digest(&bytes))))
}

/// Relative paths of every regular file under `root`, sorted.
fn walk(root: &Path, rel: &Path, out: &mut Vec<PathBuf>) -> HarnessResult<()> {
    let mut entries: Vec<_> = std::fs::read_dir(root.join(rel))?.collect::<Result<_, _>>()?;
    entries.sort_by_key(|e| e.file_name());
    for e in entries {
        let p = rel.join(e.file_name());
        if e.file_type()?.is_dir() {
            walk(root, &p, out)?;
        } else {
            out.push(p);
        }
    }
    Ok(())
}

/// Checksums every file below `dir` except manifests, which carry wall
/// times; nested manifests are verified on their own.
pub fn inventory(dir: &Path) -> HarnessResult<Vec<FileEntry>> {
    let mut paths = Vec::new();
    walk(dir, Path::new(""), &mut paths)?;
    paths
        .into_iter()
        .filter(|p| p.file_name() != Some(std::ffi::OsStr::new(MANIFEST)))
        .map(|p| {
            let (bytes, sha256) = sha256_file(&dir.join(&p))?;
            Ok(FileEntry {
                path: p.to_string_lossy().replace('\\', "/"),
                bytes,
                sha256,
            })
        })
        .collect()
}

pub fn write_manifest(dir: &Path, config: &Config, started: f64) -> HarnessResult<RunManifest> {
    let m = RunManifest {
        config: config.clone(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed: config.seed,
        started,
        finished: now(),
        files: inventory(dir)?,
    };
    std::fs::write(dir.join(MANIFEST), serde_json::to_string_pretty(&m)?)?;
    Ok(m)
}

pub fn read_manifest(dir: &Path) -> HarnessResult<RunManifest> {
    let text = std::fs::read_to_string(dir.join(MANIFEST))?;
    Ok(serde_json::from_str(&text)?)
}

/// Every listed file exists with the recorded checksum.
pub fn verify_manifest(dir: &Path) -> HarnessResult<RunManifest> {
    let m = read_manifest(dir)?;
    for f in &m.files {
        let path = dir.join(&f.path);
        if !path.is_file() {
            return Err(HarnessError::Integrity(format!("{} is missing", f.path)));
        }
        let (bytes, sha) = sha256_file(&path)?;
        if bytes != f.bytes || sha != f.sha256 {
            return Err(HarnessError::Integrity(format!("{} does not match its checksum", f.path)));
        }
    }
    Ok(m)
}
