use std::path::Path;
use std::process::{Command, Output};

fn machlimit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_machlimit"))
        .args(args)
        .env("MACHLIMIT_THREADS", "1")
        .output()
        .unwrap()
}

fn write_config(dir: &Path, name: &str, d: usize, q: f64, r: f64, extra: &str) -> String {
    let path = dir.join(name);
    std::fs::write(
        &path,
        format!(
            "d = {d}\nn = 16\neps = 0.1\nmu = 0.05\nt_end = 0.05\nsample_dt = 0.05\nq = {q}\nr = {r}\nalpha = 1.0\n{extra}\n[init]\nkind = \"random_band\"\nk_min = 1.0\nk_max = 3.0\namplitude = 0.2\n"
        ),
    )
    .unwrap();
    path.display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn validate_accepts_the_reference_exponents() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "ok.toml", 2, 3.0, 12.0, "");
    let o = machlimit(&["validate", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "admissible");
}

#[test]
fn validate_names_the_violated_inequality() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "bad.toml", 2, 3.0, 6.0, "");
    let o = machlimit(&["validate", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.starts_with("not admissible"));
    assert!(text.lines().any(|l| l.starts_with("violated: ") && l.contains("lhs = ") && l.contains("rhs = ")));
}

#[test]
fn usage_and_config_errors_exit_with_two() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(machlimit(&["validate", "--bogus"]).status.code(), Some(2));
    assert_eq!(machlimit(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(machlimit(&[]).status.code(), Some(2));
    let cfg = write_config(tmp.path(), "typo.toml", 2, 3.0, 12.0, "epsilon = 0.3");
    assert_eq!(machlimit(&["validate", "--config", &cfg]).status.code(), Some(2));
    let missing = tmp.path().join("absent.toml").display().to_string();
    assert_eq!(machlimit(&["run", "--config", &missing, "--out", "x"]).status.code(), Some(2));
}

#[test]
fn run_then_analyze_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "run.toml", 2, 3.0, 12.0, "");
    let out = tmp.path().join("out").display().to_string();
    let o = machlimit(&["run", "--config", &cfg, "--out", &out]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report = std::fs::read(tmp.path().join("out/report.json")).unwrap();
    let a = machlimit(&["analyze", "--out", &out]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(std::fs::read(tmp.path().join("out/report.json")).unwrap(), report);
}

#[test]
fn sweep_prints_its_report() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "sweep.toml", 2, 3.0, 12.0, "eps_list = [0.2, 0.1, 0.05]");
    let out = tmp.path().join("sweep").display().to_string();
    let o = machlimit(&["sweep", "--config", &cfg, "--out", &out]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("| eps |"));
    assert_eq!(machlimit(&["analyze", "--out", &out]).status.code(), Some(0));
}

#[test]
fn inadmissible_run_exits_with_one() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "bad.toml", 2, 3.0, 6.0, "");
    let out = tmp.path().join("out").display().to_string();
    assert_eq!(machlimit(&["run", "--config", &cfg, "--out", &out]).status.code(), Some(1));
}

#[test]
fn selftest_passes() {
    let o = machlimit(&["selftest", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for name in ["projection", "bony", "acoustic", "mass"] {
        assert!(text.contains(&format!("{name}: ")), "{text}");
    }
}
