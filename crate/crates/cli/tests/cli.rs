use std::path::PathBuf;
use std::process::{Command, Output};

fn scenario(name: &str) -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "..", "..", "scenarios", &format!("{name}.toml")]
        .iter()
        .collect()
}

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptz-coverage"))
        .args(args)
        .env_remove("PTZ_COVERAGE_OUT")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn run_writes_all_artefacts() {
    let dir = tempfile::tempdir().unwrap();
    let s = scenario("case1");
    let out = cli(&["run", s.to_str().unwrap(), "--out", dir.path().to_str().unwrap(), "--steps", "4"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["trajectories.csv", "objective.csv", "partition_0.json", "partition_4.json", "summary.json"] {
        assert!(dir.path().join(f).is_file(), "missing {f}");
    }
    let traj = std::fs::read_to_string(dir.path().join("trajectories.csv")).unwrap();
    assert_eq!(traj.lines().count(), 1 + 5 * 3);
}

#[test]
fn out_flag_beats_the_environment() {
    let (flag, env) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let s = scenario("case1");
    let out = Command::new(env!("CARGO_BIN_EXE_ptz-coverage"))
        .args(["run", s.to_str().unwrap(), "--steps", "1", "--out", flag.path().to_str().unwrap()])
        .env("PTZ_COVERAGE_OUT", env.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(flag.path().join("summary.json").is_file());
    assert!(!env.path().join("summary.json").exists());
}

#[test]
fn compare_runs_both_modes() {
    let dir = tempfile::tempdir().unwrap();
    let s = scenario("case2");
    let out = cli(&["compare", s.to_str().unwrap(), "--out", dir.path().to_str().unwrap(), "--steps", "3"]);
    assert!(out.status.success());
    assert!(dir.path().join("ptz/summary.json").is_file());
    assert!(dir.path().join("fixed/summary.json").is_file());
    assert!(stdout(&out).contains("ratio"));
}

#[test]
fn oracle_prints_every_evaluation() {
    let s = scenario("case1");
    let out = cli(&["oracle", s.to_str().unwrap(), "--resolution", "64"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("partition") && text.contains("grid oracle") && text.contains("scanline oracle"));
}

#[test]
fn gradient_check_reports_channels() {
    let s = scenario("case1");
    let out = cli(&["check-gradients", s.to_str().unwrap(), "--samples", "2", "--seed", "5"]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("0 channel(s) outside tolerance"));
}

#[test]
fn invalid_overrides_fail_with_the_field_name() {
    let dir = tempfile::tempdir().unwrap();
    let s = scenario("case1");
    let out = cli(&["run", s.to_str().unwrap(), "--out", dir.path().to_str().unwrap(), "--dt=-1"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("dt"));
    let out = cli(&["run", "/nonexistent.toml", "--out", dir.path().to_str().unwrap()]);
    assert!(!out.status.success());
}
