use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_rabs-sim");

fn default_config() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/default.json")
}

fn sim(args: &[&str]) -> Command {
    let mut c = Command::new(BIN);
    c.args(args).env_remove("RABS_SIM_OUT");
    c
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("binary runs")
}

fn write_config(dir: &Path, json: &str) -> PathBuf {
    let p = dir.join("cfg.json");
    fs::write(&p, json).unwrap();
    p
}

#[test]
fn shipped_config_equals_built_in_defaults() {
    let text = fs::read_to_string(default_config()).unwrap();
    let cfg = rabs_core::harness::ExperimentConfig::from_json(&text).unwrap();
    assert_eq!(cfg, rabs_core::harness::ExperimentConfig::default());
}

#[test]
fn energy_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = default_config();
    let out = run(&mut sim(&[
        "energy",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
        "--emit-gnuplot",
    ]));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("hovering x1 (gripper 0 W): 4128.0 Wh, 41 recharges"), "{stdout}");
    for f in ["energy.csv", "energy_summary.csv", "energy.gp"] {
        assert!(dir.path().join(f).is_file(), "{f}");
    }
}

#[test]
fn coverage_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = default_config();
    let mut outputs = Vec::new();
    for name in ["a", "b"] {
        let out_dir = dir.path().join(name);
        let out = run(&mut sim(&[
            "coverage",
            "--config",
            cfg.to_str().unwrap(),
            "--trials",
            "3",
            "--seed",
            "11",
            "--out",
            out_dir.to_str().unwrap(),
        ]));
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        outputs.push((
            fs::read(out_dir.join("coverage.csv")).unwrap(),
            fs::read(out_dir.join("coverage_summary.csv")).unwrap(),
        ));
    }
    assert_eq!(outputs[0], outputs[1]);
    let text = String::from_utf8(outputs[0].0.clone()).unwrap();
    assert_eq!(text.lines().count(), 1 + 3 * 23);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",11")));
}

#[test]
fn traffic_reports_ratio() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"traffic": {"epochs": 4, "pairs": [[1, 2]]}}"#);
    let out = run(&mut sim(&[
        "traffic",
        "--config",
        cfg.to_str().unwrap(),
        "--trials",
        "2",
        "--out",
        dir.path().join("out").to_str().unwrap(),
    ]));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("RABS(1) / micro(2) cumulative traffic ratio"), "{stdout}");
    let rows = fs::read_to_string(dir.path().join("out/traffic.csv")).unwrap();
    assert_eq!(rows.lines().count(), 1 + 2 * 2 * 4);
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let out_arg = out_dir.to_str().unwrap();
    let typo = write_config(dir.path(), r#"{"trails": 5}"#);
    let out = run(&mut sim(&["coverage", "--config", typo.to_str().unwrap(), "--out", out_arg]));
    assert_eq!(out.status.code(), Some(2));
    assert!(!out_dir.exists());

    let missing = dir.path().join("nope.json");
    let out = run(&mut sim(&["energy", "--config", missing.to_str().unwrap(), "--out", out_arg]));
    assert_eq!(out.status.code(), Some(2));

    let cfg = default_config();
    let out = run(&mut sim(&["energy", "--config", cfg.to_str().unwrap(), "--trials", "0", "--out", out_arg]));
    assert_eq!(out.status.code(), Some(2));

    let out = run(&mut sim(&["energy", "--out", out_arg]));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn infeasible_laser_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"platform": {"laser_tx_w": 300}}"#);
    for sub in ["coverage", "energy"] {
        let out = run(&mut sim(&[
            sub,
            "--config",
            cfg.to_str().unwrap(),
            "--trials",
            "1",
            "--out",
            dir.path().join("out").to_str().unwrap(),
        ]));
        assert_eq!(out.status.code(), Some(3), "{sub}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("laser"));
    }
}

#[test]
fn output_dir_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let from_cfg = dir.path().join("from_cfg");
    let from_env = dir.path().join("from_env");
    let from_flag = dir.path().join("from_flag");
    let cfg = write_config(
        dir.path(),
        &format!(r#"{{"output_dir": {}}}"#, serde_json::to_string(&from_cfg).unwrap()),
    );
    let cfg = cfg.to_str().unwrap();

    assert!(run(&mut sim(&["energy", "--config", cfg])).status.success());
    assert!(from_cfg.join("energy.csv").is_file());

    let mut c = sim(&["energy", "--config", cfg]);
    c.env("RABS_SIM_OUT", &from_env);
    assert!(run(&mut c).status.success());
    assert!(from_env.join("energy.csv").is_file());

    let mut c = sim(&["energy", "--config", cfg, "--out", from_flag.to_str().unwrap()]);
    c.env("RABS_SIM_OUT", &from_env);
    fs::remove_dir_all(&from_env).unwrap();
    assert!(run(&mut c).status.success());
    assert!(from_flag.join("energy.csv").is_file());
    assert!(!from_env.exists());
}
