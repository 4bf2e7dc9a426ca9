use std::path::Path;
use std::process::{Command, Output};

use nematic_core::lab::{DtRule, ElRunConfig, QsRunConfig, Recipe, SweepConfig};
use nematic_core::PeriodicGrid;

fn limitlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_limitlab")).args(args).env_remove("LIMITLAB_THREADS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_config<T: serde::Serialize>(dir: &Path, name: &str, cfg: &T) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(cfg).unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

fn small_qs() -> QsRunConfig {
    let mut cfg = QsRunConfig::demo();
    cfg.grid = PeriodicGrid::square(16).unwrap();
    cfg.solver.t_end = 0.02;
    cfg.solver.snapshot_every = 5;
    cfg
}

fn small_sweep() -> SweepConfig {
    SweepConfig {
        epsilons: vec![0.2, 0.1, 0.05],
        grid: PeriodicGrid::square(16).unwrap(),
        dt: DtRule::Fixed(2e-3),
        t_end: 0.02,
        output_every: 5,
        snapshot_every: 5,
        ..SweepConfig::smooth_default()
    }
}

#[test]
fn check_coeffs_prints_the_demo_table() {
    let o = limitlab(&["check-coeffs", "--preset", "paper-demo"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("QS dissipativity: PASS"), "{s}");
    for line in ["alpha1  = 2.25", "alpha2  = -3", "alpha3  = 6", "gamma1  = 9", "I       = 0.45"] {
        assert!(s.contains(line), "missing {line} in {s}");
    }
}

#[test]
fn check_coeffs_reports_a_failing_certificate_with_exit_1() {
    let d = tempfile::tempdir().unwrap();
    let mut p = nematic_core::MaterialParams::demo(0.1);
    p.viscosity.beta7 = 0.01;
    let path = write_config(d.path(), "params.json", &p);
    let o = limitlab(&["check-coeffs", "--config", &path]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("QS dissipativity: FAIL"));
}

#[test]
fn identity_suite_passes_and_writes_json() {
    let d = tempfile::tempdir().unwrap();
    let o = limitlab(&["identity-suite", "--out", d.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.path().join("identity.json")).unwrap()).unwrap();
    assert!(v.as_array().unwrap().iter().all(|c| c["passed"].as_bool().unwrap()));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(limitlab(&[]).status.code(), Some(2));
    assert_eq!(limitlab(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(limitlab(&["sweep", "--bogus"]).status.code(), Some(2));
    assert_eq!(limitlab(&["check-coeffs", "--preset", "nope"]).status.code(), Some(2));
    assert_eq!(limitlab(&["simulate-qs", "--config", "/nonexistent.json"]).status.code(), Some(2));
    let d = tempfile::tempdir().unwrap();
    let path = d.path().join("bad.json");
    std::fs::write(&path, r#"{"solver": {}, "typo": 1}"#).unwrap();
    assert_eq!(limitlab(&["simulate-qs", "--config", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn threads_fall_back_to_the_environment() {
    let run = |env: &str| {
        Command::new(env!("CARGO_BIN_EXE_limitlab"))
            .args(["check-coeffs", "--preset", "paper-demo"])
            .env("LIMITLAB_THREADS", env)
            .output()
            .unwrap()
    };
    assert_eq!(run("0").status.code(), Some(2));
    assert_eq!(run("two").status.code(), Some(2));
    assert_eq!(run("2").status.code(), Some(0));
}

#[test]
fn simulate_qs_writes_outputs_that_validate() {
    let d = tempfile::tempdir().unwrap();
    let cfg = write_config(d.path(), "qs.json", &small_qs());
    let out = d.path().join("run");
    let o = limitlab(&["simulate-qs", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    for f in ["summary.json", "series.csv", "step_000000.qsf", "step_000010.qsf", "step_000010.qsf.meta"] {
        assert!(out.join(f).exists(), "missing {f}");
    }
    let header = std::fs::read_to_string(out.join("series.csv")).unwrap();
    assert!(header.starts_with("t,e_kin,e_inertial,f_eps,e_total,r_mid,residual,max_q,div_v_norm"));
    let o = limitlab(&["validate-energy", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("3 snapshots"));
}

#[test]
fn simulate_el_with_preset_validates() {
    let d = tempfile::tempdir().unwrap();
    let cfg =
        ElRunConfig { grid: PeriodicGrid::square(16).unwrap(), t_end: 0.02, snapshot_every: 5, ..ElRunConfig::demo() };
    let cfg = write_config(d.path(), "el.json", &cfg);
    let out = d.path().join("el");
    let o = limitlab(&["simulate-el", "--config", &cfg, "--preset", "paper-demo", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(limitlab(&["validate-energy", out.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn sweep_refuses_a_failing_certificate_unless_forced() {
    let d = tempfile::tempdir().unwrap();
    let mut cfg = small_sweep();
    cfg.recipe = Recipe::Equilibrium { director: [1.0, 0.0, 0.0] };
    cfg.params.viscosity.beta7 = 0.01;
    let path = write_config(d.path(), "sweep.json", &cfg);
    assert_eq!(limitlab(&["sweep", "--config", &path]).status.code(), Some(2));
    let out = d.path().join("forced");
    let o = limitlab(&["sweep", "--config", &path, "--force", "--out", out.to_str().unwrap()]);
    assert!(out.join("report.json").exists(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn sweep_outputs_are_byte_identical_across_runs_and_validate() {
    let d = tempfile::tempdir().unwrap();
    let path = write_config(d.path(), "sweep.json", &small_sweep());
    let a = d.path().join("a");
    let b = d.path().join("b");
    let o = limitlab(&["sweep", "--config", &path, "--threads", "1", "--out", a.to_str().unwrap()]);
    assert!(o.status.code().is_some(), "{}", stdout(&o));
    limitlab(&["sweep", "--config", &path, "--threads", "3", "--out", b.to_str().unwrap()]);
    for f in ["report.json", "series.csv", "el/series.csv", "qs_eps_0.1/series.csv", "qs_eps_0.05/step_000010.qsf"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f} differs");
    }
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(a.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["config"]["epsilons"].as_array().unwrap().len(), 3);
    assert!(report["qs_certificate"]["passed"].as_bool().unwrap());
    assert!(report["fitted_order_q"]["order"].is_number());
    let o = limitlab(&["validate-energy", a.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("12 snapshots"), "{}", stdout(&o));
}

#[test]
fn seed_flag_changes_random_initial_data() {
    let d = tempfile::tempdir().unwrap();
    let mut cfg = small_qs();
    cfg.recipe = Recipe::Random { amplitude: 0.2, flow: 0.05, max_mode: 2 };
    cfg.solver.snapshot_every = 0;
    let path = write_config(d.path(), "qs.json", &cfg);
    let run = |seed: &str, name: &str| {
        let out = d.path().join(name);
        let o = limitlab(&["simulate-qs", "--config", &path, "--seed", seed, "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        std::fs::read(out.join("series.csv")).unwrap()
    };
    let a = run("1", "a");
    assert_eq!(a, run("1", "b"));
    assert_ne!(a, run("2", "c"));
}
