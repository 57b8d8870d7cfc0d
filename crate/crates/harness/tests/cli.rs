use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn artin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_artin")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn bundled(name: &str) -> String {
    fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(format!("{name}.toml"))).unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("scenario.toml");
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn bundled_modular_scenario_passes() {
    let out = tempfile::tempdir().unwrap();
    let o = artin(&["verify", "g0_2_modular", "--out-dir", out.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let summary = fs::read_to_string(out.path().join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 4);
    assert!(summary.lines().skip(1).all(|l| l.split(',').nth(2) == Some("pass")));
    for check in ["omega-check", "zeta-compare", "eisenstein-check"] {
        let report: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(out.path().join(format!("g0_2_modular.{check}.json"))).unwrap()).unwrap();
        assert_eq!(report["status"], "pass");
        assert!(report["artifact_version"].is_string());
    }
    assert!(out.path().join("timings.csv").exists());
}

#[test]
fn empty_check_list_writes_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let text = bundled("g0_2_modular").replace(
        r#"checks = ["omega-check", "zeta-compare", "eisenstein-check"]"#,
        "checks = []",
    );
    let cfg = write_config(dir.path(), &text);
    let out = dir.path().join("out");
    let o = artin(&["verify", &cfg, "--out-dir", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let summary = fs::read_to_string(out.join("summary.csv")).unwrap();
    assert_eq!(summary, "scenario,check,status,residual,tolerance,terms,wall_ms\n");
}

#[test]
fn impossible_tolerance_fails_and_names_the_check() {
    let dir = tempfile::tempdir().unwrap();
    let text = bundled("g0_2_modular").replace("bound = 40", "bound = 40\ntolerance = 1e-30");
    let cfg = write_config(dir.path(), &text);
    let out = dir.path().join("out");
    let o = artin(&["eisenstein-check", "--config", &cfg, "--out-dir", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("eisenstein-check fail"), "{}", stdout(&o));
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let text = bundled("g0_2_modular").replace(r#"level = "2""#, r#"level = "0""#);
    let cfg = write_config(dir.path(), &text);
    let o = artin(&["verify", &cfg, "--out-dir", dir.path().join("out").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("configuration error"));

    let o = artin(&["verify", "no_such_scenario"]);
    assert_eq!(o.status.code(), Some(2));

    let text = bundled("g0_2_modular").replace("[zeta]", "[zeta]\nunknown_key = 1");
    let cfg = write_config(dir.path(), &text);
    let o = artin(&["verify", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown_key"));
}

#[test]
fn omega_on_bianchi_is_an_error_outcome() {
    let out = tempfile::tempdir().unwrap();
    let o = artin(&["omega-check", "--config", "g0_1pi_bianchi", "--out-dir", out.path().to_str().unwrap()]);
    // the scenario is valid; the check itself reports an error status
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("omega-check error"));
}

#[test]
fn enumerate_dumps_cusps() {
    let out = tempfile::tempdir().unwrap();
    let o = artin(&["enumerate", "--config", "g0_2_modular", "--out-dir", out.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["index"], 3);
    assert_eq!(v["cusps"].as_array().unwrap().len(), 2);
}

#[test]
fn scenarios_are_listed() {
    let o = artin(&["scenarios"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "g0_9_cubic"));
}
