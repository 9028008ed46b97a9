use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn vanish(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vanish")).args(args).output().expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_writes_identical_outputs_on_rerun() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("p1.toml");
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let o = vanish(&["solve", "--config", path_str(&cfg), "--out", path_str(out)]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for name in ["report.json", "profile.csv"] {
        let x = std::fs::read(a.join(name)).unwrap();
        let y = std::fs::read(b.join(name)).unwrap();
        assert_eq!(x, y, "{name} differs between reruns");
    }
    let csv = std::fs::read_to_string(a.join("profile.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "r,u,V,f_of_u,g_of_u,decay_bound");
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(a.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["certificates"]["verdict"], "solves-original");
    assert!(report["timings"].is_null());
}

#[test]
fn certify_accepts_emitted_profile() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("p1.toml");
    let solved = dir.path().join("solved");
    assert_eq!(vanish(&["solve", "--config", path_str(&cfg), "--out", path_str(&solved)]).status.code(), Some(0));
    let profile = solved.join("profile.csv");
    let o = vanish(&[
        "certify",
        "--config",
        path_str(&cfg),
        "--profile",
        path_str(&profile),
        "--out",
        path_str(&dir.path().join("cert")),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn overrides_and_timings() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("p1.toml");
    let o = vanish(&[
        "solve", "--config", path_str(&cfg), "--out", path_str(dir.path()), "--mesh", "1000", "--rmax", "8", "--seed",
        "7", "--timings",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("report.json")).unwrap()).unwrap();
    let prov = &report["provenance"];
    assert_eq!(prov["grid"]["intervals"]["value"], 1000);
    assert_eq!(prov["grid"]["r_max"]["value"], 8.0);
    assert_eq!(prov["seed"]["value"], 7);
    assert!(report["timings"].as_array().is_some_and(|t| !t.is_empty()));
}

#[test]
fn check_and_thresholds_print_to_stdout() {
    let cfg = configs().join("p1.toml");
    for cmd in ["check", "thresholds"] {
        let o = vanish(&[cmd, "--config", path_str(&cfg)]);
        assert_eq!(o.status.code(), Some(0), "{cmd}: {}", String::from_utf8_lossy(&o.stderr));
        let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert!(report["hypotheses"].is_object());
    }
}

#[test]
fn config_errors_name_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(configs().join("p1.toml")).unwrap().replace("q = 3.0", "q = 3.0\nbogus = 1");
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, text).unwrap();
    let o = vanish(&["check", "--config", path_str(&cfg)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("problem.bogus"));
    let o = vanish(&["check", "--config", path_str(&dir.path().join("missing.toml"))]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn hypothesis_failure_aborts_with_partial_report() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(configs().join("p1.toml"))
        .unwrap()
        .replace("potential = { family = \"power_decay\", amplitude = 6486.0, exponent = 1.0 }", "potential = { family = \"constant\", value = -1.0 }");
    let cfg = dir.path().join("neg.toml");
    std::fs::write(&cfg, text).unwrap();
    let out = dir.path().join("out");
    let o = vanish(&["solve", "--config", path_str(&cfg), "--out", path_str(&out)]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["failure"]["stage"], "hypotheses");
    assert!(report["hypotheses"].is_object());
    assert!(report["solve"]["value"].is_null());
}

#[test]
fn sweep_reports_trend() {
    let o = vanish(&["sweep", "--config", path_str(&configs().join("sweep.toml"))]);
    assert!(matches!(o.status.code(), Some(0 | 1)), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["thresholds"]["sweep"]["trend"], "unbounded-trend");
    assert_eq!(report["sweep_pairs"].as_array().unwrap().len(), 6);
    let no_table = vanish(&["sweep", "--config", path_str(&configs().join("p1.toml"))]);
    assert_eq!(no_table.status.code(), Some(2));
}
