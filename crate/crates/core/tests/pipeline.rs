use vanish_core::problem::spec::fixtures::p1;
use vanish_core::report::{read_profile, report_json, write_profile};
use vanish_core::{run, Command, RunConfig, Verdict};

fn lambda_ref() -> f64 {
    let out = run(&RunConfig::from_spec(p1(1.0)), &Command::Thresholds);
    out.report.thresholds.unwrap().standard.lambda_star
}

#[test]
fn p1_above_reference_threshold_solves_original() {
    let cfg = RunConfig::from_spec(p1(2.0 * lambda_ref()));
    let out = run(&cfg, &Command::Solve);
    assert!(out.success(&Command::Solve), "{:?}", out.report.failure);
    let certs = out.report.certificates.as_ref().unwrap();
    assert_eq!(certs.verdict, Verdict::SolvesOriginal);
    let rows = out.profile.as_ref().unwrap();
    assert_eq!(rows.len(), cfg.grid.nodes + 1);
    for row in rows.iter().filter(|r| r.r >= cfg.spec.radius) {
        assert!(row.decay_bound.unwrap() >= row.u.abs());
    }
    assert!(rows.iter().filter(|r| r.r < cfg.spec.radius).all(|r| r.decay_bound.is_none()));
}

#[test]
fn small_lambda_is_report_only() {
    let cfg = RunConfig::from_spec(p1(lambda_ref() / 100.0));
    let out = run(&cfg, &Command::Solve);
    assert!(out.report.failure.is_none());
    let solve = out.report.solve.as_ref().unwrap();
    let certs = out.report.certificates.as_ref().unwrap();
    assert_eq!(
        out.success(&Command::Solve),
        solve.converged && certs.all_pass()
    );
}

#[test]
fn supercritical_p_aborts_at_hypotheses() {
    let mut spec = p1(10.0);
    spec.p = 7.0;
    let out = run(&RunConfig::from_spec(spec), &Command::Solve);
    let failure = out.report.failure.as_ref().unwrap();
    assert_eq!(failure.stage, "hypotheses");
    assert!(out.report.hypotheses.is_some());
    assert!(out.report.solve.is_none());
    assert!(!out.success(&Command::Solve));
}

#[test]
fn reruns_are_byte_identical() {
    let cfg = RunConfig::from_spec(p1(50.0));
    let render = || {
        let out = run(&cfg, &Command::Solve);
        let json = serde_json::to_string_pretty(&report_json(&out.report, false).unwrap()).unwrap();
        let mut csv = Vec::new();
        write_profile(&mut csv, out.profile.as_ref().unwrap()).unwrap();
        (json, csv)
    };
    assert_eq!(render(), render());
}

#[test]
fn report_has_required_sections_and_sources() {
    let out = run(&RunConfig::from_spec(p1(50.0)), &Command::Solve);
    let json = report_json(&out.report, true).unwrap();
    for key in ["hypotheses", "solve", "certificates", "thresholds", "provenance", "timings"] {
        assert!(json.get(key).is_some_and(|v| !v.is_null()), "missing {key}");
    }
    fn every_number_sourced(v: &serde_json::Value) -> bool {
        match v {
            serde_json::Value::Number(_) => false,
            serde_json::Value::Array(a) => a.iter().all(every_number_sourced),
            serde_json::Value::Object(m) => {
                if m.contains_key("value") && m.contains_key("source") && m.len() == 2 {
                    m["source"].as_str().is_some_and(|s| !s.is_empty())
                } else {
                    m.values().all(every_number_sourced)
                }
            }
            _ => true,
        }
    }
    assert!(every_number_sourced(&json));
    assert_eq!(json["provenance"]["seed"]["value"], serde_json::json!(42));
}

#[test]
fn certify_round_trips_the_emitted_profile() {
    let cfg = RunConfig::from_spec(p1(50.0));
    let solved = run(&cfg, &Command::Solve);
    let mut csv = Vec::new();
    write_profile(&mut csv, solved.profile.as_ref().unwrap()).unwrap();
    let (r, u) = read_profile(csv.as_slice()).unwrap();
    let certified = run(&cfg, &Command::Certify { r, u });
    let a = &solved.report.certificates.as_ref().unwrap().checks;
    let b = &certified.report.certificates.as_ref().unwrap().checks;
    for (x, y) in a.iter().zip(b) {
        assert_eq!(x.name, y.name);
        assert_eq!(x.pass, y.pass);
        assert_eq!(x.margin.to_bits(), y.margin.to_bits(), "{}", x.name);
    }
}

#[test]
fn zero_profile_certifies_with_zero_rows() {
    let cfg = RunConfig::from_spec(p1(50.0));
    let n = cfg.grid.nodes + 1;
    let r: Vec<f64> = (0..n).map(|i| cfg.grid.r_max * i as f64 / cfg.grid.nodes as f64).collect();
    let out = run(&cfg, &Command::Certify { r, u: vec![0.0; n] });
    assert!(out.report.failure.is_none(), "{:?}", out.report.failure);
    assert!(out.profile.unwrap().iter().all(|row| row.u == 0.0));
}
