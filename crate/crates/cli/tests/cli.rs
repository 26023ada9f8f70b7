use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const K39: &str = r#"{
  "species": {"mass_kg": 15e-26, "xi1": 1.0},
  "trap": [
    {"n": 1, "harmonic": {"frequency": 10, "unit": "rad/s"}},
    {"n": 1, "harmonic": {"frequency": 10, "unit": "rad/s"}},
    {"n": 1, "harmonic": {"frequency": 20, "unit": "rad/s"}}
  ],
  "n_total": 1e6
}"#;

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_deformed-bec"))
        .args(args)
        .output()
        .unwrap()
}

fn json(cmd: &str, config: &Path) -> Value {
    let out = run(&[cmd, "--config", config.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn with(base: &str, extra: &str) -> String {
    let trimmed = base.trim_end().trim_end_matches('}');
    format!("{trimmed}, {extra}}}")
}

#[test]
fn tc_reports_microkelvin_scale_shift() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", K39);
    let v = json("tc", &cfg);
    let shift = v["result"]["rel_shift"].as_f64().unwrap();
    assert!((shift.log10() + 6.0).abs() <= 1.0);
    assert_eq!(v["inputs"]["gamma"].as_f64(), Some(3.0));
    assert_eq!(v["result"]["method"], "implicit");
}

#[test]
fn undeformed_shift_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", &K39.replace("\"xi1\": 1.0", "\"xi1\": 0.0"));
    let v = json("tc", &cfg);
    assert_eq!(v["result"]["rel_shift"].as_f64(), Some(0.0));
    assert_eq!(v["result"]["tc_K"], v["result"]["t0_K"]);
}

#[test]
fn box_reports_gamma_three_halves() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"{"species": {"mass_kg": 15e-26, "xi1": 1.0},
                   "trap": [{"n": 3, "box": {"volume": 1e-12}}], "n_total": 1e6}"#;
    let v = json("tc", &write(dir.path(), "b.json", text));
    assert_eq!(v["inputs"]["gamma"].as_f64(), Some(1.5));
    assert_eq!(v["inputs"]["sub1_s"], "inf");
    assert_eq!(v["result"]["method"], "box-limit");
    assert!(v["result"]["rel_shift"].as_f64().unwrap() > 0.0);
}

#[test]
fn hertz_is_converted_and_echoed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", &K39.replace("rad/s", "Hz"));
    let v = json("bound", &cfg);
    let omega = v["inputs"]["sub3_omega_rad_s"].as_f64().unwrap();
    assert!((omega - 40.0 * std::f64::consts::PI).abs() < 1e-9);
    let bound = v["result"]["xi1_bound"].as_f64().unwrap();
    assert!((bound.log10() - 4.0).abs() <= 1.0);
}

#[test]
fn output_is_deterministic_and_written_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        &with(
            K39,
            r#""scan": {"axis": "N", "start": 1e4, "stop": 1e16, "points": 13, "log": true}"#,
        ),
    );
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for target in [&a, &b] {
        let out = run(&[
            "scan",
            "--config",
            cfg.to_str().unwrap(),
            "--format",
            "csv",
            "--output",
            target.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let text = String::from_utf8(ta).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let n_col = header.iter().position(|&h| h == "n_total").unwrap();
    let ns: Vec<f64> = lines
        .map(|l| l.split(',').nth(n_col).unwrap().parse().unwrap())
        .collect();
    assert_eq!(ns.len(), 13);
    assert!(ns.windows(2).all(|w| w[1] > w[0]), "rows out of order");
    assert!(header.contains(&"t0_K") && header.contains(&"xi1_bound"));
}

#[test]
fn scan_n_slope_and_s1_exponents() {
    let dir = tempfile::tempdir().unwrap();
    let spherical = r#"{"species": {"mass_kg": 15e-26, "xi1": 1.0},
        "trap": [{"n": 3, "harmonic": {"frequency": 50, "unit": "Hz"}}], "n_total": 1e6,
        "scan": {"axis": "s1", "start": 1, "stop": 6, "points": 6}}"#;
    let v = json("scan", &write(dir.path(), "s.json", spherical));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    assert_eq!(rows[2]["sub1_s"].as_f64(), Some(3.0));
    assert_eq!(rows[5]["gamma"].as_f64(), Some(2.0));
}

#[test]
fn fluct_flags_anomaly_and_regularizes() {
    let dir = tempfile::tempdir().unwrap();
    // s = 3 in every Cartesian direction gives gamma = 5/2.
    let text = K39.replace("\"unit\": \"rad/s\"}", "\"unit\": \"rad/s\"}, \"s\": 3");
    let cfg = write(dir.path(), "f.json", &with(&text, r#""temperature_K": 1e-10"#));
    let v = json("fluct", &cfg);
    assert_eq!(v["inputs"]["gamma"].as_f64(), Some(2.5));
    assert_eq!(v["result"]["regime"], "below");
    assert_eq!(v["result"]["anomaly"], "anomalous");
    assert_eq!(v["result"]["regularized"], true);
    assert!(v["result"]["variance"].as_f64().unwrap().is_finite());
    assert!(v["result"]["compressibility_Pa-1"].as_f64().unwrap() > 0.0);

    let harmonic = write(dir.path(), "h.json", &with(K39, r#""temperature_K": 1e-10"#));
    let h = json("fluct", &harmonic);
    assert_eq!(h["result"]["anomaly"], "normal");
    assert_eq!(h["result"]["regularized"], false);
}

#[test]
fn density_profile_decays() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "d.json",
        &with(K39, r#""temperature_K": 2e-8, "density": {"points": 11, "t_max": 6}"#),
    );
    let v = json("density", &cfg);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 11);
    let d: Vec<f64> = rows.iter().map(|r| r["density_m3"].as_f64().unwrap()).collect();
    assert!(d.windows(2).all(|w| w[1] < w[0]));
    assert!(d[10] < 1e-10 * d[0]);
}

#[test]
fn oracle_check_agrees() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"{"species": {"mass_kg": 15e-26, "xi1": 2e4},
        "trap": [{"n": 3, "harmonic": {"frequency": 50, "unit": "Hz"}}], "n_total": 1e4,
        "quadrature": {"rel_tol": 1e-8}}"#;
    let v = json("oracle-check", &write(dir.path(), "o.json", text));
    assert!(v["result"]["t0_rel_gap"].as_f64().unwrap() < 1e-4);
    assert_eq!(v["result"]["sign_consistent"], true);
    let first = v["result"]["rel_shift_first_order"].as_f64().unwrap();
    let gap = v["result"]["shift_discrepancy"].as_f64().unwrap();
    assert!(gap.abs() < 0.05 * first);
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        K39.replace("\"n_total\"", "\"mystery\": 1, \"n_total\""),
        K39.replace("rad/s", "rpm"),
        K39.replace("15e-26", "-15e-26"),
        K39.replace("{\"n\": 1, \"harmonic\"", "{\"n\": 2, \"harmonic\""),
        "not json".to_owned(),
    ];
    for (i, text) in cases.iter().enumerate() {
        let cfg = write(dir.path(), &format!("bad{i}.json"), text);
        let out = run(&["tc", "--config", cfg.to_str().unwrap()]);
        assert_eq!(
            out.status.code(),
            Some(2),
            "case {i}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let missing = run(&["tc", "--config", "/nonexistent/config.json"]);
    assert_eq!(missing.status.code(), Some(2));
    let no_temperature = write(dir.path(), "t.json", K39);
    assert_eq!(
        run(&["fluct", "--config", no_temperature.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["tc"]).status.code(), Some(2));
}

#[test]
fn numerical_failures_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    // Below T_c there is no fugacity solving the non-condensed number equation.
    let cfg = write(dir.path(), "n.json", &with(K39, r#""temperature_K": 1e-10"#));
    let out = run(&["density", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    // A deformation too strong for the first-order condensation condition.
    let strong = write(dir.path(), "s.json", &K39.replace("\"xi1\": 1.0", "\"xi1\": 1e15"));
    assert_eq!(
        run(&["tc", "--config", strong.to_str().unwrap()]).status.code(),
        Some(3)
    );
}
