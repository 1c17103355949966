use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rabi-var"))
        .args(args)
        .env("RABI_VAR_THREADS", "2")
        .output()
        .expect("spawn rabi-var")
}

fn solve_json(args: &[&str]) -> Value {
    let mut full = vec!["solve"];
    full.extend_from_slice(args);
    let out = run(&full);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn energy(v: &Value) -> f64 {
    v["energy"].as_f64().unwrap()
}

#[test]
fn uncoupled_energy_for_every_method() {
    let expected = -0.5 * 0.3f64.hypot(0.7);
    for method in ["variational", "fixed-point", "grwa", "exact"] {
        let v = solve_json(&[
            "--Omega",
            "0.7",
            "--epsilon",
            "0.3",
            "--g",
            "0",
            "--method",
            method,
        ]);
        assert!((energy(&v) - expected).abs() < 1e-10, "{method}: {v}");
        assert_eq!(v["method"], method);
    }
}

#[test]
fn variational_beats_grwa() {
    let point = [
        "--omega",
        "1",
        "--Omega",
        "5",
        "--epsilon",
        "0.1",
        "--g",
        "0.2",
    ];
    let var = solve_json(&[&point[..], &["--method", "variational"]].concat());
    let grwa = solve_json(&[&point[..], &["--method", "grwa"]].concat());
    assert!(energy(&var) < energy(&grwa));
    assert_eq!(grwa["lambda"].as_f64(), Some(0.2));
}

#[test]
fn report_fields() {
    let v = solve_json(&["--Omega", "5", "--epsilon", "0.1", "--g", "0.2"]);
    assert_eq!(v["method"], "variational");
    assert_eq!(v["params"]["Omega"].as_f64(), Some(5.0));
    assert_eq!(v["params"]["omega"].as_f64(), Some(1.0));
    assert!(v["gradient_residual"].as_f64().unwrap() <= 1e-10);
    let lambda = v["lambda"].as_f64().unwrap();
    assert_eq!(
        v["observables"]["mean_photon"].as_f64(),
        Some(lambda * lambda)
    );
    assert_eq!(v["regime"]["case"], "II");
    assert!(v["regime"]["advisory"]
        .as_str()
        .unwrap()
        .contains("small coupling"));
}

#[test]
fn exact_closed_form() {
    let v = solve_json(&[
        "--method",
        "exact",
        "--Omega",
        "0",
        "--epsilon",
        "0",
        "--g",
        "0.4",
    ]);
    assert!((energy(&v) + 0.16).abs() < 1e-10);
    assert!((v["observables"]["mean_photon"].as_f64().unwrap() - 0.16).abs() < 1e-8);
    assert!(v.get("lambda").is_none());
    assert!(v.get("gradient_residual").is_none());
    assert!(v["n_used"].as_u64().unwrap() >= 32);
}

#[test]
fn output_is_reproducible() {
    let args = [
        "solve",
        "--Omega",
        "1",
        "--epsilon",
        "0.5",
        "--g",
        "0.5",
        "--method",
        "exact",
    ];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["solve", "--omega", "0"][..],
        &["solve", "--Omega", "-1"],
        &["solve", "--method", "newton"],
        &["solve", "--tol", "0"],
        &["solve", "--n-max", "2"],
        &["solve", "--bogus"],
        &["figure", "fig9z"],
        &["sweep", "--range-start", "1", "--range-stop", "0"],
        &["sweep", "--points", "1"],
        &["sweep", "--method", "exact", "--outputs", "lambda"],
        &["sweep", "--axis", "omega"],
        &["validate", "--preset", "slow"],
        &["solve", "--config", "/nonexistent/config.json"],
    ] {
        let out = run(args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn numerical_failure_exits_1_with_diagnostic() {
    let out = run(&[
        "solve", "--method", "exact", "--Omega", "1", "--g", "2", "--n-max", "8",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let diag: Value = serde_json::from_slice(&out.stderr).expect("JSON diagnostic");
    assert_eq!(diag["error"], "exact_not_converged");
    assert_eq!(diag["n_max"].as_u64(), Some(8));
    assert!(diag["convergence_history"].is_array());

    let out = run(&[
        "sweep",
        "--method",
        "exact",
        "--Omega",
        "1",
        "--points",
        "5",
        "--n-max",
        "8",
        "--range-stop",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let diag: Value = serde_json::from_slice(&out.stderr).expect("JSON diagnostic");
    assert_eq!(diag["error"], "sweep_row");
    assert_eq!(diag["axis"], "g");
    assert!(diag["row"].as_u64().is_some());
}

#[test]
fn unwritable_output_names_the_path() {
    let out = run(&["sweep", "--points", "2", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent-dir/x.csv"));
}

#[test]
fn config_file_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"Omega": 5, "epsilon": 0.1, "g": 0.2, "method": "grwa"}"#,
    )
    .unwrap();
    let cfg = cfg.to_str().unwrap();

    let from_file = solve_json(&["--config", cfg]);
    assert_eq!(from_file["method"], "grwa");
    assert_eq!(from_file["params"]["Omega"].as_f64(), Some(5.0));

    let overridden = solve_json(&["--config", cfg, "--g", "0.3", "--method", "fixed-point"]);
    assert_eq!(overridden["method"], "fixed-point");
    assert_eq!(overridden["params"]["g"].as_f64(), Some(0.3));
    assert_eq!(overridden["params"]["epsilon"].as_f64(), Some(0.1));

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"coupling": 0.2}"#).unwrap();
    assert_eq!(
        run(&["solve", "--config", bad.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn figure_csv_header_and_endpoint() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig1a.csv");
    let out = run(&[
        "figure",
        "fig1a",
        "--points",
        "11",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("# fig1a: epsilon=0.1, Omega=0.5, omega=1")
    );
    assert!(lines.next().unwrap().starts_with("# "));
    assert_eq!(
        lines.next(),
        Some("g,variational.energy,grwa.energy,exact.energy,regime")
    );
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    let expected = -0.5 * (0.01f64 + 0.25).sqrt();
    for cell in &first[1..4] {
        assert!((cell.parse::<f64>().unwrap() - expected).abs() < 1e-12);
    }
    assert_eq!(text.lines().count(), 3 + 11);
}

#[test]
fn every_figure_has_its_caption() {
    for (id, caption) in [
        ("fig1d", "g=0.2, Omega=5"),
        ("fig2e", "g=0.2, Omega=0.1"),
        ("fig3c", "epsilon=0.1, g=0.2"),
        ("fig4b", "epsilon=2, Omega=2"),
    ] {
        let out = run(&["figure", id, "--points", "2"]);
        assert_eq!(out.status.code(), Some(0), "{id}");
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(
            text.starts_with(&format!("# {id}: {caption}, omega=1\n")),
            "{text}"
        );
    }
}

#[test]
fn validate_quick_passes() {
    let out = run(&["validate"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert_eq!(text.matches("[PASS]").count(), 10);
    assert!(text.contains("result: PASS (10/10 checks)"));
}
