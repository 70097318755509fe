//! End-to-end checks of the command line: exit codes, report files,
//! determinism, and the flag surface.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_g2bvp")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

fn tmpdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("g2bvp-cli-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn algebra_suite_passes_and_writes_report() {
    let out = tmpdir("verify");
    let res = run(&[
        "verify",
        "--suite",
        "algebra",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(res.status.success(), "stderr: {}", String::from_utf8_lossy(&res.stderr));
    let report = read_json(&out.join("verify.json"));
    assert_eq!(report["schema"], 1);
    assert_eq!(report["passed"], true);
    assert!(report["verdicts"].as_array().unwrap().len() >= 8);
}

#[test]
fn tolerance_override_forces_failure() {
    let out = tmpdir("tolfail");
    let res = run(&[
        "verify",
        "--suite",
        "algebra",
        "--tol.first-variation=1e-20",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&res.stderr);
    assert!(stderr.contains("first-variation"), "stderr: {stderr}");
    let report = read_json(&out.join("verify.json"));
    assert_eq!(report["passed"], false);
}

#[test]
fn tol_flag_with_separate_value_argument() {
    let out = tmpdir("tolsep");
    let res = run(&[
        "verify",
        "--suite",
        "algebra",
        "--tol.first-variation",
        "1e-20",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(1));
}

#[test]
fn missing_output_directory_is_usage_error() {
    let res = run(&["verify", "--suite", "algebra", "--out", "/nonexistent-g2bvp-dir"]);
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn invalid_parameters_are_usage_errors() {
    let out = tmpdir("usage");
    for args in [
        vec!["verify", "--length", "-1"],
        vec!["verify", "--grid", "4"],
        vec!["verify", "--modes", "0"],
        vec!["verify", "--suite", "bogus"],
        vec!["verify", "--tol.x=-1"],
    ] {
        let mut full = args.clone();
        full.push("--out");
        full.push(out.to_str().unwrap());
        let res = run(&full);
        assert_eq!(res.status.code(), Some(2), "args {:?}", args);
    }
}

#[test]
fn config_file_with_flag_override() {
    let out = tmpdir("config");
    let cfg_path = out.join("run.json");
    std::fs::write(
        &cfg_path,
        format!(
            "{{\"suite\": \"symbol\", \"seed\": 3, \"out\": \"{}\", \"tol.symbol-table\": 0.5}}",
            out.display()
        ),
    )
    .unwrap();
    let res = run(&["verify", "--config", cfg_path.to_str().unwrap(), "--seed", "5"]);
    assert!(res.status.success(), "stderr: {}", String::from_utf8_lossy(&res.stderr));
    let report = read_json(&out.join("verify.json"));
    // the flag wins over the file
    assert_eq!(report["seed"], 5);
    let verdicts = report["verdicts"].as_array().unwrap();
    assert!(verdicts.iter().any(|v| v["id"] == "symbol-eigenvalues"));
    let overridden = verdicts.iter().find(|v| v["id"] == "symbol-table").unwrap();
    assert_eq!(overridden["tolerance"], 0.5);
}

#[test]
fn symbol_certificate_is_deterministic() {
    let out = tmpdir("symbol");
    for _ in 0..2 {
        let res = run(&[
            "symbol",
            "--samples",
            "8",
            "--seed",
            "11",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(res.status.success());
        let bytes = std::fs::read(out.join("symbol_certificate.json")).unwrap();
        std::fs::write(out.join("first.json"), &bytes).unwrap();
    }
    let a = std::fs::read(out.join("symbol_certificate.json")).unwrap();
    let b = std::fs::read(out.join("first.json")).unwrap();
    assert_eq!(a, b, "reruns must be byte-identical");
    let cert = read_json(&out.join("symbol_certificate.json"));
    assert_eq!(cert["bound_satisfied"], true);
    assert_eq!(cert["entries"].as_array().unwrap().len(), 9);
}

#[test]
fn symbol_zero_samples_is_canonical_only() {
    let out = tmpdir("symbol0");
    let res = run(&["symbol", "--samples", "0", "--out", out.to_str().unwrap()]);
    assert!(res.status.success());
    let cert = read_json(&out.join("symbol_certificate.json"));
    let entries = cert["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 1);
    assert_eq!(entries[0]["xi"][0], "1");
}

#[test]
fn spectrum_reports_kernel_and_is_truncation_stable() {
    let out = tmpdir("spectrum");
    let mut counts = Vec::new();
    for modes in ["1", "2"] {
        let res = run(&[
            "spectrum",
            "--modes",
            modes,
            "--grid",
            "100",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(res.status.success(), "stderr: {}", String::from_utf8_lossy(&res.stderr));
        let report = read_json(&out.join("spectrum.json"));
        assert_eq!(report["kernel_dim"], 6);
        let nonneg = report["count_zero"].as_u64().unwrap() + report["count_positive"].as_u64().unwrap();
        counts.push(nonneg);
        let csv = std::fs::read_to_string(out.join("eigenvalues.csv")).unwrap();
        assert!(csv.starts_with("mode_k,eig_index,eigenvalue\n"));
        assert!(csv.lines().nth(1).unwrap().contains(";"));
    }
    assert_eq!(counts[0], counts[1], "nonnegative count must be stable in the truncation");
}

#[test]
fn kernel_command_is_length_independent() {
    let out = tmpdir("kernel");
    for length in ["1", "4"] {
        let res = run(&[
            "kernel",
            "--modes",
            "1",
            "--grid",
            "60",
            "--length",
            length,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(res.status.success());
        let report = read_json(&out.join("kernel.json"));
        assert_eq!(report["kernel_dim"], 6, "length {length}");
        assert_eq!(report["consistent"], true);
    }
}

#[test]
fn probe_writes_report() {
    let out = tmpdir("probe");
    let res = run(&[
        "probe",
        "--grids",
        "30,50",
        "--grid",
        "100",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(res.status.success(), "stderr: {}", String::from_utf8_lossy(&res.stderr));
    let report = read_json(&out.join("probe.json"));
    assert_eq!(report["grids"], serde_json::json!([30, 50]));
    assert!(report["note"].as_str().unwrap().contains("no sign asserted"));
}
