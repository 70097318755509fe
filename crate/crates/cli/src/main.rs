//! Command-line front end: runs the verification suites and the spectral
//! experiments, writing machine-readable reports.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 usage or
//! configuration error.

mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{parse_backend, preprocess_tol_flags, Backend, RunConfig};
use g2bvp_core::report::{
    kernel_report_json, spectrum_csv, spectrum_report, ProbeReportJson, VerifyReport,
    SCHEMA_VERSION,
};
use g2bvp_core::spectral::kernel::{predict_slab_kernel, scan_spectrum, total_kernel};
use g2bvp_core::spectral::probe::{question2_probe, trial_field_two_routes};
use g2bvp_core::suites;

#[derive(Parser)]
#[command(name = "g2bvp", version, about = "verification suites and slab spectra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonFlags {
    /// flat-key JSON config file; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    /// suite selection: all | algebra | symbol | spectral
    #[arg(long)]
    suite: Option<String>,
    /// slab length
    #[arg(long)]
    length: Option<f64>,
    /// torus truncation radius
    #[arg(long)]
    modes: Option<i32>,
    /// number of collocation points in t
    #[arg(long)]
    grid: Option<usize>,
    /// random seed for every sampled field
    #[arg(long)]
    seed: Option<u64>,
    /// scalar backend filter: exact | float | both
    #[arg(long)]
    backend: Option<String>,
    /// output directory for reports
    #[arg(long)]
    out: Option<PathBuf>,
    /// tolerance override, repeatable: <check-id>=<value>
    /// (also accepted as --tol.<check-id> <value>)
    #[arg(long = "tol", value_name = "ID=VALUE")]
    tol: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// run the verification suites and write a verdict report
    Verify(CommonFlags),
    /// emit the exact ellipticity certificate of the boundary symbol
    Symbol {
        #[command(flatten)]
        common: CommonFlags,
        /// number of random rational unit covectors (0: canonical only)
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// per-mode eigenvalue tables and aggregate spectrum data
    Spectrum(CommonFlags),
    /// kernel of the boundary value problem and its predicted dimensions
    Kernel(CommonFlags),
    /// compact-support Hessian probe (experimental evidence)
    Probe {
        #[command(flatten)]
        common: CommonFlags,
        /// grid sizes to sweep
        #[arg(long, value_delimiter = ',', default_values_t = vec![50usize, 100])]
        grids: Vec<usize>,
    },
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("configuration error: {msg}");
    ExitCode::from(2)
}

fn build_config(flags: &CommonFlags) -> Result<RunConfig, config::ConfigError> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &flags.config {
        cfg.load_file(path)?;
    }
    if let Some(s) = &flags.suite {
        cfg.suite = s.clone();
    }
    if let Some(l) = flags.length {
        cfg.length = l;
    }
    if let Some(m) = flags.modes {
        cfg.modes = m;
    }
    if let Some(g) = flags.grid {
        cfg.grid = g;
    }
    if let Some(s) = flags.seed {
        cfg.seed = s;
    }
    if let Some(b) = &flags.backend {
        cfg.backend = parse_backend(b)?;
    }
    if let Some(o) = &flags.out {
        cfg.out = o.clone();
    }
    for entry in &flags.tol {
        let (id, value) = entry
            .split_once('=')
            .ok_or_else(|| config::ConfigError(format!("tolerance {entry} is not ID=VALUE")))?;
        let v: f64 = value
            .parse()
            .map_err(|_| config::ConfigError(format!("tolerance value in {entry} is not a number")))?;
        cfg.tol.insert(id.to_string(), v);
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Write through a temporary file and rename, so readers never observe a
/// half-written report.
fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)
}

fn cmd_verify(cfg: &RunConfig) -> ExitCode {
    let suite_cfg = cfg.suite_config();
    let mut verdicts = Vec::new();
    let run_exact = cfg.backend != Backend::Float;
    let run_float = cfg.backend != Backend::Exact;
    match cfg.suite.as_str() {
        "algebra" => verdicts.extend(suites::algebra_suite(&suite_cfg)),
        "symbol" => verdicts.extend(suites::symbol_suite(&suite_cfg)),
        "spectral" => verdicts.extend(suites::spectral_suite(&suite_cfg)),
        _ => {
            if run_exact {
                verdicts.extend(suites::algebra_suite(&suite_cfg));
                verdicts.extend(suites::symbol_suite(&suite_cfg));
            }
            if run_float {
                verdicts.extend(suites::spectral_suite(&suite_cfg));
            }
        }
    }
    let report = VerifyReport::new(cfg.seed, cfg.length, cfg.modes, cfg.grid, verdicts);
    for v in &report.verdicts {
        println!(
            "{} {:<28} measured {:>12.4e}  tol {:>9.1e}",
            if v.pass { "pass" } else { "FAIL" },
            v.id,
            v.measured,
            v.tolerance
        );
    }
    let path = cfg.out.join("verify.json");
    let json = serde_json::to_string_pretty(&report).expect("serializable report");
    if let Err(e) = write_atomic(&path, &json) {
        return usage_error(format!("cannot write {}: {e}", path.display()));
    }
    println!("report: {}", path.display());
    if report.passed {
        ExitCode::SUCCESS
    } else {
        eprintln!("failing checks: {}", report.failing_ids().join(", "));
        ExitCode::from(1)
    }
}

fn cmd_symbol(cfg: &RunConfig, samples: usize) -> ExitCode {
    match g2bvp_core::symbol::modulus_bound_certificate(cfg.seed, samples) {
        Ok(cert) => {
            let path = cfg.out.join("symbol_certificate.json");
            let json = serde_json::to_string_pretty(&cert).expect("serializable certificate");
            if let Err(e) = write_atomic(&path, &json) {
                return usage_error(format!("cannot write {}: {e}", path.display()));
            }
            println!(
                "bound_satisfied: {} (max modulus {}, min full-symbol eigenvalue {})",
                cert.bound_satisfied, cert.max_modulus, cert.min_abs_eig
            );
            println!("certificate: {}", path.display());
            if cert.bound_satisfied {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("symbol computation failed: {e}");
            ExitCode::from(1)
        }
    }
}

fn cmd_spectrum(cfg: &RunConfig) -> ExitCode {
    let cutoff = 1e7;
    let scan = match scan_spectrum(cfg.length, cfg.modes, cfg.grid, cutoff) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("eigenvalue scan failed: {e}");
            return ExitCode::from(1);
        }
    };
    let suite_cfg = cfg.suite_config();
    let verdicts = vec![
        g2bvp_core::report::Verdict::new(
            "slab-positive-count",
            "no strictly positive eigenvalue",
            scan.count_positive as f64,
            suite_cfg.tol("slab-positive-count", 0.0),
        ),
        g2bvp_core::report::Verdict::new(
            "slab-kernel-dim",
            "kernel dimension is 6",
            (scan.count_zero as f64 - 6.0).abs(),
            suite_cfg.tol("slab-kernel-dim", 0.0),
        ),
        g2bvp_core::report::Verdict::new(
            "theta-block-eigs",
            "Dirichlet block matches separation of variables",
            scan.theta_eig_rel_error,
            suite_cfg.tol("theta-block-eigs", 1e-3),
        ),
    ];
    let all_pass = verdicts.iter().all(|v| v.pass);
    let report = spectrum_report(&scan, 8, verdicts);
    println!(
        "kernel_dim {}  max_eigenvalue {:.6e}  modes {}",
        report.kernel_dim, report.max_eigenvalue, report.per_mode.len()
    );
    let json_path = cfg.out.join("spectrum.json");
    let json = serde_json::to_string_pretty(&report).expect("serializable report");
    if let Err(e) = write_atomic(&json_path, &json) {
        return usage_error(format!("cannot write {}: {e}", json_path.display()));
    }
    let csv_path = cfg.out.join("eigenvalues.csv");
    if let Err(e) = write_atomic(&csv_path, &spectrum_csv(&report)) {
        return usage_error(format!("cannot write {}: {e}", csv_path.display()));
    }
    println!("reports: {} and {}", json_path.display(), csv_path.display());
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cmd_kernel(cfg: &RunConfig) -> ExitCode {
    let report = match total_kernel(cfg.length, cfg.modes, cfg.grid) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("kernel computation failed: {e}");
            return ExitCode::from(1);
        }
    };
    let prediction = predict_slab_kernel(9, 3, 6);
    let json = kernel_report_json(&report, prediction);
    println!(
        "kernel_dim {} (doubled grid {}), predicted {} + {}; consistent: {}",
        json.kernel_dim,
        json.kernel_dim_doubled_grid,
        json.prediction.dim_h_phi,
        json.prediction.relative_h2_dim,
        json.consistent
    );
    let path = cfg.out.join("kernel.json");
    let text = serde_json::to_string_pretty(&json).expect("serializable report");
    if let Err(e) = write_atomic(&path, &text) {
        return usage_error(format!("cannot write {}: {e}", path.display()));
    }
    println!("report: {}", path.display());
    if json.consistent {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cmd_probe(cfg: &RunConfig, grids: &[usize]) -> ExitCode {
    let modes = vec![vec![1, 0, 0, 0, 0, 0], vec![1, 1, 0, 0, 0, 0], vec![2, 0, 0, 0, 0, 0]];
    let mut per_grid = Vec::new();
    let mut overall = f64::NEG_INFINITY;
    for &n_t in grids {
        match question2_probe(cfg.length, &modes, n_t, cfg.seed) {
            Ok(r) => {
                println!("grid {:>4}: largest quotient {:+.6e}", n_t, r.overall_max);
                overall = overall.max(r.overall_max);
                per_grid.push(r.per_mode.into_iter().map(|(k, v)| (k, v)).collect());
            }
            Err(e) => {
                eprintln!("probe failed at grid {n_t}: {e}");
                return ExitCode::from(1);
            }
        }
    }
    let (matrix_route, quad_route) =
        match trial_field_two_routes(&[1, 0, 0, 0, 0, 0], cfg.length, cfg.grid.max(100), 32) {
            Ok(v) => v,
            Err(e) => {
                eprintln!("trial-field check failed: {e}");
                return ExitCode::from(1);
            }
        };
    let report = ProbeReportJson {
        schema: SCHEMA_VERSION,
        ell: cfg.length,
        grids: grids.to_vec(),
        per_grid,
        overall_max: overall,
        trial_matrix_route: matrix_route,
        trial_quadrature_route: quad_route,
        note: "largest Rayleigh quotient of the compact-support Hessian form; \
               reported as evidence, no sign asserted"
            .into(),
    };
    let path = cfg.out.join("probe.json");
    let text = serde_json::to_string_pretty(&report).expect("serializable report");
    if let Err(e) = write_atomic(&path, &text) {
        return usage_error(format!("cannot write {}: {e}", path.display()));
    }
    println!("report: {}", path.display());
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let args = preprocess_tol_flags(std::env::args().collect());
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // clap's own help/version paths exit 0
            if e.use_stderr() {
                eprintln!("{e}");
                return ExitCode::from(2);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    let (flags, run): (&CommonFlags, Box<dyn FnOnce(&RunConfig) -> ExitCode>) = match &cli.command
    {
        Command::Verify(flags) => (flags, Box::new(cmd_verify)),
        Command::Symbol { common, samples } => {
            let samples = *samples;
            (common, Box::new(move |cfg: &RunConfig| cmd_symbol(cfg, samples)))
        }
        Command::Spectrum(flags) => (flags, Box::new(cmd_spectrum)),
        Command::Kernel(flags) => (flags, Box::new(cmd_kernel)),
        Command::Probe { common, grids } => {
            let grids = grids.clone();
            (common, Box::new(move |cfg: &RunConfig| cmd_probe(cfg, &grids)))
        }
    };
    match build_config(flags) {
        Ok(cfg) => run(&cfg),
        Err(e) => usage_error(e),
    }
}
