//! Machine-readable verdicts and report schemas shared by the library,
//! the verification suites and the command line.

use serde::Serialize;

use crate::spectral::kernel::{CohomologyPrediction, KernelReport, SpectrumScan};

pub const SCHEMA_VERSION: u32 = 1;

/// One verified claim: `pass` iff `measured <= tolerance`.
#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub id: String,
    /// plain-language statement of the verified claim
    pub anchor: String,
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Verdict {
    pub fn new(id: &str, anchor: &str, measured: f64, tolerance: f64) -> Self {
        Verdict {
            id: id.to_string(),
            anchor: anchor.to_string(),
            measured,
            tolerance,
            pass: measured <= tolerance,
        }
    }

    /// An exact check: `defects` failures, passing only at zero.
    pub fn exact(id: &str, anchor: &str, defects: usize) -> Self {
        Verdict::new(id, anchor, defects as f64, 0.0)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub schema: u32,
    pub seed: u64,
    pub ell: f64,
    pub kmax: i32,
    pub n_t: usize,
    pub verdicts: Vec<Verdict>,
    pub passed: bool,
}

impl VerifyReport {
    pub fn new(seed: u64, ell: f64, kmax: i32, n_t: usize, verdicts: Vec<Verdict>) -> Self {
        let passed = verdicts.iter().all(|v| v.pass);
        VerifyReport {
            schema: SCHEMA_VERSION,
            seed,
            ell,
            kmax,
            n_t,
            verdicts,
            passed,
        }
    }

    pub fn failing_ids(&self) -> Vec<&str> {
        self.verdicts
            .iter()
            .filter(|v| !v.pass)
            .map(|v| v.id.as_str())
            .collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ModeEigenvalues {
    /// semicolon-joined in the CSV; a plain array here
    pub k: Vec<i32>,
    pub eigenvalues: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReportJson {
    pub schema: u32,
    pub ell: f64,
    pub kmax: i32,
    pub n_t: usize,
    pub kernel_dim: usize,
    pub kernel_threshold: f64,
    pub max_eigenvalue: f64,
    pub count_positive: usize,
    pub count_zero: usize,
    pub count_negative: usize,
    pub cutoff: f64,
    pub theta_eig_rel_error: f64,
    pub per_mode: Vec<ModeEigenvalues>,
    pub verdicts: Vec<Verdict>,
}

/// Flatten a scan into the JSON schema, reporting the `top` largest
/// eigenvalues per mode (with multiplicity expanded).
pub fn spectrum_report(scan: &SpectrumScan, top: usize, verdicts: Vec<Verdict>) -> SpectrumReportJson {
    let modes = crate::spectral::kernel::modes_in_ball(scan.kmax);
    let per_mode = modes
        .iter()
        .map(|k| {
            let ksq: i64 = k.iter().map(|&ki| (ki * ki) as i64).sum();
            let spec = &scan.classes[&ksq];
            let mut eigenvalues = Vec::with_capacity(top);
            'outer: for (l, m) in &spec.eigs {
                for _ in 0..*m {
                    if eigenvalues.len() >= top {
                        break 'outer;
                    }
                    eigenvalues.push(*l);
                }
            }
            ModeEigenvalues {
                k: k.clone(),
                eigenvalues,
            }
        })
        .collect();
    SpectrumReportJson {
        schema: SCHEMA_VERSION,
        ell: scan.ell,
        kmax: scan.kmax,
        n_t: scan.n_t,
        kernel_dim: scan.count_zero,
        kernel_threshold: scan.kernel_threshold,
        max_eigenvalue: scan.max_eigenvalue,
        count_positive: scan.count_positive,
        count_zero: scan.count_zero,
        count_negative: scan.count_negative,
        cutoff: scan.cutoff,
        theta_eig_rel_error: scan.theta_eig_rel_error,
        per_mode,
        verdicts,
    }
}

/// Eigenvalue table rows: `mode_k;...,eig_index,eigenvalue`.
pub fn spectrum_csv(report: &SpectrumReportJson) -> String {
    let mut out = String::from("mode_k,eig_index,eigenvalue\n");
    for entry in &report.per_mode {
        let key: Vec<String> = entry.k.iter().map(|x| x.to_string()).collect();
        for (i, l) in entry.eigenvalues.iter().enumerate() {
            out.push_str(&format!("{},{},{}\n", key.join(";"), i, l));
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct KernelReportJson {
    pub schema: u32,
    pub ell: f64,
    pub kmax: i32,
    pub n_t: usize,
    pub kernel_dim: usize,
    pub kernel_dim_doubled_grid: usize,
    pub theta_block_contributes: bool,
    pub max_codiff_residual: f64,
    pub basis: Vec<crate::spectral::kernel::KernelVector>,
    pub prediction: CohomologyPrediction,
    pub consistent: bool,
}

pub fn kernel_report_json(report: &KernelReport, prediction: CohomologyPrediction) -> KernelReportJson {
    let consistent = report.dim == prediction.dim_h_phi + prediction.relative_h2_dim
        && report.dim == report.dim_doubled_grid;
    KernelReportJson {
        schema: SCHEMA_VERSION,
        ell: report.ell,
        kmax: report.kmax,
        n_t: report.n_t,
        kernel_dim: report.dim,
        kernel_dim_doubled_grid: report.dim_doubled_grid,
        theta_block_contributes: report.theta_block_contributes,
        max_codiff_residual: report.max_codiff_residual,
        basis: report.vectors.clone(),
        prediction,
        consistent,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeReportJson {
    pub schema: u32,
    pub ell: f64,
    pub grids: Vec<usize>,
    /// per grid size: per-mode maxima of the Hessian Rayleigh quotient
    pub per_grid: Vec<Vec<(Vec<i32>, f64)>>,
    pub overall_max: f64,
    pub trial_matrix_route: f64,
    pub trial_quadrature_route: f64,
    /// evidence only; the sign of the quotient is not asserted
    pub note: String,
}
