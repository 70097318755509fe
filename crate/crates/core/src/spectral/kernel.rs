//! Aggregate spectra over all torus frequencies, kernel dimension of the
//! boundary value problem, and the cohomological prediction it must match.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::SpectralError;
use crate::spectral::mode::{assemble_mode, ModeSpectrum};
use crate::spectral::slab::Freq6;

/// All integer frequencies in the closed Euclidean ball of radius `kmax`.
pub fn modes_in_ball(kmax: i32) -> Vec<Freq6> {
    let mut out = Vec::new();
    let r2 = kmax * kmax;
    let mut k = vec![0i32; 6];
    fn rec(k: &mut Vec<i32>, axis: usize, remaining: i32, out: &mut Vec<Freq6>) {
        if axis == 6 {
            out.push(k.clone());
            return;
        }
        let bound = (remaining as f64).sqrt() as i32;
        for v in -bound..=bound {
            if v * v <= remaining {
                k[axis] = v;
                rec(k, axis + 1, remaining - v * v, out);
            }
        }
        k[axis] = 0;
    }
    rec(&mut k, 0, r2, &mut out);
    out.sort();
    out
}

/// Scan of the spectrum over all modes up to the truncation radius.
#[derive(Debug, Clone)]
pub struct SpectrumScan {
    pub ell: f64,
    pub kmax: i32,
    pub n_t: usize,
    /// one representative spectrum per distinct `|k|^2`
    pub classes: BTreeMap<i64, ModeSpectrum>,
    pub mode_count: usize,
    pub kernel_threshold: f64,
    pub max_eigenvalue: f64,
    pub count_positive: usize,
    pub count_zero: usize,
    /// negatives with eigenvalue at least `-cutoff`
    pub count_negative: usize,
    pub cutoff: f64,
    /// worst relative error of the three lowest Dirichlet-block
    /// eigenvalues against `-(|k|^2 + (m pi / L)^2)`, over all classes
    pub theta_eig_rel_error: f64,
}

pub fn scan_spectrum(
    ell: f64,
    kmax: i32,
    n_t: usize,
    cutoff: f64,
) -> Result<SpectrumScan, SpectralError> {
    let modes = modes_in_ball(kmax);
    let mut class_reps: BTreeMap<i64, Freq6> = BTreeMap::new();
    for k in &modes {
        let ksq: i64 = k.iter().map(|&ki| (ki * ki) as i64).sum();
        class_reps.entry(ksq).or_insert_with(|| k.clone());
    }
    let classes: BTreeMap<i64, ModeSpectrum> = class_reps
        .par_iter()
        .map(|(&ksq, rep)| {
            let mp = assemble_mode(rep, ell, n_t)?;
            Ok((ksq, mp.spectrum()?))
        })
        .collect::<Result<_, SpectralError>>()?;

    let mut extreme: f64 = 0.0;
    for spec in classes.values() {
        for (l, _) in &spec.eigs {
            extreme = extreme.max(l.abs());
        }
    }
    let threshold = 1e-8 * (1.0 + extreme);

    let mut count_positive = 0usize;
    let mut count_zero = 0usize;
    let mut count_negative = 0usize;
    let mut max_eig = f64::NEG_INFINITY;
    let mut theta_err: f64 = 0.0;
    let pi = std::f64::consts::PI;
    for k in &modes {
        let ksq: i64 = k.iter().map(|&ki| (ki * ki) as i64).sum();
        let spec = &classes[&ksq];
        max_eig = max_eig.max(spec.max_eigenvalue());
        for (l, m) in &spec.eigs {
            if *l > threshold {
                count_positive += m;
            } else if *l >= -threshold {
                count_zero += m;
            } else if *l >= -cutoff {
                count_negative += m;
            }
        }
    }
    for (&ksq, spec) in &classes {
        for m in 1..=3usize {
            let analytic = -(ksq as f64 + (m as f64 * pi / ell).powi(2));
            if analytic.abs() <= cutoff {
                let got = spec.theta_eigs[m - 1];
                theta_err = theta_err.max((got - analytic).abs() / analytic.abs());
            }
        }
    }
    Ok(SpectrumScan {
        ell,
        kmax,
        n_t,
        classes,
        mode_count: modes.len(),
        kernel_threshold: threshold,
        max_eigenvalue: max_eig,
        count_positive,
        count_zero,
        count_negative,
        cutoff,
        theta_eig_rel_error: theta_err,
    })
}

/// A kernel element in block coordinates: the `a`-component index carrying
/// the constant profile.
#[derive(Debug, Clone, serde::Serialize)]
pub struct KernelVector {
    pub k: Vec<i32>,
    pub a_component: usize,
    /// deviation of the discrete profile from a constant
    pub profile_deviation: f64,
    /// interior residual of the codifferential on the discrete profile
    pub codiff_residual: f64,
}

#[derive(Debug, Clone)]
pub struct KernelReport {
    pub ell: f64,
    pub kmax: i32,
    pub n_t: usize,
    pub dim: usize,
    pub dim_doubled_grid: usize,
    pub vectors: Vec<KernelVector>,
    pub theta_block_contributes: bool,
    pub max_codiff_residual: f64,
}

/// Kernel of the boundary value problem across all modes `|k| <= kmax`.
pub fn total_kernel(ell: f64, kmax: i32, n_t: usize) -> Result<KernelReport, SpectralError> {
    let cutoff = 1e6;
    let scan = scan_spectrum(ell, kmax, n_t, cutoff)?;
    let scan2 = scan_spectrum(ell, kmax, 2 * n_t, cutoff)?;

    // kernel vectors: the zero modes live at k = 0 in the a-block
    let mp = assemble_mode(&[0; 6], ell, n_t)?;
    let profile = mp.neumann_ground_vector()?;
    let mean: f64 = profile.iter().sum::<f64>() / profile.len() as f64;
    let deviation = profile
        .iter()
        .map(|x| (x - mean).abs())
        .fold(0.0, f64::max)
        / mean.abs().max(1e-300);
    // at k = 0 the codifferential of the chart field is 2 a'(t)
    let h = mp.h;
    let mut codiff = 0.0f64;
    for j in 1..profile.len() - 1 {
        codiff = codiff.max((profile[j + 1] - profile[j - 1]).abs() / h);
    }
    let scale = profile.iter().map(|x| x.abs()).fold(0.0, f64::max);
    codiff /= scale.max(1e-300);

    let vectors: Vec<KernelVector> = (0..6)
        .map(|c| KernelVector {
            k: vec![0; 6],
            a_component: c,
            profile_deviation: deviation,
            codiff_residual: codiff,
        })
        .collect();

    // the Dirichlet block never reaches the kernel threshold
    let theta_contributes = scan.classes.values().any(|spec| {
        spec.theta_eigs
            .iter()
            .any(|l| l.abs() <= scan.kernel_threshold)
    });

    Ok(KernelReport {
        ell,
        kmax,
        n_t,
        dim: scan.count_zero,
        dim_doubled_grid: scan2.count_zero,
        vectors,
        theta_block_contributes: theta_contributes,
        max_codiff_residual: codiff,
    })
}

/// Dimension bookkeeping of the deformation spaces for a slab over a
/// product boundary with the given Hodge numbers.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct CohomologyPrediction {
    /// closed 2-forms of the face structure: `1 + 2 h^{2,0}`
    pub dim_v: usize,
    /// two boundary components
    pub dim_v_phi: usize,
    /// kernel of the difference map: the diagonal copy
    pub dim_ker_p: usize,
    /// restrictions of global structure-preserving fields: the diagonal
    pub dim_im_iota: usize,
    pub dim_k_phi: usize,
    pub dim_h_phi: usize,
    /// dimension of the relative second cohomology of the slab
    pub relative_h2_dim: usize,
}

/// Predict the kernel bookkeeping from the Hodge numbers of the
/// cross-section: `dim V = 1 + 2 h^{2,0}`, the difference map kills the
/// diagonal, the diagonal is exactly the image of the restriction map, so
/// both obstruction spaces vanish.
pub fn predict_slab_kernel(h11: usize, h20: usize, b1: usize) -> CohomologyPrediction {
    let _ = h11;
    let dim_v = 1 + 2 * h20;
    CohomologyPrediction {
        dim_v,
        dim_v_phi: 2 * dim_v,
        dim_ker_p: dim_v,
        dim_im_iota: dim_v,
        dim_k_phi: 0,
        dim_h_phi: 0,
        relative_h2_dim: b1,
    }
}
