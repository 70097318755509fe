//! The per-mode two-point boundary value problem on `[0, L]`.
//!
//! After Fourier reduction in the torus directions, the Laplacian under
//! the boundary conditions (8-part Dirichlet, coupled Robin rows on the
//! 6-block) becomes, for each frequency `k`, the operator
//! `-d^2/dt^2 + |k|^2` on 14 components with
//!
//! - Dirichlet rows on the 8 `Theta`-components at both faces,
//! - `2 a'(t) - Sigma(k) a(t) = 0` at both faces on the 6 `a`-components,
//!   where `Sigma(k) = -i iota_k chi6` is the Hermitian boundary symbol.
//!
//! Discretization: second-order centered differences with ghost-node
//! elimination for the Robin rows, which keeps the weighted matrix
//! Hermitian to rounding. The `a`-block diagonalizes over the spectral
//! channels of `Sigma(k)` (eigenvalues `0, +|k|, -|k|`, each twice), so
//! eigenvalues reduce to real scalar problems; the boundary channels
//! `s = +-|k|` carry the exact eigenfunctions `exp(+-|k| t / 2)` of the
//! continuum problem with `-Delta`-eigenvalue `-(3/4)|k|^2`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::SpectralError;
use crate::linalg::DMat;
use crate::scalar::{Rat, RealScalar, Scalar};
use crate::spectral::slab::Freq6;

/// Real skew matrix of `iota_k chi6` for an integer frequency.
pub fn skew_matrix(k: &[i32]) -> DMat<f64> {
    let xi: Vec<Rat> = k.iter().map(|&ki| Rat::from_int(ki as i64)).collect();
    let exact = crate::symbol::symbol_real_matrix(&xi);
    DMat::from_fn(6, 6, |i, j| exact[(i, j)].to_f64())
}

#[derive(Debug, Clone)]
pub struct ModeProblem {
    pub k: Freq6,
    pub k_sq: f64,
    pub ell: f64,
    pub n_t: usize,
    pub h: f64,
    /// real skew part `R(k) = i Sigma(k)`
    pub skew: DMat<f64>,
}

/// Assemble the discrete problem for one torus frequency.
pub fn assemble_mode(k: &[i32], ell: f64, n_t: usize) -> Result<ModeProblem, SpectralError> {
    if ell <= 0.0 {
        return Err(SpectralError::BadLength(ell));
    }
    if n_t < 8 {
        return Err(SpectralError::GridTooSmall(n_t, 8));
    }
    assert_eq!(k.len(), 6);
    let k_sq: f64 = k.iter().map(|&ki| (ki * ki) as f64).sum();
    Ok(ModeProblem {
        k: k.to_vec(),
        k_sq,
        ell,
        n_t,
        h: ell / (n_t - 1) as f64,
        skew: skew_matrix(k),
    })
}

impl ModeProblem {
    /// `Sigma(k) = -i R(k)` as a complex matrix.
    pub fn sigma(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(6, 6, |i, j| Complex64::new(0.0, -self.skew[(i, j)]))
    }

    /// Weighted `a`-block operator (trapezoid weights), Hermitian by
    /// construction; DOF layout is node-major (`j * 6 + c`).
    pub fn a_block_weighted(&self) -> DMatrix<Complex64> {
        let n = self.n_t;
        let h = self.h;
        let sigma = self.sigma();
        let mut m = DMatrix::from_element(6 * n, 6 * n, Complex64::new(0.0, 0.0));
        let real = |x: f64| Complex64::new(x, 0.0);
        for j in 0..n {
            let w = if j == 0 || j == n - 1 { h / 2.0 } else { h };
            let diag = 2.0 / (h * h) + self.k_sq;
            for c in 0..6 {
                m[(j * 6 + c, j * 6 + c)] += real(w * diag);
            }
            if j > 0 {
                let coupling = if j == n - 1 { -2.0 / (h * h) } else { -1.0 / (h * h) };
                for c in 0..6 {
                    m[(j * 6 + c, (j - 1) * 6 + c)] += real(w * coupling);
                }
            }
            if j < n - 1 {
                let coupling = if j == 0 { -2.0 / (h * h) } else { -1.0 / (h * h) };
                for c in 0..6 {
                    m[(j * 6 + c, (j + 1) * 6 + c)] += real(w * coupling);
                }
            }
            if j == 0 {
                // ghost elimination of 2 a' = Sigma a at the bottom face
                for r in 0..6 {
                    for c in 0..6 {
                        m[(r, c)] += real(w / h) * sigma[(r, c)];
                    }
                }
            }
            if j == n - 1 {
                for r in 0..6 {
                    for c in 0..6 {
                        m[(j * 6 + r, j * 6 + c)] -= real(w / h) * sigma[(r, c)];
                    }
                }
            }
        }
        m
    }

    /// Dirichlet scalar operator of one `Theta` component (interior
    /// nodes only, already symmetric); the block repeats it 8 times.
    pub fn theta_block_scalar(&self) -> DMatrix<f64> {
        let n = self.n_t - 2;
        let h = self.h;
        let mut m = DMatrix::from_element(n, n, 0.0);
        for j in 0..n {
            m[(j, j)] = 2.0 / (h * h) + self.k_sq;
            if j > 0 {
                m[(j, j - 1)] = -1.0 / (h * h);
            }
            if j + 1 < n {
                m[(j, j + 1)] = -1.0 / (h * h);
            }
        }
        m
    }

    /// Largest Hermitian defect of the assembled weighted operator.
    pub fn symmetry_defect(&self) -> f64 {
        let a = self.a_block_weighted();
        let mut worst: f64 = 0.0;
        for i in 0..a.nrows() {
            for j in 0..=i {
                worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
            }
        }
        let t = self.theta_block_scalar();
        for i in 0..t.nrows() {
            for j in 0..=i {
                worst = worst.max((t[(i, j)] - t[(j, i)]).abs());
            }
        }
        worst
    }

    /// Symmetrized scalar Robin operator of one `Sigma`-channel with
    /// boundary coefficient `s` (similar to the channel operator, so the
    /// eigenvalues agree).
    pub fn robin_channel(&self, s: f64) -> DMatrix<f64> {
        let n = self.n_t;
        let h = self.h;
        let mut m = DMatrix::from_element(n, n, 0.0);
        let sq2 = 2.0f64.sqrt();
        for j in 0..n {
            m[(j, j)] = 2.0 / (h * h) + self.k_sq;
        }
        m[(0, 0)] += s / h;
        m[(n - 1, n - 1)] -= s / h;
        for j in 1..n - 1 {
            m[(j, j - 1)] = -1.0 / (h * h);
            m[(j - 1, j)] = -1.0 / (h * h);
        }
        // face couplings pick up the sqrt(w_i / w_j) similarity factors
        m[(0, 1)] = -sq2 / (h * h);
        m[(1, 0)] = -sq2 / (h * h);
        m[(n - 1, n - 2)] = -sq2 / (h * h);
        m[(n - 2, n - 1)] = -sq2 / (h * h);
        m
    }

    /// Channel structure of `Sigma(k)`: `(s, complex multiplicity)`.
    pub fn channels(&self) -> Vec<(f64, usize)> {
        let norm = self.k_sq.sqrt();
        if self.k_sq == 0.0 {
            vec![(0.0, 6)]
        } else {
            vec![(-norm, 2), (0.0, 2), (norm, 2)]
        }
    }

    /// All eigenvalues of `-Delta` under the boundary conditions, sorted
    /// descending, with multiplicities.
    pub fn spectrum(&self) -> Result<ModeSpectrum, SpectralError> {
        let mut eigs: Vec<(f64, usize)> = Vec::new();
        // Theta block: Dirichlet, multiplicity 8
        let theta = self.theta_block_scalar();
        let theta_eigs = symmetric_eigenvalues(&theta)?;
        for mu in &theta_eigs {
            eigs.push((-mu, 8));
        }
        // a block per channel
        let mut robin_ground: Vec<(f64, f64)> = Vec::new();
        for (s, mult) in self.channels() {
            let m = self.robin_channel(s);
            let mus = symmetric_eigenvalues(&m)?;
            let ground = mus.iter().cloned().fold(f64::INFINITY, f64::min);
            robin_ground.push((s, -ground));
            for mu in mus {
                eigs.push((-mu, mult));
            }
        }
        eigs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        let mut theta_sorted: Vec<f64> = theta_eigs.iter().map(|mu| -mu).collect();
        theta_sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
        Ok(ModeSpectrum {
            k: self.k.clone(),
            k_sq: self.k_sq,
            eigs,
            theta_eigs: theta_sorted,
            robin_ground,
        })
    }

    /// Discrete eigenvectors of the `a`-block zero-frequency channel with
    /// eigenvalue nearest zero (the kernel candidates at `k = 0`).
    pub fn neumann_ground_vector(&self) -> Result<Vec<f64>, SpectralError> {
        let m = self.robin_channel(0.0);
        let eig = SymmetricEigen::new(m);
        let mut best = 0usize;
        for i in 0..eig.eigenvalues.len() {
            if eig.eigenvalues[i].abs() < eig.eigenvalues[best].abs() {
                best = i;
            }
        }
        // undo the similarity weighting to get node values
        let n = self.n_t;
        let mut v: Vec<f64> = (0..n).map(|j| eig.eigenvectors[(j, best)]).collect();
        v[0] *= 2.0f64.sqrt();
        v[n - 1] *= 2.0f64.sqrt();
        let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        for x in v.iter_mut() {
            *x /= norm;
        }
        Ok(v)
    }
}

fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Result<Vec<f64>, SpectralError> {
    let eig = SymmetricEigen::try_new(m.clone(), 1e-13, 10_000)
        .ok_or_else(|| SpectralError::EigenFailure("symmetric eigensolver stalled".into()))?;
    Ok(eig.eigenvalues.iter().cloned().collect())
}

#[derive(Debug, Clone)]
pub struct ModeSpectrum {
    pub k: Freq6,
    pub k_sq: f64,
    /// eigenvalues of `-Delta` under the boundary conditions, descending
    pub eigs: Vec<(f64, usize)>,
    /// the Dirichlet-block eigenvalues (each of multiplicity 8), descending
    pub theta_eigs: Vec<f64>,
    /// per channel `s`: the largest `-Delta` eigenvalue of that channel
    pub robin_ground: Vec<(f64, f64)>,
}

impl ModeSpectrum {
    pub fn max_eigenvalue(&self) -> f64 {
        self.eigs.first().map(|e| e.0).unwrap_or(f64::NEG_INFINITY)
    }
}
