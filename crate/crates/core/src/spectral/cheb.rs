//! Chebyshev collocation on `[0, L]`: nodes, the differentiation matrix,
//! and Clenshaw-Curtis quadrature weights. Used by the slab field
//! calculus, where the Stokes-type identities need derivatives and
//! integrals well beyond second-order finite-difference accuracy.

use std::f64::consts::PI;

#[derive(Debug, Clone)]
pub struct Cheb {
    pub n: usize,
    pub ell: f64,
    /// ascending nodes, `t_0 = 0`, `t_{n-1} = ell`
    pub nodes: Vec<f64>,
    /// derivative matrix acting on node values
    pub diff: Vec<f64>,
    /// quadrature weights over `[0, ell]`
    pub weights: Vec<f64>,
}

impl Cheb {
    pub fn new(n: usize, ell: f64) -> Self {
        assert!(n >= 2 && ell > 0.0);
        let big_n = n - 1;
        // standard nodes x_j = cos(j pi / N), descending from 1 to -1;
        // map t = ell (1 - x) / 2 so the node order is ascending in t
        let x: Vec<f64> = (0..n).map(|j| (PI * j as f64 / big_n as f64).cos()).collect();
        let nodes: Vec<f64> = x.iter().map(|&xi| ell * (1.0 - xi) / 2.0).collect();
        let c = |i: usize| -> f64 {
            let base = if i == 0 || i == big_n { 2.0 } else { 1.0 };
            base * if i % 2 == 0 { 1.0 } else { -1.0 }
        };
        let mut diff_x = vec![0.0; n * n];
        for i in 0..n {
            let mut row_sum = 0.0;
            for j in 0..n {
                if i != j {
                    let d = c(i) / c(j) / (x[i] - x[j]);
                    diff_x[i * n + j] = d;
                    row_sum += d;
                }
            }
            diff_x[i * n + i] = -row_sum;
        }
        // d/dt = -(2/ell) d/dx
        let scale = -2.0 / ell;
        let diff: Vec<f64> = diff_x.iter().map(|d| d * scale).collect();

        // Clenshaw-Curtis weights on [-1, 1], then scale by ell/2
        let mut w = vec![0.0; n];
        if big_n == 1 {
            w[0] = 1.0;
            w[1] = 1.0;
        } else {
            let end = if big_n % 2 == 0 {
                1.0 / (big_n * big_n - 1) as f64
            } else {
                1.0 / (big_n * big_n) as f64
            };
            w[0] = end;
            w[big_n] = end;
            for i in 1..big_n {
                let theta = PI * i as f64 / big_n as f64;
                let mut v = 1.0;
                for k in 1..=(big_n / 2) {
                    let b = if 2 * k == big_n { 1.0 } else { 2.0 };
                    v -= b * (2.0 * k as f64 * theta).cos() / ((4 * k * k - 1) as f64);
                }
                w[i] = 2.0 * v / big_n as f64;
            }
        }
        let weights: Vec<f64> = w.iter().map(|wi| wi * ell / 2.0).collect();
        Cheb {
            n,
            ell,
            nodes,
            diff,
            weights,
        }
    }

    /// Differentiate node values.
    pub fn derivative(&self, values: &[f64]) -> Vec<f64> {
        assert_eq!(values.len(), self.n);
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| self.diff[i * self.n + j] * values[j])
                    .sum()
            })
            .collect()
    }

    pub fn integrate(&self, values: &[f64]) -> f64 {
        values.iter().zip(&self.weights).map(|(v, w)| v * w).sum()
    }
}
