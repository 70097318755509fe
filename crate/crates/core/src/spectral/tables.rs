//! Precomputed coefficient tables for fast per-mode form algebra.
//!
//! All field operations on the torus and the slab reduce, mode by mode,
//! to a handful of constant linear maps on coefficient vectors: wedging
//! with a basis covector, contracting with a basis vector, the Euclidean
//! Hodge star, and the type projectors of the standard structure. These
//! are tabulated once.

use std::sync::{Arc, OnceLock};

use num_complex::Complex64;

use crate::exterior::{Basis, Form, IndexTable, Metric};
use crate::g2::{phi_std, BoundaryFrame, G2Point};
use crate::linalg::DMat;
use crate::scalar::{Rat, RealScalar, Scalar};

/// Sparse action entry: `out[dst] += sign * in[src]`.
pub type Action = Vec<(usize, usize, f64)>;

pub struct FormOps {
    pub n: usize,
    /// dimension of the space of p-forms, p = 0..=n
    pub dims: Vec<usize>,
    /// `wedge1[p][axis]`: e^axis wedge (p-form) as p-form -> (p+1)-form
    pub wedge1: Vec<Vec<Action>>,
    /// `interior1[p][axis]`: contraction with the axis vector
    pub interior1: Vec<Vec<Action>>,
    /// `star[p]`: Euclidean star, entries `(dst, sign)` indexed by src
    pub star: Vec<Vec<(usize, f64)>>,
}

impl FormOps {
    pub fn new(n: usize) -> Self {
        let dims: Vec<usize> = (0..=n).map(|p| IndexTable::new(n, p).len()).collect();
        let mut wedge1 = Vec::with_capacity(n + 1);
        let mut interior1 = Vec::with_capacity(n + 1);
        let mut star = Vec::with_capacity(n + 1);
        let full: u8 = ((1u16 << n) - 1) as u8;
        for p in 0..=n {
            let table = IndexTable::new(n, p);
            // wedge with each basis covector
            let mut wp = Vec::with_capacity(n);
            let mut ip = Vec::with_capacity(n);
            for axis in 0..n {
                let bit = 1u8 << axis;
                let mut w = Vec::new();
                let mut iv = Vec::new();
                if p < n {
                    let tup = IndexTable::new(n, p + 1);
                    for (src, &m) in table.masks.iter().enumerate() {
                        if m & bit == 0 {
                            let sign = crate::exterior::merge_sign(bit, m) as f64;
                            w.push((src, tup.position(m | bit), sign));
                        }
                    }
                }
                if p > 0 {
                    let tdown = IndexTable::new(n, p - 1);
                    for (src, &m) in table.masks.iter().enumerate() {
                        if m & bit != 0 {
                            let before = (m & (bit - 1)).count_ones();
                            let sign = if before % 2 == 0 { 1.0 } else { -1.0 };
                            iv.push((src, tdown.position(m & !bit), sign));
                        }
                    }
                }
                wp.push(w);
                ip.push(iv);
            }
            wedge1.push(wp);
            interior1.push(ip);
            // Euclidean star with positive orientation
            let tcomp = IndexTable::new(n, n - p);
            let sp = table
                .masks
                .iter()
                .map(|&m| {
                    let comp = full & !m;
                    (
                        tcomp.position(comp),
                        crate::exterior::merge_sign(m, comp) as f64,
                    )
                })
                .collect();
            star.push(sp);
        }
        FormOps {
            n,
            dims,
            wedge1,
            interior1,
            star,
        }
    }

    /// `out += c * (e^axis ^ input)` for complex coefficient vectors.
    pub fn wedge_axis(
        &self,
        p: usize,
        axis: usize,
        c: Complex64,
        input: &[Complex64],
        out: &mut [Complex64],
    ) {
        for &(src, dst, sign) in &self.wedge1[p][axis] {
            out[dst] += c * sign * input[src];
        }
    }

    /// `out += c * iota_axis(input)`.
    pub fn interior_axis(
        &self,
        p: usize,
        axis: usize,
        c: Complex64,
        input: &[Complex64],
        out: &mut [Complex64],
    ) {
        for &(src, dst, sign) in &self.interior1[p][axis] {
            out[dst] += c * sign * input[src];
        }
    }

    pub fn star_apply(&self, p: usize, input: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.dims[self.n - p]];
        for (src, &(dst, sign)) in self.star[p].iter().enumerate() {
            out[dst] = sign * input[src];
        }
        out
    }
}

/// Apply a real matrix to a complex coefficient vector.
pub fn mat_apply(m: &DMat<f64>, v: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); m.rows];
    for i in 0..m.rows {
        let row = m.row(i);
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &a) in row.iter().enumerate() {
            if a != 0.0 {
                acc += a * v[j];
            }
        }
        out[i] = acc;
    }
    out
}

/// Constant data of the standard flat structure, in floating point but
/// derived from the exact rational computation.
pub struct FlatStructure {
    pub basis7: Arc<Basis>,
    pub basis6: Arc<Basis>,
    pub ops7: FormOps,
    pub ops6: FormOps,
    pub phi: Vec<f64>,
    pub theta: Vec<f64>,
    pub proj2_7: DMat<f64>,
    pub proj2_14: DMat<f64>,
    pub proj3_1: DMat<f64>,
    pub proj3_7: DMat<f64>,
    pub proj3_27: DMat<f64>,
    /// `chi`: 1-forms to 3-forms, `eta -> *(eta ^ phi)`, 35 x 7
    pub chi: DMat<f64>,
    /// boundary `chi6`: 1-forms to 2-forms on the face, 15 x 6
    pub chi6: DMat<f64>,
    /// orthonormal basis of the 8-part of boundary 2-forms, 15 x 8
    pub basis8: DMat<f64>,
    /// the face 2-form `omega` as a boundary 2-form coefficient vector
    pub omega6: Vec<f64>,
    /// exact rational structure for callers that need it
    pub point: G2Point<Rat>,
    pub frame_top: BoundaryFrame<Rat>,
}

fn to_f64_mat(m: &DMat<Rat>) -> DMat<f64> {
    DMat::from_fn(m.rows, m.cols, |i, j| m[(i, j)].to_f64())
}

pub fn flat() -> &'static FlatStructure {
    static FLAT: OnceLock<FlatStructure> = OnceLock::new();
    FLAT.get_or_init(|| {
        let basis7 = Basis::standard7();
        let basis6 = Basis::standard6();
        let phi_r = phi_std::<Rat>(&basis7);
        let point = G2Point::induce(&phi_r).expect("standard positive form");
        let mut nu = vec![Rat::zero(); 7];
        nu[6] = Rat::one();
        let frame_top = BoundaryFrame::new(&point, &nu).expect("top face");

        let ops7 = FormOps::new(7);
        let ops6 = FormOps::new(6);
        let chi = {
            let mut cols = Vec::with_capacity(7);
            for i in 0..7 {
                let eta: Form<Rat> = Form::basis_form(&basis7, &[i]);
                cols.push(point.chi(&eta).expect("chi"));
            }
            DMat::from_fn(35, 7, |r, c| cols[c].coeffs()[r].to_f64())
        };
        let chi6 = to_f64_mat(frame_top.chi6_matrix());

        // orthonormal basis of the 8-part: orthonormalize the projector image
        let proj8 = to_f64_mat(frame_top.proj_8());
        let mut basis8_cols: Vec<Vec<f64>> = Vec::new();
        for j in 0..15 {
            let mut v: Vec<f64> = (0..15).map(|i| proj8[(i, j)]).collect();
            for b in &basis8_cols {
                let dot: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= dot * y;
                }
            }
            let nrm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if nrm > 1e-8 {
                for x in v.iter_mut() {
                    *x /= nrm;
                }
                basis8_cols.push(v);
            }
        }
        assert_eq!(basis8_cols.len(), 8, "8-part rank");
        let basis8 = DMat::from_fn(15, 8, |i, j| basis8_cols[j][i]);

        let metric6: Metric<Rat> = Metric::identity(6);
        let _ = metric6;
        let omega6: Vec<f64> = frame_top
            .omega()
            .coeffs()
            .iter()
            .map(|c| c.to_f64())
            .collect();

        FlatStructure {
            basis7,
            basis6,
            ops7,
            ops6,
            phi: phi_r.coeffs().iter().map(|c| c.to_f64()).collect(),
            theta: point.theta().coeffs().iter().map(|c| c.to_f64()).collect(),
            proj2_7: to_f64_mat(point.proj2_7()),
            proj2_14: to_f64_mat(point.proj2_14()),
            proj3_1: to_f64_mat(point.proj3_1()),
            proj3_7: to_f64_mat(point.proj3_7()),
            proj3_27: to_f64_mat(point.proj3_27()),
            chi,
            chi6,
            basis8,
            omega6,
            point,
            frame_top,
        }
    })
}
