//! Form fields on the slab `T^6 x [0, L]` and the Stokes-type identities
//! relating the linearized torsion operator, the volume Hessian, and the
//! boundary pairing.
//!
//! Fields are Fourier in the torus directions and Chebyshev-collocated in
//! `t`, so derivatives and integrals of the smooth test fields used by
//! the checks are accurate far beyond the stated tolerances. 14-type
//! fields are stored in the global block chart
//! `alpha = 2 a ^ dt - chi6(a) - Theta` with `a` the 6-component block
//! and `Theta` the 8-part block; at the bottom face the face-local
//! conventions flip sign together with the outward normal.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::SpectralError;
use crate::exterior::IndexTable;
use crate::linalg::DMat;
use crate::spectral::cheb::Cheb;
use crate::spectral::tables::flat;
use crate::spectral::torus::TorusField;

pub type Freq6 = Vec<i32>;

const C0: Complex64 = Complex64::new(0.0, 0.0);

/// One Fourier mode of a 14-type field: block values at the `t` nodes,
/// component-major (`[c * n + j]`).
#[derive(Debug, Clone)]
pub struct ModeBlock {
    pub a: Vec<Complex64>,
    pub theta: Vec<Complex64>,
}

/// A section of the 14-type bundle over the slab in the `(a, Theta)` chart.
#[derive(Debug, Clone)]
pub struct SlabField14 {
    pub cheb: Arc<Cheb>,
    pub trunc: i32,
    pub blocks: BTreeMap<Freq6, ModeBlock>,
}

/// A general ambient `p`-form field on the slab.
#[derive(Debug, Clone)]
pub struct SlabForm {
    pub degree: usize,
    pub cheb: Arc<Cheb>,
    pub modes: BTreeMap<Freq6, Vec<Complex64>>,
}

fn comp_len(degree: usize) -> usize {
    flat().ops7.dims[degree]
}

/// positions of 2-forms on the boundary inside the ambient 2-form table
fn include2_table() -> Vec<usize> {
    let t6 = IndexTable::new(6, 2);
    let t7 = IndexTable::new(7, 2);
    t6.masks.iter().map(|&m| t7.position(m)).collect()
}

impl SlabField14 {
    pub fn zero(cheb: Arc<Cheb>, trunc: i32) -> Self {
        SlabField14 {
            cheb,
            trunc,
            blocks: BTreeMap::new(),
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.cheb.n
    }

    /// Map the chart to the ambient 2-form field
    /// `alpha = 2 a ^ dt - chi6(a) - Theta`.
    pub fn to_ambient(&self) -> SlabForm {
        let fl = flat();
        let n = self.cheb.n;
        let inc2 = include2_table();
        let t7 = IndexTable::new(7, 2);
        let mut modes = BTreeMap::new();
        for (k, block) in &self.blocks {
            let mut comps = vec![C0; 21 * n];
            for j in 0..n {
                // 2 a ^ dt
                for axis in 0..6usize {
                    let pos = t7.position((1 << axis) | (1 << 6));
                    comps[pos * n + j] += 2.0 * block.a[axis * n + j];
                }
                // -chi6(a) - Theta, both tangential 2-forms
                for row in 0..15 {
                    let mut v = C0;
                    for c6 in 0..6 {
                        let w = fl.chi6[(row, c6)];
                        if w != 0.0 {
                            v += w * block.a[c6 * n + j];
                        }
                    }
                    for c8 in 0..8 {
                        let w = fl.basis8[(row, c8)];
                        if w != 0.0 {
                            v += w * block.theta[c8 * n + j];
                        }
                    }
                    comps[inc2[row] * n + j] -= v;
                }
            }
            modes.insert(k.clone(), comps);
        }
        SlabForm {
            degree: 2,
            cheb: self.cheb.clone(),
            modes,
        }
    }

    /// The `a` block of every mode at a face node (0 = bottom, n-1 = top),
    /// as complex boundary 1-form modes.
    pub fn a_at_face(&self, top: bool) -> BTreeMap<Freq6, Vec<Complex64>> {
        let n = self.cheb.n;
        let j = if top { n - 1 } else { 0 };
        let mut out = BTreeMap::new();
        for (k, block) in &self.blocks {
            let vals: Vec<Complex64> = (0..6).map(|c| block.a[c * n + j]).collect();
            if vals.iter().any(|v| v.norm_sqr() > 0.0) {
                out.insert(k.clone(), vals);
            }
        }
        out
    }

    /// Largest 8-block magnitude over the two faces.
    pub fn theta_face_norm(&self) -> f64 {
        let n = self.cheb.n;
        let mut worst: f64 = 0.0;
        for block in self.blocks.values() {
            for c in 0..8 {
                worst = worst.max(block.theta[c * n].norm());
                worst = worst.max(block.theta[c * n + n - 1].norm());
            }
        }
        worst
    }

    /// Largest `a`-block magnitude over the two faces.
    pub fn a_face_norm(&self) -> f64 {
        let n = self.cheb.n;
        let mut worst: f64 = 0.0;
        for block in self.blocks.values() {
            for c in 0..6 {
                worst = worst.max(block.a[c * n].norm());
                worst = worst.max(block.a[c * n + n - 1].norm());
            }
        }
        worst
    }

    /// Enforce the conjugate symmetry of a real field.
    pub fn symmetrize_real(&mut self) {
        let keys: Vec<Freq6> = self.blocks.keys().cloned().collect();
        let mut new: BTreeMap<Freq6, ModeBlock> = BTreeMap::new();
        let half = |x: &[Complex64], y: Option<&Vec<Complex64>>| -> Vec<Complex64> {
            match y {
                Some(yv) => x
                    .iter()
                    .zip(yv)
                    .map(|(p, q)| 0.5 * (p + q.conj()))
                    .collect(),
                None => x.iter().map(|p| 0.5 * p).collect(),
            }
        };
        for k in keys {
            let neg: Freq6 = k.iter().map(|x| -x).collect();
            let blk = self.blocks.get(&k).cloned().unwrap();
            let other = self.blocks.get(&neg);
            let a = half(&blk.a, other.map(|o| &o.a));
            let theta = half(&blk.theta, other.map(|o| &o.theta));
            let conj_a: Vec<Complex64> = a.iter().map(|x| x.conj()).collect();
            let conj_t: Vec<Complex64> = theta.iter().map(|x| x.conj()).collect();
            new.insert(k.clone(), ModeBlock { a, theta });
            new.insert(
                neg,
                ModeBlock {
                    a: conj_a,
                    theta: conj_t,
                },
            );
        }
        self.blocks = new;
    }
}

impl SlabForm {
    pub fn zero(degree: usize, cheb: Arc<Cheb>) -> Self {
        SlabForm {
            degree,
            cheb,
            modes: BTreeMap::new(),
        }
    }

    fn node_slice(comps: &[Complex64], c: usize, n: usize) -> &[Complex64] {
        &comps[c * n..(c + 1) * n]
    }

    fn t_derivative(&self, comps: &[Complex64], c: usize) -> Vec<Complex64> {
        let n = self.cheb.n;
        let vals = Self::node_slice(comps, c, n);
        (0..n)
            .map(|i| {
                let mut acc = C0;
                for j in 0..n {
                    acc += self.cheb.diff[i * n + j] * vals[j];
                }
                acc
            })
            .collect()
    }

    /// Exterior derivative: tangential wedges with `i k` plus `dt ^ d/dt`.
    pub fn d(&self) -> SlabForm {
        let fl = flat();
        let p = self.degree;
        assert!(p < 7);
        let n = self.cheb.n;
        let out_len = comp_len(p + 1);
        let mut modes = BTreeMap::new();
        for (k, comps) in &self.modes {
            let mut oc = vec![C0; out_len * n];
            for j in 0..n {
                // tangential part
                let node: Vec<Complex64> = (0..comp_len(p)).map(|c| comps[c * n + j]).collect();
                let mut onode = vec![C0; out_len];
                for (axis, &ki) in k.iter().enumerate() {
                    if ki != 0 {
                        fl.ops7
                            .wedge_axis(p, axis, Complex64::new(0.0, ki as f64), &node, &mut onode);
                    }
                }
                for (c, v) in onode.iter().enumerate() {
                    oc[c * n + j] += v;
                }
            }
            // dt ^ d/dt
            for c in 0..comp_len(p) {
                let dv = self.t_derivative(comps, c);
                let mut unit = vec![C0; comp_len(p)];
                unit[c] = Complex64::new(1.0, 0.0);
                let mut onode = vec![C0; out_len];
                fl.ops7
                    .wedge_axis(p, 6, Complex64::new(1.0, 0.0), &unit, &mut onode);
                for (oc_idx, ov) in onode.iter().enumerate() {
                    if ov.norm_sqr() != 0.0 {
                        for j in 0..n {
                            oc[oc_idx * n + j] += ov * dv[j];
                        }
                    }
                }
            }
            modes.insert(k.clone(), oc);
        }
        SlabForm {
            degree: p + 1,
            cheb: self.cheb.clone(),
            modes,
        }
    }

    /// Codifferential: tangential contractions with `-i k` minus the
    /// normal contraction of the `t`-derivative.
    pub fn codiff(&self) -> SlabForm {
        let fl = flat();
        let p = self.degree;
        assert!(p >= 1);
        let n = self.cheb.n;
        let out_len = comp_len(p - 1);
        let mut modes = BTreeMap::new();
        for (k, comps) in &self.modes {
            let mut oc = vec![C0; out_len * n];
            for j in 0..n {
                let node: Vec<Complex64> = (0..comp_len(p)).map(|c| comps[c * n + j]).collect();
                let mut onode = vec![C0; out_len];
                for (axis, &ki) in k.iter().enumerate() {
                    if ki != 0 {
                        fl.ops7.interior_axis(
                            p,
                            axis,
                            Complex64::new(0.0, -(ki as f64)),
                            &node,
                            &mut onode,
                        );
                    }
                }
                for (c, v) in onode.iter().enumerate() {
                    oc[c * n + j] += v;
                }
            }
            for c in 0..comp_len(p) {
                let dv = self.t_derivative(comps, c);
                let mut unit = vec![C0; comp_len(p)];
                unit[c] = Complex64::new(1.0, 0.0);
                let mut onode = vec![C0; out_len];
                fl.ops7
                    .interior_axis(p, 6, Complex64::new(-1.0, 0.0), &unit, &mut onode);
                for (oc_idx, ov) in onode.iter().enumerate() {
                    if ov.norm_sqr() != 0.0 {
                        for j in 0..n {
                            oc[oc_idx * n + j] += ov * dv[j];
                        }
                    }
                }
            }
            modes.insert(k.clone(), oc);
        }
        SlabForm {
            degree: p - 1,
            cheb: self.cheb.clone(),
            modes,
        }
    }

    /// Apply a constant real matrix node-wise (type projectors).
    pub fn apply_matrix(&self, m: &DMat<f64>, out_degree: usize) -> SlabForm {
        let n = self.cheb.n;
        let in_len = comp_len(self.degree);
        assert_eq!(m.cols, in_len);
        let mut modes = BTreeMap::new();
        for (k, comps) in &self.modes {
            let mut oc = vec![C0; m.rows * n];
            for i in 0..m.rows {
                for c in 0..in_len {
                    let w = m[(i, c)];
                    if w != 0.0 {
                        for j in 0..n {
                            oc[i * n + j] += w * comps[c * n + j];
                        }
                    }
                }
            }
            modes.insert(k.clone(), oc);
        }
        SlabForm {
            degree: out_degree,
            cheb: self.cheb.clone(),
            modes,
        }
    }

    pub fn add(&self, other: &SlabForm) -> SlabForm {
        assert_eq!(self.degree, other.degree);
        let mut out = self.clone();
        for (k, comps) in &other.modes {
            match out.modes.entry(k.clone()) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(comps.clone());
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    for (a, b) in e.get_mut().iter_mut().zip(comps) {
                        *a += b;
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, c: f64) -> SlabForm {
        let mut out = self.clone();
        for comps in out.modes.values_mut() {
            for x in comps.iter_mut() {
                *x *= c;
            }
        }
        out
    }

    pub fn sub(&self, other: &SlabForm) -> SlabForm {
        self.add(&other.scale(-1.0))
    }

    /// `L^2` inner product over the slab (mean-normalized torus times
    /// Clenshaw-Curtis in `t`), conjugating the second argument.
    pub fn inner(&self, other: &SlabForm) -> Complex64 {
        assert_eq!(self.degree, other.degree);
        let n = self.cheb.n;
        let len = comp_len(self.degree);
        let mut acc = C0;
        for (k, ca) in &self.modes {
            if let Some(cb) = other.modes.get(k) {
                for c in 0..len {
                    for j in 0..n {
                        acc += self.cheb.weights[j] * ca[c * n + j] * cb[c * n + j].conj();
                    }
                }
            }
        }
        acc
    }

    pub fn norm_sq(&self) -> f64 {
        self.inner(self).re
    }
}

/// The linearized torsion operator on an ambient slab 2-form field:
/// `4/3 d* d1 + d* d7 - d* d27`.
pub fn operator_l_slab(f: &SlabForm) -> SlabForm {
    let fl = flat();
    assert_eq!(f.degree, 2);
    let df = f.d();
    let d1 = df.apply_matrix(&fl.proj3_1, 3).codiff().scale(4.0 / 3.0);
    let d7 = df.apply_matrix(&fl.proj3_7, 3).codiff();
    let d27 = df.apply_matrix(&fl.proj3_27, 3).codiff();
    d1.add(&d7).sub(&d27)
}

/// The typed-derivative quadratic pairing
/// `4/3 <d1 a, d1 b> + <d7 a, d7 b> - <d27 a, d27 b>`.
pub fn q_pairing(a: &SlabForm, b: &SlabForm) -> f64 {
    let fl = flat();
    let da = a.d();
    let db = b.d();
    let p = |m: &DMat<f64>| -> f64 {
        da.apply_matrix(m, 3).inner(&db.apply_matrix(m, 3)).re
    };
    (4.0 / 3.0) * p(&fl.proj3_1) + p(&fl.proj3_7) - p(&fl.proj3_27)
}

fn pairing_of_modes(
    a: &BTreeMap<Freq6, Vec<Complex64>>,
    b: &BTreeMap<Freq6, Vec<Complex64>>,
) -> f64 {
    let mut fa = TorusField::zero(6, 1, 0);
    for (k, v) in a {
        fa.modes.insert(k.clone(), v.clone());
        fa.trunc = fa.trunc.max(k.iter().map(|x| x.abs()).max().unwrap_or(0));
    }
    let mut fb = TorusField::zero(6, 1, 0);
    for (k, v) in b {
        fb.modes.insert(k.clone(), v.clone());
        fb.trunc = fb.trunc.max(k.iter().map(|x| x.abs()).max().unwrap_or(0));
    }
    crate::spectral::torus::boundary_pairing(&fa, &fb)
}

/// Result of the three-term boundary identity check.
#[derive(Debug, Clone)]
pub struct GreenReport {
    /// `<L alpha, beta>`
    pub term_l: f64,
    /// `<alpha, beta>_Q`
    pub term_q: f64,
    /// boundary pairing of the 6-blocks over both faces
    pub term_boundary: f64,
    /// `|term_l - term_q - term_boundary|` relative to the largest term
    pub residual: f64,
}

/// Verify `<L alpha, beta> = <alpha, beta>_Q + <alpha_6, beta_6>_boundary`
/// for 14-type fields whose 8-blocks vanish on both faces.
pub fn green_formula_check(
    alpha: &SlabField14,
    beta: &SlabField14,
    face_tol: f64,
) -> Result<GreenReport, SpectralError> {
    let viol = alpha.theta_face_norm().max(beta.theta_face_norm());
    if viol > face_tol {
        return Err(SpectralError::DirichletViolation(viol));
    }
    let fa = alpha.to_ambient();
    let fb = beta.to_ambient();
    let term_l = operator_l_slab(&fa).inner(&fb).re;
    let term_q = q_pairing(&fa, &fb);
    // boundary term: top face minus bottom face in the global chart
    let top = pairing_of_modes(&alpha.a_at_face(true), &beta.a_at_face(true));
    let bottom = pairing_of_modes(&alpha.a_at_face(false), &beta.a_at_face(false));
    let term_boundary = top - bottom;
    let scale = term_l.abs().max(term_q.abs()).max(term_boundary.abs()).max(1.0);
    let residual = (term_l - term_q - term_boundary).abs() / scale;
    Ok(GreenReport {
        term_l,
        term_q,
        term_boundary,
        residual,
    })
}

/// The volume Hessian of a slab field vanishing on the boundary in the
/// pullback sense, evaluated by the typed route and through `L`.
#[derive(Debug, Clone)]
pub struct SlabHitchinQ {
    pub q_typed: f64,
    pub q_via_l: f64,
    pub difference: f64,
}

pub fn hitchin_q_slab(field: &SlabField14, face_tol: f64) -> Result<SlabHitchinQ, SpectralError> {
    let viol = field.theta_face_norm().max(field.a_face_norm());
    if viol > face_tol {
        return Err(SpectralError::BoundaryPullback(viol));
    }
    let f = field.to_ambient();
    let q_typed = q_pairing(&f, &f);
    let q_via_l = operator_l_slab(&f).inner(&f).re;
    Ok(SlabHitchinQ {
        q_typed,
        q_via_l,
        difference: (q_typed - q_via_l).abs(),
    })
}

/// Seeded random real 14-chart field with polynomial `t`-profiles; the
/// 8-block vanishes at both faces, and optionally the 6-block does too.
pub fn random_slab_field(
    sampler: &mut crate::spectral::rng::FieldSampler,
    cheb: &Arc<Cheb>,
    kmax: i32,
    axes: &[usize],
    modes: usize,
    dirichlet_a: bool,
) -> SlabField14 {
    use rand::Rng;
    let n = cheb.n;
    let ell = cheb.ell;
    let mut field = SlabField14::zero(cheb.clone(), kmax);
    for _ in 0..modes {
        let mut k: Freq6 = vec![0; 6];
        for &ax in axes {
            k[ax] = sampler.rng().gen_range(-kmax..=kmax);
        }
        let mut a = vec![C0; 6 * n];
        let mut theta = vec![C0; 8 * n];
        let mut rat = {
            let rng = sampler.rng();
            let mut f = move || {
                let num = rng.gen_range(-8i64..=8);
                let den = rng.gen_range(1i64..=8);
                num as f64 / den as f64
            };
            move || Complex64::new(f(), f())
        };
        for c in 0..6 {
            let coef: Vec<Complex64> = (0..4).map(|_| rat()).collect();
            for (j, &t) in cheb.nodes.iter().enumerate() {
                let s = t / ell;
                let mut v = C0;
                for (p, cf) in coef.iter().enumerate() {
                    v += cf * s.powi(p as i32);
                }
                if dirichlet_a {
                    v *= s * (1.0 - s);
                }
                a[c * n + j] = v;
            }
        }
        for c in 0..8 {
            let coef: Vec<Complex64> = (0..3).map(|_| rat()).collect();
            for (j, &t) in cheb.nodes.iter().enumerate() {
                let s = t / ell;
                let mut v = C0;
                for (p, cf) in coef.iter().enumerate() {
                    v += cf * s.powi(p as i32);
                }
                theta[c * n + j] = v * s * (1.0 - s);
            }
        }
        field.blocks.insert(k, ModeBlock { a, theta });
    }
    field.symmetrize_real();
    field
}
