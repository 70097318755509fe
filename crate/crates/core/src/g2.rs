//! Pointwise calculus of G2-structures on the 7-dimensional model space:
//! positivity, the induced metric, the 4-form `Theta`, type projections of
//! 2- and 3-forms, the boundary splittings at a slab face, and the first
//! and second variation formulas of the volume.

use std::sync::Arc;

use crate::error::{ExteriorError, G2Error};
use crate::exterior::{Basis, Form, IndexTable, Metric};
use crate::linalg::DMat;
use crate::scalar::{RealScalar, Scalar};

/// The standard positive 3-form `omega ^ dt + Im(dz1 dz2 dz3)` on the
/// model coordinates `x1,y1,x2,y2,x3,y3,t`.
pub fn phi_std<S: Scalar>(basis: &Arc<Basis>) -> Form<S> {
    assert_eq!(basis.dim(), 7);
    let mut phi = Form::zero(basis, 3);
    // omega ^ dt
    phi.set_coeff(&[0, 1, 6], S::one());
    phi.set_coeff(&[2, 3, 6], S::one());
    phi.set_coeff(&[4, 5, 6], S::one());
    // Im(dz1 dz2 dz3)
    phi.set_coeff(&[1, 3, 5], -S::one());
    phi.set_coeff(&[1, 2, 4], S::one());
    phi.set_coeff(&[0, 3, 4], S::one());
    phi.set_coeff(&[0, 2, 5], S::one());
    phi
}

/// The standard symplectic 2-form on the first six model coordinates.
pub fn omega_std<S: Scalar>(basis: &Arc<Basis>) -> Form<S> {
    let mut w = Form::zero(basis, 2);
    w.set_coeff(&[0, 1], S::one());
    w.set_coeff(&[2, 3], S::one());
    w.set_coeff(&[4, 5], S::one());
    w
}

/// `Re(dz1 dz2 dz3)` on the model coordinates.
pub fn re_dz_std<S: Scalar>(basis: &Arc<Basis>) -> Form<S> {
    let mut r = Form::zero(basis, 3);
    r.set_coeff(&[0, 2, 4], S::one());
    r.set_coeff(&[0, 3, 5], -S::one());
    r.set_coeff(&[1, 2, 5], -S::one());
    r.set_coeff(&[1, 3, 4], -S::one());
    r
}

/// Gram matrix of the vector-valued quadratic form
/// `v -> i_v(phi) ^ i_v(phi) ^ phi`, read against the orientation form.
pub fn positivity_gram<S: Scalar>(phi: &Form<S>) -> DMat<S> {
    let basis = phi.basis();
    let n = basis.dim();
    assert_eq!(n, 7);
    assert_eq!(phi.degree(), 3);
    let or = S::from_int(basis.orientation() as i64);
    // interior products with the basis vectors
    let mut contractions = Vec::with_capacity(n);
    for i in 0..n {
        let mut v = vec![S::zero(); n];
        v[i] = S::one();
        contractions.push(phi.interior(&v).expect("degree 3"));
    }
    // fill the upper triangle and mirror, so the result is symmetric even
    // under floating rounding
    let mut gram = DMat::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let w = contractions[i]
                .wedge(&contractions[j])
                .and_then(|f| f.wedge(phi))
                .expect("degree 7");
            let v = or.clone() * w.coeffs()[0].clone();
            gram[(i, j)] = v.clone();
            if i != j {
                gram[(j, i)] = v;
            }
        }
    }
    gram
}

fn first_nonpositive_pivot<S: RealScalar>(mat: &DMat<S>) -> Option<(usize, S)> {
    let n = mat.rows;
    let mut a = mat.clone();
    for step in 0..n {
        let p = a[(step, step)].clone();
        if !p.is_positive() {
            return Some((step, p));
        }
        for r in (step + 1)..n {
            let f = a[(r, step)].clone() / p.clone();
            for c in step..n {
                a[(r, c)] = a[(r, c)].clone() - f.clone() * a[(step, c)].clone();
            }
        }
    }
    None
}

/// Positivity test with the Gram matrix as witness.
pub fn is_positive<S: RealScalar>(phi: &Form<S>) -> Result<(bool, DMat<S>), G2Error> {
    if phi.basis().dim() != 7 {
        return Err(G2Error::BadDimension(phi.basis().dim()));
    }
    let gram = positivity_gram(phi);
    Ok((first_nonpositive_pivot(&gram).is_none(), gram))
}

/// The metric induced by a positive 3-form, normalized so `|phi|^2 = 7`.
///
/// With `B` the positivity Gram matrix one has `B = 6 g sqrt(det g)`
/// for the normalized metric, hence `g = B / (36 det B)^(1/9)`. On the
/// exact backend the ninth root must exist; pullbacks of the standard
/// form under rational linear maps always satisfy this because `det B`
/// transforms with a ninth power.
pub fn induced_metric<S: RealScalar>(phi: &Form<S>) -> Result<Metric<S>, G2Error> {
    let gram = positivity_gram(phi);
    if let Some((step, pivot)) = first_nonpositive_pivot(&gram) {
        let _ = (step, pivot);
        let witness = (0..gram.rows)
            .map(|i| gram.row(i).iter().map(|x| x.to_f64()).collect())
            .collect();
        return Err(G2Error::NotPositive { witness });
    }
    let det = gram.determinant();
    let scale = (S::from_int(36) * det).nth_root(9)?;
    let g = DMat::from_fn(7, 7, |i, j| gram[(i, j)].clone() / scale.clone());
    Ok(Metric::new(g)?)
}

/// `Theta(phi) = *_phi phi` for a positive 3-form.
pub fn theta_of<S: RealScalar>(phi: &Form<S>, metric: &Metric<S>) -> Result<Form<S>, G2Error> {
    Ok(metric.star(phi.basis(), phi)?)
}

/// A positive 3-form together with its induced metric, volume form,
/// `Theta`, and the five type projectors.
#[derive(Debug, Clone)]
pub struct G2Point<S: Scalar> {
    basis: Arc<Basis>,
    phi: Form<S>,
    metric: Metric<S>,
    vol: Form<S>,
    theta: Form<S>,
    proj2_7: DMat<S>,
    proj2_14: DMat<S>,
    proj3_1: DMat<S>,
    proj3_7: DMat<S>,
    proj3_27: DMat<S>,
}

/// Orthogonal projector onto the column span of `m` with respect to the
/// inner product `gram`.
fn span_projector<S: RealScalar>(m: &DMat<S>, gram: &DMat<S>) -> Result<DMat<S>, ExteriorError> {
    let gm = gram.mul(m);
    let core = m.transpose().mul(&gm).inverse()?;
    Ok(m.mul(&core).mul(&gm.transpose()))
}

impl<S: RealScalar> G2Point<S> {
    /// Build the full pointwise structure from a positive 3-form.
    pub fn induce(phi: &Form<S>) -> Result<Self, G2Error> {
        if phi.basis().dim() != 7 {
            return Err(G2Error::BadDimension(phi.basis().dim()));
        }
        let basis = phi.basis().clone();
        let metric = induced_metric(phi)?;
        let vol = metric.volume_form(&basis)?;
        let theta = metric.star(&basis, phi)?;

        // 2-form projectors from the quadratic form b ^ c ^ phi, whose
        // eigenvalues relative to the metric are +2 on the 7-part and -1
        // on the 14-part.
        let t2 = IndexTable::new(7, 2);
        let or = S::from_int(basis.orientation() as i64);
        let wedge_form = DMat::from_fn(t2.len(), t2.len(), |a, b| {
            let ma = t2.masks[a];
            let mb = t2.masks[b];
            if ma & mb != 0 {
                return S::zero();
            }
            let sign = crate::exterior::merge_sign(ma, mb);
            let rest = phi.coeffs()[IndexTable::new(7, 3).position(!(ma | mb) & 0x7f)].clone();
            let sign2 = crate::exterior::merge_sign(ma | mb, !(ma | mb) & 0x7f);
            let v = rest * or.clone();
            if sign * sign2 > 0 {
                v
            } else {
                -v
            }
        });
        let g2m = metric.form_gram(2);
        let vol_c = metric.volume_coeff(&basis)?;
        let t_op = g2m.inverse()?.mul(&wedge_form).scale(&(S::one() / vol_c));
        let third = S::from_ratio(1, 3);
        let id21 = DMat::identity(t2.len());
        let proj2_7 = t_op.add(&id21).scale(&third);
        let proj2_14 = id21.scale(&S::from_int(2)).sub(&t_op).scale(&third);

        // 3-form projectors: span of phi; image of v -> i_v(Theta);
        // remainder.
        let t3 = IndexTable::new(7, 3);
        let g3m = metric.form_gram(3);
        let phi_vec = DMat::from_fn(t3.len(), 1, |i, _| phi.coeffs()[i].clone());
        let nsq = metric.norm_sq(phi);
        let proj3_1 = phi_vec
            .mul(&g3m.mul(&phi_vec).transpose())
            .scale(&(S::one() / nsq));
        let mut cols: Vec<Vec<S>> = Vec::with_capacity(7);
        for i in 0..7 {
            let mut v = vec![S::zero(); 7];
            v[i] = S::one();
            cols.push(theta.interior(&v)?.coeffs().to_vec());
        }
        let image = DMat::from_fn(t3.len(), 7, |i, j| cols[j][i].clone());
        let proj3_7 = span_projector(&image, &g3m)?;
        let proj3_27 = DMat::identity(t3.len()).sub(&proj3_1).sub(&proj3_7);

        Ok(G2Point {
            basis,
            phi: phi.clone(),
            metric,
            vol,
            theta,
            proj2_7,
            proj2_14,
            proj3_1,
            proj3_7,
            proj3_27,
        })
    }

    pub fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    pub fn phi(&self) -> &Form<S> {
        &self.phi
    }

    pub fn metric(&self) -> &Metric<S> {
        &self.metric
    }

    pub fn vol(&self) -> &Form<S> {
        &self.vol
    }

    pub fn theta(&self) -> &Form<S> {
        &self.theta
    }

    pub fn proj2_7(&self) -> &DMat<S> {
        &self.proj2_7
    }

    pub fn proj2_14(&self) -> &DMat<S> {
        &self.proj2_14
    }

    pub fn proj3_1(&self) -> &DMat<S> {
        &self.proj3_1
    }

    pub fn proj3_7(&self) -> &DMat<S> {
        &self.proj3_7
    }

    pub fn proj3_27(&self) -> &DMat<S> {
        &self.proj3_27
    }

    fn apply(&self, m: &DMat<S>, f: &Form<S>) -> Form<S> {
        Form::from_coeffs(&self.basis, f.degree(), m.mul_vec(f.coeffs()))
    }

    /// Split a 2-form into its 7- and 14-type components.
    pub fn project2(&self, beta: &Form<S>) -> (Form<S>, Form<S>) {
        assert_eq!(beta.degree(), 2);
        (
            self.apply(&self.proj2_7, beta),
            self.apply(&self.proj2_14, beta),
        )
    }

    /// Split a 3-form into its 1-, 7- and 27-type components.
    pub fn project3(&self, gamma: &Form<S>) -> (Form<S>, Form<S>, Form<S>) {
        assert_eq!(gamma.degree(), 3);
        (
            self.apply(&self.proj3_1, gamma),
            self.apply(&self.proj3_7, gamma),
            self.apply(&self.proj3_27, gamma),
        )
    }

    /// The isomorphism `chi(eta) = *_phi(eta ^ phi)` onto the 7-type 3-forms.
    pub fn chi(&self, eta: &Form<S>) -> Result<Form<S>, G2Error> {
        assert_eq!(eta.degree(), 1);
        let w = eta.wedge(&self.phi)?;
        Ok(self.metric.star(&self.basis, &w)?)
    }

    /// Matrix of the bundle map acting as 4/3, +1, -1 on the three 3-form types.
    pub fn s_map(&self) -> DMat<S> {
        let four_thirds = S::from_ratio(4, 3);
        self.proj3_1
            .scale(&four_thirds)
            .add(&self.proj3_7)
            .sub(&self.proj3_27)
    }

    /// Directional derivative of `phi -> Theta(phi)`: `*_phi S(dphi)`.
    pub fn dtheta_linearized(&self, dphi: &Form<S>) -> Result<Form<S>, G2Error> {
        assert_eq!(dphi.degree(), 3);
        let s = self.apply(&self.s_map(), dphi);
        Ok(self.metric.star(&self.basis, &s)?)
    }

    /// Pointwise second-variation coefficient
    /// `q(dphi) = 4/3 |d1|^2 + |d7|^2 - |d27|^2`.
    pub fn vol_q(&self, dphi: &Form<S>) -> S {
        let (p1, p7, p27) = self.project3(dphi);
        S::from_ratio(4, 3) * self.metric.norm_sq(&p1) + self.metric.norm_sq(&p7)
            - self.metric.norm_sq(&p27)
    }

    /// Export the five projectors as row-major JSON matrices.
    pub fn projectors_json(&self, to_value: impl Fn(&S) -> serde_json::Value) -> serde_json::Value {
        let dump = |m: &DMat<S>| -> serde_json::Value {
            let rows: Vec<serde_json::Value> = (0..m.rows)
                .map(|i| serde_json::Value::Array(m.row(i).iter().map(&to_value).collect()))
                .collect();
            serde_json::Value::Array(rows)
        };
        serde_json::json!({
            "proj2_7": dump(&self.proj2_7),
            "proj2_14": dump(&self.proj2_14),
            "proj3_1": dump(&self.proj3_1),
            "proj3_7": dump(&self.proj3_7),
            "proj3_27": dump(&self.proj3_27),
        })
    }
}

/// Boundary data at a point of a face with outward unit normal `nu`:
/// the 2-form `omega = i_nu(phi)`, the pulled-back 3-form `rho`, the
/// isomorphism `chi6` onto the 6-part, and the projectors of the
/// splitting of boundary 2-forms into 1-, 6- and 8-parts.
#[derive(Debug, Clone)]
pub struct BoundaryFrame<S: Scalar> {
    ambient: Arc<Basis>,
    boundary: Arc<Basis>,
    normal: Vec<S>,
    normal_axis: usize,
    nu_star: Form<S>,
    omega: Form<S>,
    rho: Form<S>,
    metric6: Metric<S>,
    chi6: DMat<S>,
    proj_1: DMat<S>,
    proj_6: DMat<S>,
    proj_8: DMat<S>,
}

impl<S: RealScalar> BoundaryFrame<S> {
    /// Build the frame at `point` for an outward normal along a coordinate
    /// axis. The metric must split orthogonally against that axis.
    pub fn new(point: &G2Point<S>, normal: &[S]) -> Result<Self, G2Error> {
        let ambient = point.basis().clone();
        let n = ambient.dim();
        assert_eq!(normal.len(), n);
        let axis_entries: Vec<usize> = (0..n).filter(|&i| !normal[i].is_zero()).collect();
        if axis_entries.len() != 1 {
            return Err(G2Error::BadNormal);
        }
        let axis = axis_entries[0];
        let g = point.metric();
        // unit length and orthogonal splitting
        let mut nsq = S::zero();
        for i in 0..n {
            for j in 0..n {
                nsq = nsq + normal[i].clone() * g.gram()[(i, j)].clone() * normal[j].clone();
            }
        }
        if nsq != S::one() {
            return Err(G2Error::BadNormal);
        }
        for j in 0..n {
            if j != axis && !g.gram()[(axis, j)].is_zero() {
                return Err(G2Error::BadNormal);
            }
        }
        let axis_sign = normal[axis].clone();

        // boundary basis: remaining labels, oriented by i_nu(volume)
        let labels: Vec<&str> = ambient
            .labels()
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != axis)
            .map(|(_, l)| l.as_str())
            .collect();
        let sign_pos = if axis % 2 == 0 { 1 } else { -1 };
        let orient = ambient.orientation()
            * sign_pos
            * if axis_sign.is_positive() { 1 } else { -1 };
        let boundary = Basis::new(&labels, orient);

        let nu_star = Form::from_coeffs(&ambient, 1, g.flat(normal));
        let omega_amb = point.phi().interior(normal)?;
        let omega = omega_amb.restrict_to(&boundary);
        let rho = point.phi().restrict_to(&boundary);

        // induced metric on the boundary coordinates
        let keep: Vec<usize> = (0..n).filter(|&i| i != axis).collect();
        let gram6 = DMat::from_fn(n - 1, n - 1, |i, j| g.gram()[(keep[i], keep[j])].clone());
        let metric6 = Metric::new(gram6)?;

        // chi6( i_v omega ) = i_v rho; columns over the boundary covector basis
        let m = n - 1;
        let omega_map = DMat::from_fn(m, m, |row, col| {
            let mut v = vec![S::zero(); m];
            v[col] = S::one();
            omega.interior(&v).expect("degree 2").coeffs()[row].clone()
        });
        let omega_inv = omega_map.inverse()?;
        let t2b = IndexTable::new(m, 2);
        let chi6 = DMat::from_fn(t2b.len(), m, |row, col| {
            let a: Vec<S> = (0..m).map(|r| omega_inv[(r, col)].clone()).collect();
            rho.interior(&a).expect("degree 3").coeffs()[row].clone()
        });

        let g2b = metric6.form_gram(2);
        let omega_vec = DMat::from_fn(t2b.len(), 1, |i, _| omega.coeffs()[i].clone());
        let proj_1 = omega_vec
            .mul(&g2b.mul(&omega_vec).transpose())
            .scale(&(S::one() / metric6.norm_sq(&omega)));
        let proj_6 = span_projector(&chi6, &g2b)?;
        let proj_8 = DMat::identity(t2b.len()).sub(&proj_1).sub(&proj_6);

        Ok(BoundaryFrame {
            ambient,
            boundary,
            normal: normal.to_vec(),
            normal_axis: axis,
            nu_star,
            omega,
            rho,
            metric6,
            chi6,
            proj_1,
            proj_6,
            proj_8,
        })
    }

    pub fn boundary_basis(&self) -> &Arc<Basis> {
        &self.boundary
    }

    pub fn ambient_basis(&self) -> &Arc<Basis> {
        &self.ambient
    }

    pub fn normal(&self) -> &[S] {
        &self.normal
    }

    pub fn normal_axis(&self) -> usize {
        self.normal_axis
    }

    pub fn nu_star(&self) -> &Form<S> {
        &self.nu_star
    }

    pub fn omega(&self) -> &Form<S> {
        &self.omega
    }

    pub fn rho(&self) -> &Form<S> {
        &self.rho
    }

    pub fn metric6(&self) -> &Metric<S> {
        &self.metric6
    }

    pub fn proj_1(&self) -> &DMat<S> {
        &self.proj_1
    }

    pub fn proj_6(&self) -> &DMat<S> {
        &self.proj_6
    }

    pub fn proj_8(&self) -> &DMat<S> {
        &self.proj_8
    }

    /// Coordinate matrix of `chi6` (boundary 1-forms to boundary 2-forms).
    pub fn chi6_matrix(&self) -> &DMat<S> {
        &self.chi6
    }

    /// Gram matrix `<chi6 e^i, chi6 e^j>`; its determinant certifies
    /// invertibility onto the 6-part.
    pub fn chi6_gram(&self) -> DMat<S> {
        self.chi6
            .transpose()
            .mul(&self.metric6.form_gram(2).mul(&self.chi6))
    }

    pub fn chi6_apply(&self, a: &Form<S>) -> Form<S> {
        assert_eq!(a.degree(), 1);
        Form::from_coeffs(&self.boundary, 2, self.chi6.mul_vec(a.coeffs()))
    }

    /// Exact preimage under `chi6` of a 2-form lying in the 6-part.
    pub fn chi6_invert(&self, b: &Form<S>) -> Result<Form<S>, G2Error> {
        assert_eq!(b.degree(), 2);
        let g2b = self.metric6.form_gram(2);
        let gb = g2b.mul(&self.chi6);
        let core = self.chi6.transpose().mul(&gb).inverse()?;
        let rhs = gb.transpose().mul_vec(b.coeffs());
        Ok(Form::from_coeffs(&self.boundary, 1, core.mul_vec(&rhs)))
    }

    /// Split an ambient 14-type 2-form at this face as
    /// `alpha = theta8 + 2 a ^ nu* - chi6(a)`, returning `(theta8, a)`.
    ///
    /// `tol` bounds the relative residual allowed on the 14-type
    /// membership check (use 0 on the exact backend).
    pub fn split14(
        &self,
        point: &G2Point<S>,
        alpha: &Form<S>,
        tol: f64,
    ) -> Result<(Form<S>, Form<S>), G2Error> {
        assert_eq!(alpha.degree(), 2);
        let projected = Form::from_coeffs(&self.ambient, 2, point.proj2_14().mul_vec(alpha.coeffs()));
        let diff = projected.sub(alpha);
        let scale = 1.0_f64.max(
            alpha
                .coeffs()
                .iter()
                .map(|c| c.to_f64().abs())
                .fold(0.0, f64::max),
        );
        let residual = diff
            .coeffs()
            .iter()
            .map(|c| c.to_f64().abs())
            .fold(0.0, f64::max)
            / scale;
        if residual > tol {
            return Err(G2Error::Not14Type { residual });
        }
        // the nu*-component recovers a: i_nu(alpha) = -2a
        let half = S::from_ratio(-1, 2);
        let a_amb = alpha.interior(&self.normal)?.scale(&half);
        let a = a_amb.restrict_to(&self.boundary);
        // tangential part is theta8 - chi6(a)
        let theta8 = alpha.restrict_to(&self.boundary).add(&self.chi6_apply(&a));
        Ok((theta8, a))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;

    fn r(n: i64) -> Rat {
        Rat::from_int(n)
    }

    fn rr(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    fn std_point() -> G2Point<Rat> {
        let b = Basis::standard7();
        G2Point::induce(&phi_std(&b)).unwrap()
    }

    #[test]
    fn standard_form_is_positive_and_euclidean() {
        let b = Basis::standard7();
        let phi: Form<Rat> = phi_std(&b);
        let (pos, gram) = is_positive(&phi).unwrap();
        assert!(pos);
        assert_eq!(gram, DMat::identity(7).scale(&r(6)));
        assert!(!is_positive(&phi.neg()).unwrap().0);

        let p = std_point();
        assert_eq!(p.metric().gram(), &DMat::identity(7));
        assert_eq!(p.vol().coeff(&[0, 1, 2, 3, 4, 5, 6]), r(1));
        assert_eq!(p.metric().norm_sq(p.phi()), r(7));
    }

    #[test]
    fn scaled_pullback_stays_positive() {
        let b = Basis::standard7();
        let phi: Form<Rat> = phi_std(&b);
        let mut a = DMat::identity(7);
        a[(0, 0)] = r(2);
        let pulled = phi.pullback(&a);
        assert!(is_positive(&pulled).unwrap().0);
        // det B scales by a ninth power, so the metric stays rational
        let g = induced_metric(&pulled).unwrap();
        assert_eq!(g.gram()[(1, 1)], g.gram()[(2, 2)]);
    }

    /// Elementary complement-and-sign star for the identity metric,
    /// independent of the Gram-minor implementation.
    fn star_oracle(f: &Form<Rat>) -> Form<Rat> {
        let basis = f.basis().clone();
        let n = basis.dim();
        let table = f.table();
        let mut out = Form::zero(&basis, n - f.degree());
        let full: u8 = ((1u16 << n) - 1) as u8;
        let or = r(basis.orientation() as i64);
        for (pos, &mask) in table.masks.iter().enumerate() {
            if f.coeffs()[pos].is_zero() {
                continue;
            }
            let comp = full & !mask;
            let sign = crate::exterior::merge_sign(mask, comp);
            let tup = IndexTable::indices(comp);
            let val = f.coeffs()[pos].clone() * or.clone();
            let val = if sign > 0 { val } else { -val };
            let prev = out.coeff(&tup);
            out.set_coeff(&tup, prev + val);
        }
        out
    }

    #[test]
    fn theta_closed_form() {
        let b = Basis::standard7();
        let p = std_point();
        // frozen closed form: 1/2 omega^omega - Re(dz1 dz2 dz3) ^ dt
        let w: Form<Rat> = omega_std(&b);
        let half = rr(1, 2);
        let dt = Form::basis_form(&b, &[6]);
        let expected = w
            .wedge(&w)
            .unwrap()
            .scale(&half)
            .sub(&re_dz_std(&b).wedge(&dt).unwrap());
        assert_eq!(p.theta(), &expected);
        // and against the elementary star oracle
        assert_eq!(star_oracle(p.phi()), expected);
    }

    #[test]
    fn projector_algebra_and_ranks() {
        let p = std_point();
        let id21 = DMat::identity(21);
        let id35 = DMat::identity(35);
        assert_eq!(p.proj2_7().add(p.proj2_14()), id21);
        assert_eq!(p.proj3_1().add(p.proj3_7()).add(p.proj3_27()), id35);
        for m in [p.proj2_7(), p.proj2_14()] {
            assert_eq!(m.mul(m), *m);
        }
        assert!(p.proj2_7().mul(p.proj2_14()).is_zero());
        for m in [p.proj3_1(), p.proj3_7(), p.proj3_27()] {
            assert_eq!(m.mul(m), *m);
        }
        assert!(p.proj3_1().mul(p.proj3_7()).is_zero());
        assert!(p.proj3_7().mul(p.proj3_27()).is_zero());
        assert_eq!(p.proj2_7().rank(), 7);
        assert_eq!(p.proj2_14().rank(), 14);
        assert_eq!(p.proj3_1().rank(), 1);
        assert_eq!(p.proj3_7().rank(), 7);
        assert_eq!(p.proj3_27().rank(), 27);
    }

    #[test]
    fn two_form_eigenvalue_identities() {
        // interior products of phi are pure 7-type; omega wedge identities
        let b = Basis::standard7();
        let p = std_point();
        for i in 0..7 {
            let mut v = vec![r(0); 7];
            v[i] = r(1);
            let beta = p.phi().interior(&v).unwrap();
            let (_, b14) = p.project2(&beta);
            assert!(b14.is_zero());
        }
        let w: Form<Rat> = omega_std(&b);
        let www = w.wedge(&w).unwrap().wedge(p.phi()).unwrap();
        assert_eq!(www, p.vol().scale(&r(6)));

        let mut a14 = Form::zero(&b, 2);
        a14.set_coeff(&[0, 1], r(1));
        a14.set_coeff(&[2, 3], r(-1));
        let (a7, _) = p.project2(&a14);
        assert!(a7.is_zero());
        let ww = a14.wedge(&a14).unwrap().wedge(p.phi()).unwrap();
        assert_eq!(ww, p.vol().scale(&r(-2)));
    }

    #[test]
    fn three_form_projections() {
        let p = std_point();
        let (g1, g7, g27) = p.project3(p.phi());
        assert_eq!(&g1, p.phi());
        assert!(g7.is_zero() && g27.is_zero());
        for i in 0..7 {
            let mut v = vec![r(0); 7];
            v[i] = r(1);
            let f = p.theta().interior(&v).unwrap();
            let (h1, h7, h27) = p.project3(&f);
            assert!(h1.is_zero() && h27.is_zero());
            assert_eq!(h7, f);
        }
    }

    #[test]
    fn chi_normalization() {
        let b = Basis::standard7();
        let p = std_point();
        for i in 0..7 {
            let eta: Form<Rat> = Form::basis_form(&b, &[i]);
            let c = p.chi(&eta).unwrap();
            assert_eq!(p.metric().norm_sq(&c), r(4));
            let (_, _, c27) = p.project3(&c);
            assert!(c27.is_zero());
        }
    }

    #[test]
    fn s_map_spectrum() {
        let p = std_point();
        let s = p.s_map();
        // symmetric with respect to the 3-form inner product
        let g3 = p.metric().form_gram(3);
        assert_eq!(s.transpose().mul(&g3), g3.mul(&s));
        // acts by the stated scalars on each summand
        assert_eq!(s.mul(p.proj3_1()), p.proj3_1().scale(&rr(4, 3)));
        assert_eq!(s.mul(p.proj3_7()), p.proj3_7().clone());
        assert_eq!(s.mul(p.proj3_27()), p.proj3_27().neg());
    }

    #[test]
    fn dtheta_branches() {
        let b = Basis::standard7();
        let p = std_point();
        let c = rr(5, 3);
        let lin = p.dtheta_linearized(&p.phi().scale(&c)).unwrap();
        assert_eq!(lin, p.theta().scale(&(rr(4, 3) * c)));

        // a 27-type direction: any symmetric traceless perturbation; take
        // the 27-component of a random 3-form
        let mut gamma = Form::zero(&b, 3);
        gamma.set_coeff(&[0, 1, 2], r(1));
        gamma.set_coeff(&[1, 4, 6], rr(2, 3));
        let (_, _, g27) = p.project3(&gamma);
        let lin27 = p.dtheta_linearized(&g27).unwrap();
        let expected = p.metric().star(&b, &g27).unwrap().neg();
        assert_eq!(lin27, expected);
    }

    #[test]
    fn vol_q_branches() {
        let b = Basis::standard7();
        let p = std_point();
        assert_eq!(p.vol_q(p.phi()), rr(28, 3));
        let mut gamma = Form::zero(&b, 3);
        gamma.set_coeff(&[0, 1, 2], r(1));
        let (_, _, g27) = p.project3(&gamma);
        let q = p.vol_q(&g27);
        assert_eq!(q, -p.metric().norm_sq(&g27));
    }

    #[test]
    fn equivariance_under_pullback() {
        use rand::Rng;
        use rand::SeedableRng;
        let b = Basis::standard7();
        let phi: Form<Rat> = phi_std(&b);
        let base = G2Point::induce(&phi).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(02_1991);
        for _ in 0..5 {
            let mut a: DMat<Rat> = DMat::identity(7);
            for i in 0..7 {
                for j in 0..7 {
                    if rng.gen_bool(0.3) {
                        let num = rng.gen_range(-2i64..=2);
                        a[(i, j)] = a[(i, j)].clone() + Rat::new(num, 8);
                    }
                }
            }
            if !a.determinant().is_positive() {
                continue;
            }
            let pulled = phi.pullback(&a);
            let point = G2Point::induce(&pulled).unwrap();
            // pullback matrix on 2-form coefficients
            let t2 = IndexTable::new(7, 2);
            let pmat = DMat::from_fn(t2.len(), t2.len(), |i, j| {
                let cols = IndexTable::indices(t2.masks[i]);
                let rows = IndexTable::indices(t2.masks[j]);
                DMat::from_fn(2, 2, |r_, c_| a[(rows[r_], cols[c_])].clone()).determinant()
            });
            assert_eq!(point.proj2_7().mul(&pmat), pmat.mul(base.proj2_7()));
        }
    }

    #[test]
    fn projector_json_export() {
        let p = std_point();
        let json = p.projectors_json(|r| {
            serde_json::json!({
                "num": r.numer_i64().unwrap(),
                "den": r.denom_i64().unwrap(),
            })
        });
        let rows = json["proj2_7"].as_array().unwrap();
        assert_eq!(rows.len(), 21);
        assert_eq!(rows[0].as_array().unwrap().len(), 21);
        assert_eq!(json["proj3_27"].as_array().unwrap().len(), 35);
        // row-major: entry (0,0) of the 2-form 7-projector is 1/3
        assert_eq!(rows[0][0]["num"], 1);
        assert_eq!(rows[0][0]["den"], 3);
    }

    #[test]
    fn boundary_frame_top_face() {
        let p = std_point();
        let mut nu = vec![r(0); 7];
        nu[6] = r(1);
        let frame = BoundaryFrame::new(&p, &nu).unwrap();
        assert_eq!(frame.omega(), &omega_std::<Rat>(frame.boundary_basis()));
        assert_eq!(frame.boundary_basis().orientation(), 1);

        // chi6 closed-form values
        let bb = frame.boundary_basis();
        let dx1: Form<Rat> = Form::basis_form(bb, &[0]);
        let c = frame.chi6_apply(&dx1);
        let mut expected = Form::zero(bb, 2);
        expected.set_coeff(&[3, 5], r(1));
        expected.set_coeff(&[2, 4], r(-1));
        assert_eq!(c, expected);

        let dy1: Form<Rat> = Form::basis_form(bb, &[1]);
        let c2 = frame.chi6_apply(&dy1);
        let mut expected2 = Form::zero(bb, 2);
        expected2.set_coeff(&[3, 4], r(1));
        expected2.set_coeff(&[2, 5], r(1));
        assert_eq!(c2, expected2);

        // invertibility: Gram determinant of chi6 is 2^6
        assert_eq!(frame.chi6_gram().determinant(), r(64));
        assert_eq!(frame.chi6_invert(&c).unwrap(), dx1);

        // projector resolution on boundary 2-forms
        let id15 = DMat::identity(15);
        assert_eq!(frame.proj_1().add(frame.proj_6()).add(frame.proj_8()), id15);
        assert_eq!(frame.proj_6().rank(), 6);
        assert_eq!(frame.proj_8().rank(), 8);
        assert_eq!(frame.proj_1().rank(), 1);
    }

    #[test]
    fn bottom_face_flips() {
        let p = std_point();
        // ambient basis only needed to build the point above
        let mut nu = vec![r(0); 7];
        nu[6] = r(-1);
        let bottom = BoundaryFrame::new(&p, &nu).unwrap();
        nu[6] = r(1);
        let top = BoundaryFrame::new(&p, &nu).unwrap();
        assert_eq!(
            bottom.omega().coeffs().to_vec(),
            top.omega().neg().coeffs().to_vec()
        );
        assert_eq!(bottom.boundary_basis().orientation(), -1);
        let dx1: Form<Rat> = Form::basis_form(top.boundary_basis(), &[0]);
        let c_top = top.chi6_apply(&dx1);
        let dx1b: Form<Rat> = Form::basis_form(bottom.boundary_basis(), &[0]);
        let c_bot = bottom.chi6_apply(&dx1b);
        assert_eq!(c_bot.coeffs().to_vec(), c_top.neg().coeffs().to_vec());
    }

    #[test]
    fn split14_at_top_face() {
        let b = Basis::standard7();
        let p = std_point();
        let mut nu = vec![r(0); 7];
        nu[6] = r(1);
        let frame = BoundaryFrame::new(&p, &nu).unwrap();
        let bb = frame.boundary_basis().clone();

        // alpha = 2 dx1 ^ nu* - chi6(dx1) is pure 14-type
        let dx1: Form<Rat> = Form::basis_form(&bb, &[0]);
        let a_amb = dx1.include_into(&b);
        let alpha = a_amb
            .wedge(frame.nu_star())
            .unwrap()
            .scale(&r(2))
            .sub(&frame.chi6_apply(&dx1).include_into(&b));
        let (_, a14) = p.project2(&alpha);
        assert_eq!(a14, alpha);
        let (theta8, a6) = frame.split14(&p, &alpha, 0.0).unwrap();
        assert!(theta8.is_zero());
        assert_eq!(a6, dx1);

        // a tangential omega-orthogonal (1,1) form is pure 8-part
        let mut t8 = Form::zero(&bb, 2);
        t8.set_coeff(&[0, 1], r(1));
        t8.set_coeff(&[2, 3], r(-1));
        let amb8 = t8.include_into(&b);
        let (_, amb8_14) = p.project2(&amb8);
        assert_eq!(amb8_14, amb8);
        let (theta8b, a6b) = frame.split14(&p, &amb8, 0.0).unwrap();
        assert!(a6b.is_zero());
        assert_eq!(theta8b, t8);

        // companion 7-type combination from the other splitting
        let dy2: Form<Rat> = Form::basis_form(&bb, &[3]);
        let beta = dy2
            .include_into(&b)
            .wedge(frame.nu_star())
            .unwrap()
            .add(&frame.chi6_apply(&dy2).include_into(&b));
        let (b7, _) = p.project2(&beta);
        assert_eq!(b7, beta);

        // non-14 input is rejected
        let err = frame.split14(&p, &beta, 0.0).unwrap_err();
        assert!(matches!(err, G2Error::Not14Type { .. }));
    }
}
