//! Exterior algebra of differential forms on an oriented inner-product
//! space of dimension at most 7.
//!
//! Forms are stored densely over the lexicographically ordered strictly
//! increasing index tuples of their degree, so matrix representations of
//! operators are reproducible across scalar backends. Index tuples are
//! encoded as bitmasks over the basis labels; all signs reduce to
//! transposition counts between masks.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::ExteriorError;
use crate::linalg::DMat;
use crate::scalar::{RealScalar, Scalar};

/// An ordered, oriented coordinate basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basis {
    labels: Vec<String>,
    orientation: i8,
}

impl Basis {
    pub fn new(labels: &[&str], orientation: i8) -> Arc<Self> {
        assert!(matches!(orientation, 1 | -1), "orientation must be +1 or -1");
        assert!(!labels.is_empty() && labels.len() <= 7);
        let set: std::collections::BTreeSet<_> = labels.iter().collect();
        assert_eq!(set.len(), labels.len(), "labels must be distinct");
        Arc::new(Basis {
            labels: labels.iter().map(|s| s.to_string()).collect(),
            orientation,
        })
    }

    /// Standard 7-dimensional model basis `x1,y1,x2,y2,x3,y3,t`, with
    /// `dx1 dy1 dx2 dy2 dx3 dy3 dt` positively oriented.
    pub fn standard7() -> Arc<Self> {
        Basis::new(&["x1", "y1", "x2", "y2", "x3", "y3", "t"], 1)
    }

    /// The boundary model `x1,y1,x2,y2,x3,y3` of the standard slab face.
    pub fn standard6() -> Arc<Self> {
        Basis::new(&["x1", "y1", "x2", "y2", "x3", "y3"], 1)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn orientation(&self) -> i8 {
        self.orientation
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

/// Lexicographically ordered increasing index tuples of length `p` out of
/// `n`, as bitmasks, with the inverse position lookup.
#[derive(Debug, Clone)]
pub struct IndexTable {
    pub n: usize,
    pub p: usize,
    pub masks: Vec<u8>,
    pos: [u16; 128],
}

impl IndexTable {
    pub fn new(n: usize, p: usize) -> Self {
        assert!(n <= 7 && p <= n);
        let mut masks = Vec::new();
        let mut tuple: Vec<usize> = (0..p).collect();
        loop {
            let mask = tuple.iter().fold(0u8, |m, &i| m | (1 << i));
            masks.push(mask);
            if p == 0 {
                break;
            }
            // next lexicographic combination
            let mut i = p;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                if tuple[i] != i + n - p {
                    tuple[i] += 1;
                    for j in i + 1..p {
                        tuple[j] = tuple[j - 1] + 1;
                    }
                    break;
                }
                if i == 0 {
                    tuple.clear();
                    break;
                }
            }
            if tuple.is_empty() {
                break;
            }
        }
        let mut pos = [u16::MAX; 128];
        for (k, &m) in masks.iter().enumerate() {
            pos[m as usize] = k as u16;
        }
        IndexTable { n, p, masks, pos }
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn position(&self, mask: u8) -> usize {
        let p = self.pos[mask as usize];
        debug_assert!(p != u16::MAX, "mask not in table");
        p as usize
    }

    /// Sorted index list of a mask.
    pub fn indices(mask: u8) -> Vec<usize> {
        (0..8).filter(|i| mask & (1 << i) != 0).collect()
    }
}

/// Sign of merging the sorted tuple `a` in front of the sorted tuple `b`.
pub fn merge_sign(a: u8, b: u8) -> i8 {
    debug_assert_eq!(a & b, 0);
    let mut inversions = 0u32;
    let mut bb = b;
    while bb != 0 {
        let j = bb.trailing_zeros();
        inversions += (a >> (j + 1)).count_ones();
        bb &= bb - 1;
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// A degree-`p` alternating form with dense coefficients.
#[derive(Clone, PartialEq)]
pub struct Form<S> {
    basis: Arc<Basis>,
    degree: usize,
    coeffs: Vec<S>,
}

impl<S: Scalar> Form<S> {
    pub fn zero(basis: &Arc<Basis>, degree: usize) -> Self {
        assert!(degree <= basis.dim());
        let len = IndexTable::new(basis.dim(), degree).len();
        Form {
            basis: basis.clone(),
            degree,
            coeffs: vec![S::zero(); len],
        }
    }

    /// Unit basis form `e^{i1} ^ ... ^ e^{ip}` for strictly increasing indices.
    pub fn basis_form(basis: &Arc<Basis>, indices: &[usize]) -> Self {
        assert!(indices.windows(2).all(|w| w[0] < w[1]));
        let mut f = Self::zero(basis, indices.len());
        let mask = indices.iter().fold(0u8, |m, &i| m | (1 << i));
        let pos = f.table().position(mask);
        f.coeffs[pos] = S::one();
        f
    }

    pub fn constant(basis: &Arc<Basis>, value: S) -> Self {
        let mut f = Self::zero(basis, 0);
        f.coeffs[0] = value;
        f
    }

    pub fn from_coeffs(basis: &Arc<Basis>, degree: usize, coeffs: Vec<S>) -> Self {
        let table = IndexTable::new(basis.dim(), degree);
        assert_eq!(coeffs.len(), table.len());
        Form {
            basis: basis.clone(),
            degree,
            coeffs,
        }
    }

    pub fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn table(&self) -> IndexTable {
        IndexTable::new(self.basis.dim(), self.degree)
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [S] {
        &mut self.coeffs
    }

    pub fn coeff(&self, indices: &[usize]) -> S {
        let mask = indices.iter().fold(0u8, |m, &i| m | (1 << i));
        self.coeffs[self.table().position(mask)].clone()
    }

    pub fn set_coeff(&mut self, indices: &[usize], value: S) {
        let mask = indices.iter().fold(0u8, |m, &i| m | (1 << i));
        let pos = self.table().position(mask);
        self.coeffs[pos] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(S::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.basis, other.basis);
        assert_eq!(self.degree, other.degree);
        Form {
            basis: self.basis.clone(),
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Form {
            basis: self.basis.clone(),
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|a| -a.clone()).collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        Form {
            basis: self.basis.clone(),
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|a| c.clone() * a.clone()).collect(),
        }
    }

    fn check_same_basis(&self, other: &Self) -> Result<(), ExteriorError> {
        if self.basis == other.basis {
            Ok(())
        } else {
            Err(ExteriorError::BasisMismatch)
        }
    }

    /// Exterior product.
    pub fn wedge(&self, other: &Self) -> Result<Self, ExteriorError> {
        self.check_same_basis(other)?;
        let n = self.basis.dim();
        if self.degree + other.degree > n {
            return Err(ExteriorError::DegreeOverflow {
                left: self.degree,
                right: other.degree,
                dim: n,
            });
        }
        let ta = self.table();
        let tb = other.table();
        let mut out: Form<S> = Form::zero(&self.basis, self.degree + other.degree);
        let tout = out.table();
        for (ia, &ma) in ta.masks.iter().enumerate() {
            if self.coeffs[ia].is_zero() {
                continue;
            }
            for (ib, &mb) in tb.masks.iter().enumerate() {
                if ma & mb != 0 || other.coeffs[ib].is_zero() {
                    continue;
                }
                let sign = merge_sign(ma, mb);
                let pos = tout.position(ma | mb);
                let term = self.coeffs[ia].clone() * other.coeffs[ib].clone();
                let term = if sign > 0 { term } else { -term };
                out.coeffs[pos] = out.coeffs[pos].clone() + term;
            }
        }
        Ok(out)
    }

    /// Interior product with the vector `v = sum v_i e_i`.
    pub fn interior(&self, v: &[S]) -> Result<Self, ExteriorError> {
        if self.degree == 0 {
            return Err(ExteriorError::InteriorOfScalar);
        }
        assert_eq!(v.len(), self.basis.dim());
        let table = self.table();
        let mut out: Form<S> = Form::zero(&self.basis, self.degree - 1);
        let tout = out.table();
        for (pos, &mask) in table.masks.iter().enumerate() {
            if self.coeffs[pos].is_zero() {
                continue;
            }
            for i in IndexTable::indices(mask) {
                if v[i].is_zero() {
                    continue;
                }
                // sign: (-1)^(position of i within the tuple)
                let before = (mask & ((1u8 << i) - 1)).count_ones();
                let term = v[i].clone() * self.coeffs[pos].clone();
                let term = if before % 2 == 0 { term } else { -term };
                let tpos = tout.position(mask & !(1 << i));
                out.coeffs[tpos] = out.coeffs[tpos].clone() + term;
            }
        }
        Ok(out)
    }

    /// Pullback under the linear map with matrix `a` (columns = images of
    /// basis vectors): coefficients pick up minors of `a`.
    pub fn pullback(&self, a: &DMat<S>) -> Self {
        let n = self.basis.dim();
        assert_eq!((a.rows, a.cols), (n, n));
        let table = self.table();
        let mut out = Form::zero(&self.basis, self.degree);
        for (tpos, &tm) in table.masks.iter().enumerate() {
            let cols = IndexTable::indices(tm);
            let mut acc = S::zero();
            for (spos, &sm) in table.masks.iter().enumerate() {
                if self.coeffs[spos].is_zero() {
                    continue;
                }
                let rows = IndexTable::indices(sm);
                let minor = DMat::from_fn(self.degree, self.degree, |r, c| {
                    a[(rows[r], cols[c])].clone()
                });
                acc = acc + self.coeffs[spos].clone() * minor.determinant();
            }
            out.coeffs[tpos] = acc;
        }
        out
    }

    /// Pull back to the coordinate hyperplane of `sub`, which must consist
    /// of a subset of this basis' labels in order: keeps the coefficients
    /// whose tuples avoid the dropped directions.
    pub fn restrict_to(&self, sub: &Arc<Basis>) -> Self {
        let keep: Vec<usize> = sub
            .labels()
            .iter()
            .map(|l| {
                self.basis
                    .labels()
                    .iter()
                    .position(|m| m == l)
                    .expect("sub-basis label missing from ambient basis")
            })
            .collect();
        let mut out = Form::zero(sub, self.degree);
        let tout = out.table();
        let table = self.table();
        for (opos, &om) in tout.masks.iter().enumerate() {
            // translate the sub mask into an ambient mask
            let mut am = 0u8;
            for i in IndexTable::indices(om) {
                am |= 1 << keep[i];
            }
            out.coeffs[opos] = self.coeffs[table.position(am)].clone();
        }
        out
    }

    /// Include a form from a coordinate hyperplane into the ambient basis.
    pub fn include_into(&self, ambient: &Arc<Basis>) -> Form<S> {
        let keep: Vec<usize> = self
            .basis
            .labels()
            .iter()
            .map(|l| {
                ambient
                    .labels()
                    .iter()
                    .position(|m| m == l)
                    .expect("sub-basis label missing from ambient basis")
            })
            .collect();
        let mut out = Form::zero(ambient, self.degree);
        let tout = out.table();
        let table = self.table();
        for (pos, &m) in table.masks.iter().enumerate() {
            if self.coeffs[pos].is_zero() {
                continue;
            }
            let mut am = 0u8;
            for i in IndexTable::indices(m) {
                am |= 1 << keep[i];
            }
            let opos = tout.position(am);
            out.coeffs[opos] = self.coeffs[pos].clone();
        }
        out
    }

    pub fn map<T: Scalar>(&self, basis: &Arc<Basis>, f: impl Fn(&S) -> T) -> Form<T> {
        Form {
            basis: basis.clone(),
            degree: self.degree,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }
}

impl Form<crate::scalar::Rat> {
    pub fn to_f64(&self) -> Form<f64> {
        let basis = self.basis.clone();
        self.map(&basis, |c| c.to_f64())
    }
}

impl Form<f64> {
    pub fn norm_inf(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

fn fmt_form<S: Scalar>(form: &Form<S>, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let table = form.table();
    let mut first = true;
    for (pos, &mask) in table.masks.iter().enumerate() {
        if form.coeffs[pos].is_zero() {
            continue;
        }
        if !first {
            write!(f, " + ")?;
        }
        first = false;
        write!(f, "({})", form.coeffs[pos])?;
        for i in IndexTable::indices(mask) {
            write!(f, " d{}", form.basis.labels()[i])?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl<S: Scalar> fmt::Debug for Form<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_form(self, f)
    }
}

impl<S: Scalar> fmt::Display for Form<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_form(self, f)
    }
}

/// JSON-facing encoding of a single term.
#[derive(Serialize, Deserialize)]
struct RatTerm {
    idx: Vec<usize>,
    num: i64,
    den: i64,
}

#[derive(Serialize, Deserialize)]
struct FloatTerm {
    idx: Vec<usize>,
    val: f64,
}

#[derive(Serialize, Deserialize)]
struct FormRepr<T> {
    degree: usize,
    terms: Vec<T>,
}

impl Form<crate::scalar::Rat> {
    /// `{"degree": p, "terms": [{"idx": [...], "num": .., "den": ..}]}`
    /// with 1-based indices; zero coefficients are omitted.
    pub fn to_json(&self) -> Result<serde_json::Value, ExteriorError> {
        let table = self.table();
        let mut terms = Vec::new();
        for (pos, &mask) in table.masks.iter().enumerate() {
            let c = &self.coeffs[pos];
            if c.is_zero() {
                continue;
            }
            let num = c.numer_i64().ok_or(ExteriorError::SerializationRange)?;
            let den = c.denom_i64().ok_or(ExteriorError::SerializationRange)?;
            terms.push(RatTerm {
                idx: IndexTable::indices(mask).iter().map(|i| i + 1).collect(),
                num,
                den,
            });
        }
        Ok(serde_json::to_value(FormRepr {
            degree: self.degree,
            terms,
        })
        .expect("form serialization"))
    }

    pub fn from_json(
        basis: &Arc<Basis>,
        value: &serde_json::Value,
    ) -> Result<Self, serde_json::Error> {
        let repr: FormRepr<RatTerm> = serde_json::from_value(value.clone())?;
        let mut form = Form::zero(basis, repr.degree);
        for term in repr.terms {
            let idx: Vec<usize> = term.idx.iter().map(|i| i - 1).collect();
            form.set_coeff(&idx, crate::scalar::Rat::new(term.num, term.den));
        }
        Ok(form)
    }
}

impl Form<f64> {
    pub fn to_json(&self) -> serde_json::Value {
        let table = self.table();
        let mut terms = Vec::new();
        for (pos, &mask) in table.masks.iter().enumerate() {
            let c = self.coeffs[pos];
            if c == 0.0 {
                continue;
            }
            terms.push(FloatTerm {
                idx: IndexTable::indices(mask).iter().map(|i| i + 1).collect(),
                val: c,
            });
        }
        serde_json::to_value(FormRepr {
            degree: self.degree,
            terms,
        })
        .expect("form serialization")
    }
}

/// A positive-definite metric given by its Gram matrix on the basis vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Metric<S: Scalar> {
    gram: DMat<S>,
    inverse: DMat<S>,
}

impl<S: RealScalar> Metric<S> {
    pub fn new(gram: DMat<S>) -> Result<Self, ExteriorError> {
        assert_eq!(gram.rows, gram.cols);
        for i in 0..gram.rows {
            for j in 0..i {
                if gram[(i, j)] != gram[(j, i)] {
                    return Err(ExteriorError::AsymmetricMetric);
                }
            }
        }
        // symmetric Gaussian pivots: all positive iff positive definite
        let n = gram.rows;
        let mut a = gram.clone();
        for step in 0..n {
            let p = a[(step, step)].clone();
            if !p.is_positive() {
                return Err(ExteriorError::DegenerateMetric {
                    pivot: format!("{}", p),
                    step,
                });
            }
            for r in (step + 1)..n {
                let f = a[(r, step)].clone() / p.clone();
                for c in step..n {
                    a[(r, c)] = a[(r, c)].clone() - f.clone() * a[(step, c)].clone();
                }
            }
        }
        let inverse = gram.inverse()?;
        Ok(Metric { gram, inverse })
    }

    pub fn identity(n: usize) -> Self {
        Metric {
            gram: DMat::identity(n),
            inverse: DMat::identity(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.gram.rows
    }

    pub fn gram(&self) -> &DMat<S> {
        &self.gram
    }

    pub fn inverse_gram(&self) -> &DMat<S> {
        &self.inverse
    }

    /// Gram matrix induced on degree-`p` forms: minors of the inverse Gram.
    pub fn form_gram(&self, p: usize) -> DMat<S> {
        let table = IndexTable::new(self.dim(), p);
        DMat::from_fn(table.len(), table.len(), |a, b| {
            let rows = IndexTable::indices(table.masks[a]);
            let cols = IndexTable::indices(table.masks[b]);
            DMat::from_fn(p, p, |r, c| self.inverse[(rows[r], cols[c])].clone()).determinant()
        })
    }

    /// Metric dual of a vector: the 1-form `g(v, .)`.
    pub fn flat(&self, v: &[S]) -> Vec<S> {
        self.gram.mul_vec(v)
    }

    /// Metric dual of a 1-form: the vector `g^{-1} a`.
    pub fn sharp(&self, a: &[S]) -> Vec<S> {
        self.inverse.mul_vec(a)
    }

    /// Inner product of equal-degree forms.
    pub fn inner(&self, a: &Form<S>, b: &Form<S>) -> Result<S, ExteriorError> {
        if a.degree() != b.degree() {
            return Err(ExteriorError::DegreeMismatch {
                expected: a.degree(),
                got: b.degree(),
            });
        }
        let g = self.form_gram(a.degree());
        let gb = g.mul_vec(b.coeffs());
        let mut acc = S::zero();
        for (x, y) in a.coeffs().iter().zip(gb) {
            acc = acc + x.clone() * y;
        }
        Ok(acc)
    }

    pub fn norm_sq(&self, a: &Form<S>) -> S {
        self.inner(a, a).expect("equal degrees")
    }

    /// Scalar coefficient of the positively oriented volume form on the top
    /// basis tuple: `orientation * sqrt(det g)`.
    pub fn volume_coeff(&self, basis: &Basis) -> Result<S, ExteriorError> {
        let det = self.gram.determinant();
        let root = det.sqrt()?;
        Ok(if basis.orientation() > 0 { root } else { -root })
    }

    pub fn volume_form(&self, basis: &Arc<Basis>) -> Result<Form<S>, ExteriorError> {
        let mut vol = Form::zero(basis, basis.dim());
        let c = self.volume_coeff(basis)?;
        vol.coeffs_mut()[0] = c;
        Ok(vol)
    }

    /// Hodge star: the unique form with `a ^ *b = <a, b> vol`.
    pub fn star(&self, basis: &Arc<Basis>, b: &Form<S>) -> Result<Form<S>, ExteriorError> {
        let n = basis.dim();
        let p = b.degree();
        let table = IndexTable::new(n, p);
        let vol = self.volume_coeff(basis)?;
        let g = self.form_gram(p);
        let paired = g.mul_vec(b.coeffs()); // <e^I, b> per tuple I
        let mut out = Form::zero(basis, n - p);
        let tout = out.table();
        let full: u8 = ((1u16 << n) - 1) as u8;
        for (pos, &mask) in table.masks.iter().enumerate() {
            let comp = full & !mask;
            let sign = merge_sign(mask, comp);
            let val = vol.clone() * paired[pos].clone();
            let val = if sign > 0 { val } else { -val };
            let opos = tout.position(comp);
            out.coeffs_mut()[opos] = val;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;
    use proptest::prelude::*;

    fn r(n: i64) -> Rat {
        Rat::from_int(n)
    }

    fn std7() -> Arc<Basis> {
        Basis::standard7()
    }

    /// The standard symplectic form on the model coordinates.
    fn omega(basis: &Arc<Basis>) -> Form<Rat> {
        let mut w = Form::zero(basis, 2);
        w.set_coeff(&[0, 1], r(1));
        w.set_coeff(&[2, 3], r(1));
        w.set_coeff(&[4, 5], r(1));
        w
    }

    #[test]
    fn lex_table_order() {
        let t = IndexTable::new(4, 2);
        let tuples: Vec<Vec<usize>> = t.masks.iter().map(|&m| IndexTable::indices(m)).collect();
        assert_eq!(
            tuples,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
    }

    #[test]
    fn wedge_adjacent_indices() {
        let b = std7();
        let dx1: Form<Rat> = Form::basis_form(&b, &[0]);
        let dy1 = Form::basis_form(&b, &[1]);
        let w = dx1.wedge(&dy1).unwrap();
        assert_eq!(w.coeff(&[0, 1]), r(1));
        // alternation
        assert!(dx1.wedge(&dx1).unwrap().is_zero());
    }

    #[test]
    fn omega_cubed() {
        let b = std7();
        let w = omega(&b);
        let w3 = w.wedge(&w).unwrap().wedge(&w).unwrap();
        let mut expected = Form::zero(&b, 6);
        expected.set_coeff(&[0, 1, 2, 3, 4, 5], r(6));
        assert_eq!(w3, expected);
    }

    #[test]
    fn wedge_degree_overflow_errors() {
        let b = std7();
        let w = omega(&b);
        let w3 = w.wedge(&w).unwrap().wedge(&w).unwrap();
        let err = w3.wedge(&w3).unwrap_err();
        assert!(matches!(err, ExteriorError::DegreeOverflow { .. }));
    }

    #[test]
    fn interior_basics() {
        let b = std7();
        let mut v = vec![r(0); 7];
        v[1] = r(1); // dual to y1
        let dx1dy1 = Form::basis_form(&b, &[0, 1]);
        let res = dx1dy1.interior(&v).unwrap();
        // i_{e_{y1}} (dx1 ^ dy1) = -dx1
        assert_eq!(res.coeff(&[0]), r(-1));

        let mut e0 = vec![r(0); 7];
        e0[0] = r(1);
        assert_eq!(dx1dy1.interior(&e0).unwrap().coeff(&[1]), r(1));

        let c = Form::constant(&b, r(3));
        assert!(matches!(
            c.interior(&e0).unwrap_err(),
            ExteriorError::InteriorOfScalar
        ));
    }

    #[test]
    fn star_euclidean_basics() {
        let b = std7();
        let g = Metric::<Rat>::identity(7);
        let one = Form::constant(&b, r(1));
        let vol = g.star(&b, &one).unwrap();
        assert_eq!(vol.coeff(&[0, 1, 2, 3, 4, 5, 6]), r(1));
        // ** = +1 on 3-forms in dimension 7
        let f = Form::basis_form(&b, &[0, 2, 5]);
        let ss = g.star(&b, &g.star(&b, &f).unwrap()).unwrap();
        assert_eq!(ss, f);
    }

    #[test]
    fn inner_products() {
        let b = std7();
        let g = Metric::<Rat>::identity(7);
        let w = omega(&b);
        assert_eq!(g.norm_sq(&w), r(3));
        let a = Form::basis_form(&b, &[0, 1]);
        let c = Form::basis_form(&b, &[2, 3]);
        assert_eq!(g.inner(&a, &c).unwrap(), r(0));
        let one = Form::constant(&b, r(1));
        assert!(g.inner(&a, &one).is_err());
    }

    #[test]
    fn metric_rejects_indefinite() {
        let gram = DMat::from_rows(vec![vec![r(1), r(2)], vec![r(2), r(1)]]);
        assert!(matches!(
            Metric::new(gram).unwrap_err(),
            ExteriorError::DegenerateMetric { .. }
        ));
    }

    #[test]
    fn json_round_trip() {
        let b = std7();
        let mut f = Form::zero(&b, 2);
        f.set_coeff(&[0, 3], Rat::new(-3, 4));
        let v = f.to_json().unwrap();
        assert_eq!(v["terms"][0]["idx"], serde_json::json!([1, 4]));
        let back = Form::from_json(&b, &v).unwrap();
        assert_eq!(back, f);

        let g = f.to_f64();
        let fv = g.to_json();
        assert_eq!(fv["terms"][0]["val"], serde_json::json!(-0.75));
    }

    // small random rational forms for the algebraic laws
    fn arb_form(degree: usize) -> impl Strategy<Value = Form<Rat>> {
        let len = IndexTable::new(7, degree).len();
        proptest::collection::vec((-8i64..=8, 1i64..=8), len).prop_map(move |coef| {
            let b = std7();
            Form::from_coeffs(
                &b,
                degree,
                coef.into_iter().map(|(n, d)| Rat::new(n, d)).collect(),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn wedge_graded_commutativity(a in arb_form(2), c in arb_form(3)) {
            let ac = a.wedge(&c).unwrap();
            let ca = c.wedge(&a).unwrap();
            // p*q = 6 even: a^c = c^a
            prop_assert_eq!(ac, ca);
        }

        #[test]
        fn wedge_anticommutes_odd(a in arb_form(1), c in arb_form(3)) {
            let ac = a.wedge(&c).unwrap();
            let ca = c.wedge(&a).unwrap();
            prop_assert_eq!(ac, ca.neg());
        }

        #[test]
        fn interior_leibniz(a in arb_form(2), c in arb_form(2),
                            v in proptest::collection::vec((-4i64..=4, 1i64..=4), 7)) {
            let v: Vec<Rat> = v.into_iter().map(|(n, d)| Rat::new(n, d)).collect();
            let lhs = a.wedge(&c).unwrap().interior(&v).unwrap();
            let rhs = a.interior(&v).unwrap().wedge(&c).unwrap()
                .add(&a.wedge(&c.interior(&v).unwrap()).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn interior_squares_to_zero(a in arb_form(3),
                                    v in proptest::collection::vec((-4i64..=4, 1i64..=4), 7)) {
            let v: Vec<Rat> = v.into_iter().map(|(n, d)| Rat::new(n, d)).collect();
            let ivv = a.interior(&v).unwrap().interior(&v).unwrap();
            prop_assert!(ivv.is_zero());
        }

        #[test]
        fn star_isometry_identity_metric(a in arb_form(2), c in arb_form(2)) {
            let b = std7();
            let g = Metric::<Rat>::identity(7);
            let sa = g.star(&b, &a).unwrap();
            let sc = g.star(&b, &c).unwrap();
            prop_assert_eq!(g.inner(&sa, &sc).unwrap(), g.inner(&a, &c).unwrap());
        }

        #[test]
        fn backends_agree(a in arb_form(2), c in arb_form(3)) {
            let exact = a.wedge(&c).unwrap().to_f64();
            let float = a.to_f64().wedge(&c.to_f64()).unwrap();
            for (x, y) in exact.coeffs().iter().zip(float.coeffs()) {
                let scale = 1.0_f64.max(x.abs());
                prop_assert!((x - y).abs() <= 1e-12 * scale);
            }
        }
    }
}
