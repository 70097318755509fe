//! Small dense matrices over an exact (or floating) scalar field.
//!
//! Everything here stays below 35x35, so plain Gauss-Jordan with exact
//! pivoting is the right tool; no decomposition library survives a
//! `BigRational` coefficient field anyway.

use crate::error::ExteriorError;
use crate::scalar::Scalar;

#[derive(Clone, PartialEq)]
pub struct DMat<S> {
    pub rows: usize,
    pub cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> DMat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DMat {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c));
        DMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)].clone();
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = out[(i, j)].clone() + a.clone() * other[(k, j)].clone();
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = S::zero();
                for j in 0..self.cols {
                    if !self[(i, j)].is_zero() && !v[j].is_zero() {
                        acc = acc + self[(i, j)].clone() * v[j].clone();
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() + other[(i, j)].clone()
        })
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() - other[(i, j)].clone()
        })
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| c.clone() * self[(i, j)].clone())
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| -self[(i, j)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(S::is_zero)
    }

    /// Gauss-Jordan inverse with exact pivot search.
    pub fn inverse(&self) -> Result<Self, ExteriorError> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot_row = best_pivot(&a, col, col).ok_or(ExteriorError::Singular)?;
            if pivot_row != col {
                a.swap_rows(pivot_row, col);
                inv.swap_rows(pivot_row, col);
            }
            let p = a[(col, col)].clone();
            for j in 0..n {
                a[(col, j)] = a[(col, j)].clone() / p.clone();
                inv[(col, j)] = inv[(col, j)].clone() / p.clone();
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone();
                for j in 0..n {
                    a[(r, j)] = a[(r, j)].clone() - f.clone() * a[(col, j)].clone();
                    inv[(r, j)] = inv[(r, j)].clone() - f.clone() * inv[(col, j)].clone();
                }
            }
        }
        Ok(inv)
    }

    pub fn determinant(&self) -> S {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut det = S::one();
        for col in 0..n {
            let pivot_row = match best_pivot(&a, col, col) {
                Some(r) => r,
                None => return S::zero(),
            };
            if pivot_row != col {
                a.swap_rows(pivot_row, col);
                det = -det;
            }
            let p = a[(col, col)].clone();
            det = det * p.clone();
            for r in (col + 1)..n {
                if a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone() / p.clone();
                for j in col..n {
                    a[(r, j)] = a[(r, j)].clone() - f.clone() * a[(col, j)].clone();
                }
            }
        }
        det
    }

    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        let mut row = 0;
        for col in 0..a.cols {
            let pivot_row = match best_pivot(&a, row, col) {
                Some(r) => r,
                None => continue,
            };
            a.swap_rows(pivot_row, row);
            let p = a[(row, col)].clone();
            for r in (row + 1)..a.rows {
                if a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone() / p.clone();
                for j in col..a.cols {
                    a[(r, j)] = a[(r, j)].clone() - f.clone() * a[(row, j)].clone();
                }
            }
            rank += 1;
            row += 1;
            if row == a.rows {
                break;
            }
        }
        rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }
}

impl<S> std::ops::Index<(usize, usize)> for DMat<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> std::ops::IndexMut<(usize, usize)> for DMat<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

impl<S: Scalar> std::fmt::Debug for DMat<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "DMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Row of the largest usable pivot in `col` at or below `start`.
fn best_pivot<S: Scalar>(a: &DMat<S>, start: usize, col: usize) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for r in start..a.rows {
        if a[(r, col)].is_zero() {
            continue;
        }
        let m = a[(r, col)].pivot_magnitude();
        match best {
            Some((_, bm)) if bm >= m => {}
            _ => best = Some((r, m)),
        }
    }
    best.map(|(r, _)| r)
}

/// Characteristic polynomial by the Faddeev-LeVerrier recursion.
///
/// Returns `[c_0, ..., c_n]` with `det(lambda I - A) = sum c_k lambda^k`
/// and `c_n = 1`. Needs only field divisions by small integers.
pub fn char_poly<S: Scalar>(a: &DMat<S>) -> Vec<S> {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    let mut coeffs = vec![S::zero(); n + 1];
    coeffs[n] = S::one();
    let mut m = DMat::<S>::zeros(n, n);
    let mut c = S::one();
    for k in 1..=n {
        // M_k = A * M_{k-1} + c_{k-1} I
        let mut am = a.mul(&m);
        for i in 0..n {
            am[(i, i)] = am[(i, i)].clone() + c.clone();
        }
        m = am;
        let prod = a.mul(&m);
        let mut tr = S::zero();
        for i in 0..n {
            tr = tr + prod[(i, i)].clone();
        }
        c = -(tr / S::from_int(k as i64));
        coeffs[n - k] = c.clone();
    }
    coeffs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;

    fn r(n: i64) -> Rat {
        Rat::from_int(n)
    }

    #[test]
    fn inverse_round_trip() {
        let a = DMat::from_rows(vec![
            vec![r(2), r(1), r(0)],
            vec![r(1), r(3), r(1)],
            vec![r(0), r(1), r(2)],
        ]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), DMat::identity(3));
    }

    #[test]
    fn rank_and_det() {
        let a = DMat::from_rows(vec![
            vec![r(1), r(2), r(3)],
            vec![r(2), r(4), r(6)],
            vec![r(0), r(1), r(1)],
        ]);
        assert_eq!(a.rank(), 2);
        assert!(a.determinant().is_zero());
    }

    #[test]
    fn char_poly_of_diagonal() {
        let a = DMat::from_rows(vec![vec![r(2), r(0)], vec![r(0), r(5)]]);
        // (x-2)(x-5) = x^2 - 7x + 10
        assert_eq!(char_poly(&a), vec![r(10), r(-7), r(1)]);
    }
}
