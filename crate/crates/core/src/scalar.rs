//! Scalar backends for the form algebra.
//!
//! Two real backends share one interface: [`Rat`] (arbitrary-precision
//! rationals, used wherever a claim is proved by exact computation) and
//! `f64` (used for spectral work). [`GaussRat`] adds the Gaussian
//! rationals needed by the boundary-symbol certificate.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::ScalarError;

/// Field operations shared by every coefficient type.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn is_zero(&self) -> bool;
    /// Size estimate used only for pivot selection in elimination. Exact
    /// backends may approximate; floating backends must return the true
    /// magnitude or Gaussian elimination loses digits to tiny pivots.
    fn pivot_magnitude(&self) -> f64;
}

/// Ordered scalars with the root extractions the metric normalization needs.
///
/// On `f64` the roots always exist; on [`Rat`] they are exact or absent,
/// which is what lets the exact backend refuse to silently approximate.
pub trait RealScalar: Scalar + PartialOrd {
    fn abs(&self) -> Self;
    fn is_positive(&self) -> bool;
    /// Exact (or floating) nonnegative n-th root; `Err` when no exact root exists.
    fn nth_root(&self, n: u32) -> Result<Self, ScalarError>;
    fn sqrt(&self) -> Result<Self, ScalarError> {
        self.nth_root(2)
    }
    fn to_f64(&self) -> f64;
}

/// Arbitrary-precision rational scalar.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Rat(pub BigRational);

impl Rat {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn numer_i64(&self) -> Option<i64> {
        self.0.numer().to_i64()
    }

    pub fn denom_i64(&self) -> Option<i64> {
        self.0.denom().to_i64()
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

macro_rules! rat_binop {
    ($trait:ident, $fn:ident) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $fn(self, rhs: Rat) -> Rat {
                Rat((self.0).$fn(rhs.0))
            }
        }
    };
}

rat_binop!(Add, add);
rat_binop!(Sub, sub);
rat_binop!(Mul, mul);
rat_binop!(Div, div);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Scalar for Rat {
    fn zero() -> Self {
        Rat(BigRational::zero())
    }
    fn one() -> Self {
        Rat(BigRational::one())
    }
    fn from_int(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Rat::new(num, den)
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn pivot_magnitude(&self) -> f64 {
        self.0.to_f64().map_or(1.0, f64::abs)
    }
}

/// Exact n-th root of a nonnegative big integer, if one exists.
fn exact_int_root(x: &BigInt, n: u32) -> Option<BigInt> {
    let r = x.nth_root(n);
    if num::traits::Pow::pow(r.clone(), n) == *x {
        Some(r)
    } else {
        None
    }
}

impl RealScalar for Rat {
    fn abs(&self) -> Self {
        Rat(self.0.abs())
    }
    fn is_positive(&self) -> bool {
        self.0.is_positive()
    }
    fn nth_root(&self, n: u32) -> Result<Self, ScalarError> {
        if self.0.is_negative() {
            return Err(ScalarError::NegativeRoot);
        }
        let num = exact_int_root(self.0.numer(), n);
        let den = exact_int_root(self.0.denom(), n);
        match (num, den) {
            (Some(a), Some(b)) => Ok(Rat(BigRational::new(a, b))),
            _ => Err(ScalarError::InexactRoot {
                value: self.0.to_string(),
                n,
            }),
        }
    }
    fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_int(n: i64) -> Self {
        n as f64
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn pivot_magnitude(&self) -> f64 {
        f64::abs(*self)
    }
}

impl RealScalar for f64 {
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn is_positive(&self) -> bool {
        *self > 0.0
    }
    fn nth_root(&self, n: u32) -> Result<Self, ScalarError> {
        if *self < 0.0 {
            return Err(ScalarError::NegativeRoot);
        }
        Ok(self.powf(1.0 / n as f64))
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

/// Gaussian rational: `re + im * i` with exact rational parts.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct GaussRat {
    pub re: Rat,
    pub im: Rat,
}

impl GaussRat {
    pub fn new(re: Rat, im: Rat) -> Self {
        GaussRat { re, im }
    }

    pub fn real(re: Rat) -> Self {
        GaussRat {
            re,
            im: Rat::zero(),
        }
    }

    /// The unit `i`.
    pub fn i() -> Self {
        GaussRat {
            re: Rat::zero(),
            im: Rat::one(),
        }
    }

    pub fn conj(&self) -> Self {
        GaussRat {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn norm_sq(&self) -> Rat {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }
}

impl fmt::Debug for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}+{}i)", self.re, self.im)
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}i", self.re, self.im)
    }
}

impl Add for GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: GaussRat) -> GaussRat {
        GaussRat {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Sub for GaussRat {
    type Output = GaussRat;
    fn sub(self, rhs: GaussRat) -> GaussRat {
        GaussRat {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl Mul for GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: GaussRat) -> GaussRat {
        GaussRat {
            re: self.re.clone() * rhs.re.clone() - self.im.clone() * rhs.im.clone(),
            im: self.re * rhs.im + self.im * rhs.re,
        }
    }
}

impl Div for GaussRat {
    type Output = GaussRat;
    fn div(self, rhs: GaussRat) -> GaussRat {
        let d = rhs.norm_sq();
        assert!(!d.is_zero(), "division by zero Gaussian rational");
        let num = self * rhs.conj();
        GaussRat {
            re: num.re / d.clone(),
            im: num.im / d,
        }
    }
}

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Scalar for GaussRat {
    fn zero() -> Self {
        GaussRat::default()
    }
    fn one() -> Self {
        GaussRat::real(Rat::one())
    }
    fn from_int(n: i64) -> Self {
        GaussRat::real(Rat::from_int(n))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        GaussRat::real(Rat::new(num, den))
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn pivot_magnitude(&self) -> f64 {
        self.norm_sq().pivot_magnitude().sqrt()
    }
}
