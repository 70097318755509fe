//! Exterior algebra and G2-structure calculus on flat model geometries,
//! with exact certificates for the boundary-symbol ellipticity claims and
//! a Fourier-mode spectral treatment of the slab boundary value problem.
//!
//! The crate is organized around five areas:
//!
//! - [`exterior`]: forms, metrics, wedge / interior / Hodge star, over an
//!   exact rational or floating scalar backend;
//! - [`g2`]: pointwise G2 calculus (positivity, induced metric, type
//!   projections, boundary splittings, variation formulas);
//! - [`symbol`]: the exact boundary pseudo-differential symbol and its
//!   ellipticity certificate;
//! - [`spectral`]: fields on the 7-torus and the slab, the linearized
//!   torsion operator, the per-mode boundary value problem and its
//!   spectrum, kernel counts and cohomological predictions;
//! - [`suites`]: the verification checks the command line drives, each
//!   producing a [`report::Verdict`].

pub mod error;
pub mod exterior;
pub mod g2;
pub mod linalg;
pub mod report;
pub mod scalar;
pub mod spectral;
pub mod suites;
pub mod symbol;

pub use exterior::{Basis, Form, Metric};
pub use g2::{BoundaryFrame, G2Point};
pub use linalg::DMat;
pub use report::{Verdict, VerifyReport};
pub use scalar::{GaussRat, Rat, RealScalar, Scalar};
pub use suites::SuiteConfig;
