//! Global fields and operators on the flat 7-torus and the slab: the
//! derivative identities of the flat structure, the linearized and
//! nonlinear torsion operators, the per-mode boundary value problem with
//! its spectrum, kernel counts, and the compact-support quadratic-form
//! probe.

pub mod cheb;
pub mod kernel;
pub mod mode;
pub mod nonlinear;
pub mod probe;
pub mod rng;
pub mod slab;
pub mod tables;
pub mod torus;

pub use rng::FieldSampler;
pub use torus::TorusField;
