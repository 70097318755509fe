//! Error types, one enum per subject area.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScalarError {
    #[error("root of a negative scalar")]
    NegativeRoot,
    #[error("no exact {n}-th root of {value}")]
    InexactRoot { value: String, n: u32 },
}

#[derive(Debug, Error)]
pub enum ExteriorError {
    #[error("forms live on different bases")]
    BasisMismatch,
    #[error("wedge degree overflow: {left} + {right} exceeds dimension {dim}")]
    DegreeOverflow { left: usize, right: usize, dim: usize },
    #[error("expected degree {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("interior product of a degree-0 form")]
    InteriorOfScalar,
    #[error("metric is not symmetric")]
    AsymmetricMetric,
    #[error("metric is not positive definite (pivot {pivot} at step {step})")]
    DegenerateMetric { pivot: String, step: usize },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("singular matrix in exact linear algebra")]
    Singular,
    #[error("coefficient does not fit the serialization range")]
    SerializationRange,
}

#[derive(Debug, Error)]
pub enum G2Error {
    #[error("3-form is not positive; indefinite Gram witness attached")]
    NotPositive { witness: Vec<Vec<f64>> },
    #[error("dimension must be 7, got {0}")]
    BadDimension(usize),
    #[error("normal vector must be a unit coordinate direction")]
    BadNormal,
    #[error("input is not in the 14-type subspace (projector residual {residual})")]
    Not14Type { residual: f64 },
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Debug, Error)]
pub enum SymbolError {
    #[error("symbol of the zero covector")]
    ZeroCovector,
    #[error("covector norm {0} is not a rational square; use a rational-unit sample")]
    IrrationalNorm(String),
    #[error("characteristic polynomial does not match the expected factorization")]
    UnexpectedCharPoly,
}

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("field stores modes beyond its stated truncation {trunc}")]
    TruncationOverflow { trunc: i32 },
    #[error("degree {0} form cannot be differentiated on a {1}-dimensional torus")]
    TopDegree(usize, usize),
    #[error("positivity lost at grid point {point:?} (smallest pivot {pivot})")]
    PositivityLost { point: Vec<f64>, pivot: f64 },
    #[error("nonlinear evaluation supports at most {max} active coordinates, field uses {got}")]
    TooManyActiveCoords { max: usize, got: usize },
    #[error("grid size {0} too small; need at least {1}")]
    GridTooSmall(usize, usize),
    #[error("slab length must be positive, got {0}")]
    BadLength(f64),
    #[error("boundary 8-block does not vanish at the slab faces (norm {0})")]
    DirichletViolation(f64),
    #[error("field does not vanish on the boundary in the pullback sense (norm {0})")]
    BoundaryPullback(f64),
    #[error("eigenvalue solver failed: {0}")]
    EigenFailure(String),
    #[error(transparent)]
    G2(#[from] G2Error),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
}
