use thiserror::Error;

use crate::group::GroupElement;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("element {element:?} does not match the {expected} descriptor")]
    ShapeMismatch {
        element: GroupElement,
        expected: &'static str,
    },

    #[error("invalid group table: {0}")]
    InvalidTable(String),

    #[error("element {0:?} is unreachable from the generating set")]
    Unreachable(GroupElement),

    #[error("operation requires {0}")]
    Unsupported(String),

    #[error("coboundary data is not normalized: z(e) = {0}")]
    NotNormalized(String),

    #[error("geometric data violates the curvature invariant: {0}")]
    CurvatureViolated(String),

    #[error("multiplier mismatch between operands")]
    MultiplierMismatch,

    #[error("multipliers are not related by the given coboundary at ({g:?}, {h:?})")]
    NotCohomologous { g: GroupElement, h: GroupElement },

    #[error("multiplier has no rational exponent data: {0}")]
    NoExponentData(String),

    #[error("matrix is not Hermitian (defect {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("operator is not self-adjoint (defect {defect:e})")]
    NotSelfAdjoint { defect: f64 },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("grading does not anticommute with the operator (defect {defect:e})")]
    GradingNotOdd { defect: f64 },

    #[error("eigenvalue {value:e} lies in the kernel ambiguity band around zero_tol = {zero_tol:e}")]
    KernelAmbiguous { value: f64, zero_tol: f64 },

    #[error("spectral flow refinement budget exhausted near t = {t}")]
    RefinementExhausted { t: f64 },

    #[error("heat-integral tail bound {bound:e} exceeds tolerance; use t_max >= {required_t_max:e}")]
    TailTooLarge { bound: f64, required_t_max: f64 },

    #[error("method not applicable: {0}")]
    InapplicableMethod(String),

    #[error("malformed representation: {0}")]
    MalformedRepresentation(String),

    #[error("conjugacy class of {0:?} is not finite")]
    InfiniteClass(GroupElement),

    #[error("cover data violates the cocycle condition: {0}")]
    CoverCocycle(String),

    #[error("cochain is not closed: {0}")]
    NotClosed(String),

    #[error("cochain flags missing: {0}")]
    MissingFlags(String),

    #[error("truncation radius {radius} is smaller than the support radius {needed}")]
    TruncationTooSmall { radius: usize, needed: usize },

    #[error("degenerate samples: {0}")]
    Degenerate(String),

    #[error("invalid rational {0:?}")]
    InvalidRational(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
