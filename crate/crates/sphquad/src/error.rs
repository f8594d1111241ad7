use thiserror::Error;

/// Errors produced by geometry construction, rule assembly and the solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate polygon: vertex mean has norm {norm:.3e}, no centroid")]
    DegeneratePolygon { norm: f64 },

    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),

    #[error("degenerate spherical triangle: |det[A B C]| = {det:.3e}")]
    DegenerateTriangle { det: f64 },

    #[error("region not contained in an open hemisphere around its centroid")]
    HemisphereViolation,

    #[error("gnomonic projection at infinity: p . center = {dot:.3e}")]
    ProjectionAtInfinity { dot: f64 },

    #[error("invalid degree: {0}")]
    InvalidDegree(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("singular transformation matrix: |det| = {det:.3e}")]
    SingularMatrix { det: f64 },

    #[error("quadrature construction failed: {0}")]
    QuadratureConstruction(String),

    #[error("NNLS did not converge after {iterations} iterations (residual {residual:.3e})")]
    NnlsNonConvergence { iterations: usize, residual: f64 },

    #[error("node set is not determining: rank-deficient basis matrix (pivot {pivot:.3e} at column {column})")]
    RankDeficient { column: usize, pivot: f64 },

    #[error("adaptive integration did not converge: depth cap {depth} exceeded, estimate {estimate:.3e}")]
    AdaptiveNonConvergence { depth: usize, estimate: f64 },

    #[error("sample vector length {got} does not match rule cardinality {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("empty point set")]
    EmptyPointSet,

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
