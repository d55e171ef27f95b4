use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("site {site} out of range for a space with {n_factors} factors")]
    SiteOutOfRange { site: usize, n_factors: usize },

    #[error("partial trace needs at least one factor to keep")]
    EmptyKeepSet,

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian (max |A - A^H| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("trace is {trace:e}, expected 1")]
    NotUnitTrace { trace: f64 },

    #[error("negative eigenvalue {value:e} below tolerance")]
    NegativeEigenvalue { value: f64 },

    #[error("least-squares system is rank deficient (|r_kk|/|r_00| = {ratio:e})")]
    RankDeficient { ratio: f64 },

    #[error("superoperator is not trace preserving (max |vec(I)^H L| = {deviation:e})")]
    NotTracePreserving { deviation: f64 },

    #[error("steady state is not unique")]
    NonUnique,

    #[error("steady-state residual {residual:e} exceeds tolerance {tolerance:e}")]
    Residual { residual: f64, tolerance: f64 },

    #[error("step too large: dt * |L| = {value:e} > 0.1")]
    Stability { value: f64 },

    #[error("trace drift {drift:e} in a single step")]
    TraceDrift { drift: f64 },

    #[error("Hilbert dimension {dim} exceeds limit {limit}")]
    DimensionGuard { dim: usize, limit: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid parameter path `{path}`: {reason}")]
    Path { path: String, reason: String },

    #[error("at grid point [{coords}]: {source}")]
    GridPoint {
        coords: String,
        #[source]
        source: Box<Error>,
    },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
