use thiserror::Error;

/// Errors raised by the gate-synthesis library.
///
/// Every variant maps to a stable report code (see [`GateError::code`]).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GateError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: String, found: String },

    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    Hermiticity { deviation: f64 },

    #[error("matrix is not unitary (max deviation {deviation:.3e})")]
    Unitarity { deviation: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal {residual:.3e})")]
    Convergence { sweeps: usize, residual: f64 },

    #[error("matrix does not have the expected shape: {reason}")]
    Shape { reason: String },

    #[error("parameter fit residual {residual:.3e} exceeds {tolerance:.1e}")]
    Fit { residual: f64, tolerance: f64 },

    #[error(
        "linear terms present: E3 != E4 for rho={rho}, delta={delta}, N3={n3}, N4={n4}; {hint}"
    )]
    LinearTerm {
        rho: f64,
        delta: f64,
        n3: i64,
        n4: i64,
        hint: String,
    },

    #[error("invalid sample grid: {reason}")]
    Grid { reason: String },

    #[error(
        "protocol is purely oscillatory: integral {integral:.3e} over window of length {duration}"
    )]
    PurelyOscillatory { integral: f64, duration: f64 },

    #[error("protocol windows disagree: {reason}")]
    Window { reason: String },

    #[error("invalid parameter: {reason}")]
    Parameter { reason: String },

    #[error("non-finite value in {what}")]
    NonFinite { what: String },
}

impl GateError {
    /// Stable machine-readable code used in reports.
    pub fn code(&self) -> &'static str {
        match self {
            GateError::Dimension { .. } => "DIMENSION",
            GateError::Hermiticity { .. } => "HERMITICITY",
            GateError::Unitarity { .. } => "UNITARITY",
            GateError::Convergence { .. } => "CONVERGENCE",
            GateError::Shape { .. } => "SHAPE",
            GateError::Fit { .. } => "FIT",
            GateError::LinearTerm { .. } => "LINEAR_TERM",
            GateError::Grid { .. } => "GRID",
            GateError::PurelyOscillatory { .. } => "PURELY_OSCILLATORY",
            GateError::Window { .. } => "WINDOW",
            GateError::Parameter { .. } => "PARAMETER",
            GateError::NonFinite { .. } => "NON_FINITE",
        }
    }

    pub(crate) fn dim(expected: impl Into<String>, found: impl ToString) -> Self {
        GateError::Dimension {
            expected: expected.into(),
            found: found.to_string(),
        }
    }
}

pub type Result<T, E = GateError> = std::result::Result<T, E>;
