use thiserror::Error;

/// Errors raised by the simulator core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("operator is not Hermitian (max |A - A^dag| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("Fock cutoff must be at least 2, got {0}")]
    InvalidCutoff(usize),

    #[error("coupler inductance diverges at phi_ext = {phi_ext} (|cos(pi phi)| = {cos:e})")]
    DivergentCoupler { phi_ext: f64, cos: f64 },

    #[error("steady state is not unique (|Re| of two slowest modes: {smallest:e}, {second:e})")]
    DegenerateSteadyState { smallest: f64, second: f64 },

    #[error("steady-state residual {residual:e} exceeds tolerance {tolerance:e}")]
    SteadyStateResidual { residual: f64, tolerance: f64 },

    #[error("step size underflow at t = {t:e} (h = {h:e})")]
    StepSizeUnderflow { t: f64, h: f64 },

    #[error("negative radicand {radicand:e}: parameters are outside the dispersive regime")]
    InvalidDispersiveRegime { radicand: f64 },

    #[error("least-squares fit is rank deficient")]
    RankDeficientFit,

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("zero denominator: all rates vanish")]
    ZeroDenominator,

    #[error("{0} failed to converge")]
    NoConvergence(&'static str),

    #[error("invalid state: {0}")]
    InvalidState(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
