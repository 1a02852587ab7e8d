use thiserror::Error;

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// A precondition on the inputs was violated.
    Validation,
    /// A numerical procedure did not reach its accuracy target.
    Accuracy,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite component in {0}")]
    NonFinite(&'static str),
    #[error("{0} is neither inside the open future cone nor the zero vector")]
    InvalidCone(&'static str),
    #[error("causality violation: combined extent y_e + y_r = {0:?} is not inside the open future cone")]
    CausalityViolation([f64; 4]),
    #[error("wrong tube: {0}")]
    WrongTube(&'static str),
    #[error("degenerate extension: imaginary space vector must be non-zero")]
    DegenerateExtension,
    #[error("direction undefined at the origin")]
    UndefinedDirection,
    #[error("point lies within {distance:e} of the branch circle (|r~| below guard)")]
    NearBranchCircle { distance: f64 },
    #[error("causality violation: extent (s = {s}, a = {a}) requires s > a")]
    OutsideCone { s: f64, a: f64 },
    #[error("analytic signal is not defined at real time {t} inside the support of the driving signal")]
    NonAnalyticPoint { t: f64 },
    #[error("domain error: {0}")]
    Domain(&'static str),
    #[error("invalid driving signal: {0}")]
    InvalidSignal(String),
    #[error("finite-difference stencil touches the branch cut or circle: {0}")]
    StencilPlacement(&'static str),
    #[error("{what} did not converge: achieved error estimate {estimate:e}")]
    Accuracy { what: &'static str, estimate: f64 },
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Accuracy { .. } => ErrorKind::Accuracy,
            _ => ErrorKind::Validation,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
