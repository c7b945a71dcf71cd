use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("matrix is not unitary (deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("boundary condition is not of the form TΓ₀f = Γ₁f: {0}")]
    SingularBoundary(String),

    #[error("invalid bracket [{a}, {b}]: g(a) = {ga:.3e}, g(b) = {gb:.3e}")]
    InvalidBracket { a: f64, b: f64, ga: f64, gb: f64 },

    #[error("no convergence: best estimate {estimate:.15e} with error {error:.3e}")]
    NotConverged { estimate: f64, error: f64 },

    #[error("{0}")]
    Domain(String),

    #[error("z = {z} is within {distance:.3e} of a pole of the resolvent")]
    NearPole { z: String, distance: f64 },

    #[error("singular linear system: {0}")]
    SingularSystem(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
