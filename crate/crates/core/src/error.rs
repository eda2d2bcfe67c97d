use thiserror::Error;

/// Failure modes of a single adaptive integration.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("subdivision budget of {budget} exhausted (error estimate {error:.3e} > tolerance {tolerance:.3e})")]
    BudgetExhausted { budget: usize, error: f64, tolerance: f64 },
    #[error("integrand is not finite at {at}")]
    NonFinite { at: f64 },
    #[error("tail estimate {tail:.3e} dominates the truncated integral (L1 mass {body:.3e}); raise k_max")]
    TailDominates { tail: f64, body: f64 },
    #[error("invalid quadrature request: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid quadrature spec: {0}")]
    InvalidSpec(String),
    #[error("{name} = {value} is outside its domain: {reason}")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("integral '{label}' failed: {source}")]
    Integral {
        label: String,
        #[source]
        source: QuadratureError,
    },
    #[error("Fourier inversion at x1 = {x1} did not converge (last correction {delta:.3e})")]
    OscillatoryConvergence { x1: f64, delta: f64 },
    #[error("{0}")]
    Mismatch(String),
}

impl Error {
    /// True for failures of the numerics (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Integral { .. } | Error::OscillatoryConvergence { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Attach an integral label to a quadrature failure.
pub(crate) trait Labelled<T> {
    fn label(self, label: impl FnOnce() -> String) -> Result<T>;
}

impl<T> Labelled<T> for std::result::Result<T, QuadratureError> {
    fn label(self, label: impl FnOnce() -> String) -> Result<T> {
        self.map_err(|source| Error::Integral { label: label(), source })
    }
}
