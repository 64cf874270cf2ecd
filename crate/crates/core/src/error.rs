use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A structural precondition of a closed form is violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A series term or intermediate product was not finite.
    #[error("non-finite value while evaluating series term m = {m}")]
    Overflow { m: u64 },

    /// The adaptive series hit its term cap before the tail bound was met.
    #[error(
        "series did not converge within {terms} terms: partial gamma = {partial_gamma}, \
         tail estimate = {tail_estimate:e}"
    )]
    NonConvergence {
        terms: u64,
        partial_gamma: f64,
        tail_estimate: f64,
    },

    /// Quadrature ran out of subdivisions before reaching the tolerance.
    #[error("quadrature tolerance not met: estimate {value}, error estimate {error_estimate:e} > {requested:e}")]
    Quadrature {
        value: f64,
        error_estimate: f64,
        requested: f64,
    },

    /// The request is outside what the numerical method is built for.
    #[error("capability exceeded: {0}")]
    Capability(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
