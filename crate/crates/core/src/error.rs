use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Argument sits on (or within rounding of) a pole of the function.
    #[error("{func}: pole at x = {x}")]
    Pole { func: &'static str, x: f64 },

    /// Argument outside the domain of the function.
    #[error("{func}: {msg}")]
    Domain { func: &'static str, msg: String },

    /// A branch bracket did not enclose the requested target; signals a
    /// monotonicity violation in the quantization condition.
    #[error("bracket failure on branch {branch} for ln a = {ln_a}")]
    BracketFailure { branch: usize, ln_a: f64 },

    #[error("eigensolver did not converge ({0})")]
    EigenNonConvergence(String),

    /// The radial/angular discretisation of the kernel oracle lost more
    /// norm than allowed.
    #[error("kernel quadrature under-resolved: sum of kappa^2 = {sum:.6}")]
    Underresolved { sum: f64 },

    #[error("degenerate power-law fit: {0}")]
    DegenerateFit(String),

    #[error("index {index} out of range (dimension {dim})")]
    IndexOutOfRange { index: usize, dim: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(func: &'static str, msg: impl Into<String>) -> Error {
    Error::Domain {
        func,
        msg: msg.into(),
    }
}
