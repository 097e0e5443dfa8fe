use core::fmt;

/// Errors produced while building or solving a chain model.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A chain or bath parameter violates its invariants.
    InvalidSpec(&'static str),
    /// Matrix or vector dimensions do not line up.
    Shape { expected: usize, found: usize },
    /// A closed-form expression was requested for a chain it was not derived for.
    UnsupportedFormula(&'static str),
    /// The Liouvillian has more than one stationary state.
    DegenerateNullspace { dimension: usize },
    /// The iterative solver stopped before reaching the requested residual.
    NonConvergence { residual: f64, iterations: usize },
    /// Invalid site set for a bipartition.
    InvalidBipartition,
    /// Log-domain fit received a non-positive value.
    Domain(&'static str),
    /// Not enough points for a regression.
    InsufficientData { needed: usize, found: usize },
    /// A linear system that should be regular was singular.
    Singular,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidSpec(msg) => write!(f, "invalid spec: {msg}"),
            Error::Shape { expected, found } => {
                write!(f, "shape mismatch: expected dimension {expected}, found {found}")
            }
            Error::UnsupportedFormula(msg) => write!(f, "closed form not applicable: {msg}"),
            Error::DegenerateNullspace { dimension } => {
                write!(f, "steady state is not unique (null space dimension {dimension})")
            }
            Error::NonConvergence { residual, iterations } => write!(
                f,
                "solver did not converge after {iterations} iterations (residual {residual:e})"
            ),
            Error::InvalidBipartition => f.write_str("invalid bipartition"),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::InsufficientData { needed, found } => {
                write!(f, "need at least {needed} points, got {found}")
            }
            Error::Singular => f.write_str("singular linear system"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
