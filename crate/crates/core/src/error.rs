//! Error type shared by all modules.

/// Errors raised by geometric constructors, solvers and searches.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A precondition on an argument was violated; the message names the
    /// invariant.
    Domain(String),
    /// A body constructor rejected its parameters or sample data.
    InvalidBody(String),
    /// Convexity validation failed; carries the offending curve parameters.
    NonConvex { offending: Vec<f64> },
    /// A curve evaluation produced a non-finite value at the given parameter.
    Evaluation { theta: f64 },
    /// Root bracketing or intersection refinement broke down.
    DegenerateIntersection(String),
    /// The requested subtended angle cannot be realised in some direction.
    AngleUnattainable { direction: f64 },
    /// No circle satisfies the strict-interiority margin inside the body.
    NoFeasibleCircle,
}

impl std::fmt::Display for Error {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Domain(msg) => write!(f, "domain error: {msg}"),
            Self::InvalidBody(msg) => write!(f, "invalid body: {msg}"),
            Self::NonConvex { offending } => {
                write!(f, "nonconvex curve; negative curvature near theta = ")?;
                for (i, t) in offending.iter().take(4).enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{t:.6}")?;
                }
                if offending.len() > 4 {
                    write!(f, ", ... ({} total)", offending.len())?;
                }
                Ok(())
            }
            Self::Evaluation { theta } => {
                write!(f, "non-finite curve evaluation at theta = {theta:.12}")
            }
            Self::DegenerateIntersection(msg) => write!(f, "degenerate intersection: {msg}"),
            Self::AngleUnattainable { direction } => {
                write!(f, "subtended angle unattainable in direction {direction:.6}")
            }
            Self::NoFeasibleCircle => write!(f, "no strictly interior circle is feasible"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
