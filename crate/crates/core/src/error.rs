use core::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// The function takes the same sign at both ends of the bracket.
    NoSignChange { lo: f64, hi: f64 },
    /// Bisection hit the iteration cap before the bracket shrank to tolerance.
    MaxIterations { iterations: usize, width: f64 },
    /// The equation has no admissible root.
    NoSolution,
    /// The argument lies on a pole of the tangent.
    Singular { nu: f64 },
    /// Invalid domain or argument.
    InvalidInput(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NoSignChange { lo, hi } => {
                write!(f, "no sign change on bracket ({lo}, {hi})")
            }
            Error::MaxIterations { iterations, width } => {
                write!(
                    f,
                    "no convergence after {iterations} iterations (bracket width {width:e})"
                )
            }
            Error::NoSolution => f.write_str("no admissible solution"),
            Error::Singular { nu } => write!(f, "argument {nu} lies on a tangent singularity"),
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
