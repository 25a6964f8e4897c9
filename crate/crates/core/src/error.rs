use thiserror::Error;

use crate::euler::EulerElement;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The input document is missing a field or has the wrong shape.
    #[error("malformed input: {0}")]
    MalformedInput(String),

    /// The input parsed but violates a structural invariant of the system.
    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("negative multiplicity: {0}")]
    NegativeMultiplicity(String),

    #[error("element {0} is not invertible (SO(2)-coordinate must be +1 or -1)")]
    NotInvertible(EulerElement),

    #[error("level {0} is not a bifurcation level of this system")]
    LevelNotInLambda(String),

    /// A `+m` level was requested with `n_- = 0` (or `-m` with `n_+ = 0`).
    #[error("level {level} requires {count} > 0, but {count} = 0")]
    MissingDirection { level: String, count: &'static str },

    #[error("truncation index {n} must exceed the harmonic index {m} of the level")]
    TruncationTooSmall { n: u32, m: u32 },

    /// The independent index computations disagree. Every route's value is
    /// kept so the disagreement can be inspected.
    #[error("bifurcation index routes disagree at level {level}: {}", format_routes(.routes))]
    RouteMismatch {
        level: String,
        routes: Vec<(String, EulerElement)>,
    },

    /// A theorem check failed; carries the theorem tag and the offending case.
    #[error("assertion failed [{theorem}]: {detail}")]
    AssertionFailure { theorem: String, detail: String },
}

fn format_routes(routes: &[(String, EulerElement)]) -> String {
    routes
        .iter()
        .map(|(name, value)| format!("{name} = {value}"))
        .collect::<Vec<_>>()
        .join(", ")
}

impl Error {
    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::MalformedInput(_) => 1,
            Error::InvariantViolation(_)
            | Error::DomainError(_)
            | Error::NegativeMultiplicity(_)
            | Error::NotInvertible(_)
            | Error::LevelNotInLambda(_)
            | Error::MissingDirection { .. }
            | Error::TruncationTooSmall { .. } => 2,
            Error::RouteMismatch { .. } | Error::AssertionFailure { .. } => 3,
        }
    }
}
