use std::fmt;

use weil2::Error;

/// Failure classes, each with its own process exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Unreadable, malformed or out-of-range input.
    Spec(String),
    /// The module is outside the regime the computation needs.
    Regime(String),
    /// The computation ran but a comparison failed or could not be
    /// certified.
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Spec(_) => 2,
            CliError::Regime(_) => 3,
            CliError::Verification(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Spec(m) => write!(f, "spec error: {}", m),
            CliError::Regime(m) => write!(f, "regime violation: {}", m),
            CliError::Verification(m) => write!(f, "verification failure: {}", m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::NotPrime(_)
            | Error::EvenPrime(_)
            | Error::NotPowerOfP { .. }
            | Error::TruncationBudget { .. }
            | Error::EnumerationBudget { .. }
            | Error::DimensionMismatch(_)
            | Error::NonZeroConstantTerm => CliError::Spec(msg),
            Error::RegimeViolation(m) => CliError::Regime(m),
            Error::HypothesisFailure(_) => CliError::Regime(msg),
            _ => CliError::Verification(msg),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes() {
        assert_eq!(CliError::from(Error::NotPrime(9)).exit_code(), 2);
        assert_eq!(CliError::from(Error::RegimeViolation("x".into())).exit_code(), 3);
        assert_eq!(CliError::from(Error::NoConvergence).exit_code(), 4);
    }
}
