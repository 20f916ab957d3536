//! Process-level error with the exit code it maps to.

/// Exit codes: 0 success, 1 failed check, 2 input error, 3 parameter error.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    /// Exit 1: a check ran and did not meet its expectation.
    pub fn check(message: impl Into<String>) -> Self {
        Self { code: 1, message: message.into() }
    }

    /// Exit 2: the input data could not be read, parsed, or validated.
    pub fn input(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    /// Exit 3: a flag or parameter value is invalid.
    pub fn param(message: impl Into<String>) -> Self {
        Self { code: 3, message: message.into() }
    }
}
