use std::fmt;

/// A failure with the process exit code it maps to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

pub const USAGE: i32 = 2;
pub const MISMATCH: i32 = 3;
pub const MISSING_TARGET: i32 = 4;

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: USAGE,
            message: message.into(),
        }
    }

    pub fn mismatch(message: impl Into<String>) -> Self {
        CliError {
            code: MISMATCH,
            message: message.into(),
        }
    }

    pub fn missing_target(message: impl Into<String>) -> Self {
        CliError {
            code: MISSING_TARGET,
            message: message.into(),
        }
    }

    /// Short tag printed before the message.
    pub fn kind(&self) -> &'static str {
        match self.code {
            USAGE => "usage",
            MISMATCH => "mismatch",
            MISSING_TARGET => "missing-target",
            _ => "failure",
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // one line, whatever the message contains
        write!(
            f,
            "error[{}]: {}",
            self.kind(),
            self.message.replace('\n', " ")
        )
    }
}

impl From<causalkit::Error> for CliError {
    fn from(e: causalkit::Error) -> Self {
        use causalkit::Error as E;
        match e {
            E::UnknownAlgorithm(_) | E::InvalidParameter(_) | E::Network(_) | E::Dataset(_) => {
                CliError::usage(e.to_string())
            }
            E::MissingTarget(_) => CliError::missing_target(e.to_string()),
            _ => CliError::mismatch(e.to_string()),
        }
    }
}
