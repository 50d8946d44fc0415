use thiserror::Error;

/// Failure classes with a stable exit-code contract.
#[derive(Debug, Error)]
pub enum CliError {
    /// Exit code 2.
    #[error("configuration error: {0}")]
    Config(String),
    /// Exit code 1.
    #[error("check failed: {0}")]
    Check(String),
    /// Exit code 1.
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Check(_) | CliError::Runtime(_) => 1,
        }
    }
}

impl From<starbody::Error> for CliError {
    fn from(e: starbody::Error) -> Self {
        use starbody::Error as E;
        match e {
            // rejected inputs rather than failed computations
            E::InvalidArgument(_)
            | E::InvalidBody(_)
            | E::BandLimit { .. }
            | E::GridTooLarge { .. }
            | E::TooFarFromBall(_) => CliError::Config(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(format!("i/o: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Runtime(format!("csv: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Runtime(format!("json: {e}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(
            CliError::from(starbody::Error::InvalidArgument("x".into())).exit_code(),
            2
        );
        assert_eq!(
            CliError::from(starbody::Error::TooFarFromBall(0.3)).exit_code(),
            2
        );
        assert_eq!(CliError::from(starbody::Error::GridMismatch).exit_code(), 1);
        assert_eq!(CliError::Check("aliasing".into()).exit_code(), 1);
    }
}
