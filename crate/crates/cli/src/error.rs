use thiserror::Error;

/// Failure of a CLI run, mapped onto the process exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Clap(#[from] clap::Error),
    #[error("usage: {0}")]
    Usage(String),
    #[error("numerical error: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(String),
    /// The reader of stdout went away, as with `| head`.
    #[error("broken pipe")]
    BrokenPipe,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Clap(e) => e.exit_code(),
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 4,
            CliError::BrokenPipe => 0,
        }
    }
}

impl From<dimerspin::Error> for CliError {
    fn from(e: dimerspin::Error) -> Self {
        use dimerspin::Error as E;
        match e {
            E::TooManySites { .. }
            | E::TooFewSites { .. }
            | E::SiteOutOfRange { .. }
            | E::SameSite(_)
            | E::InvalidSpec(_)
            | E::BondOutOfRange { .. }
            | E::NonPositiveTemperature(_)
            | E::InvalidSweep(_)
            | E::SeriesTooShort { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return CliError::BrokenPipe;
        }
        CliError::Io(e.to_string())
    }
}
