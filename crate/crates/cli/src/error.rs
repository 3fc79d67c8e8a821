use crate::doc::ParseError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error(transparent)]
    Core(#[from] omegares::Error),
}

impl CliError {
    /// 2 for bad input, 3 for a resource bound, 1 for an internal failure.
    pub fn exit_code(&self) -> i32 {
        match self.kind() {
            "resource" => 3,
            "internal" => 1,
            _ => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io { .. } => "io",
            CliError::Parse { source: ParseError::Syntax { .. }, .. } => "syntax",
            CliError::Parse { source: ParseError::Semantic(_), .. } => "invalid-input",
            CliError::Core(e) if e.is_resource() => "resource",
            CliError::Core(omegares::Error::Internal(_)) => "internal",
            CliError::Core(_) => "invalid-input",
        }
    }
}
