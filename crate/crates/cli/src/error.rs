use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("i/o: {0}")]
    Io(String),
    #[error("config parse: {0}")]
    Parse(String),
    #[error("schema: {0}")]
    Schema(String),
    #[error(transparent)]
    Numeric(#[from] statdyn::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Schema(_) => 2,
            CliError::Parse(_) => 3,
            CliError::Numeric(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io(_) => "io",
            CliError::Parse(_) => "config-parse",
            CliError::Schema(_) => "schema",
            CliError::Numeric(_) => "numerical",
        }
    }

    /// Finer category: the library's for numerical errors, otherwise the kind.
    pub fn category(&self) -> &'static str {
        match self {
            CliError::Numeric(e) => e.category(),
            other => other.kind(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "error": self.kind(),
            "category": self.category(),
            "message": self.to_string(),
            "exit_code": self.exit_code(),
        })
    }

    pub fn io(path: &std::path::Path, e: std::io::Error) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }
}
