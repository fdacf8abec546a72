use serde::Serialize;

/// Failure classes, each with its own exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{name}: {message}")]
    Parameter { name: String, message: String },
    #[error("{0}")]
    Computation(String),
    #[error("{0}")]
    Io(String),
}

#[derive(Serialize)]
struct ErrorLine<'a> {
    error: &'a str,
    exit_code: i32,
    message: String,
}

impl CliError {
    pub fn param(name: &str, message: &str) -> Self {
        CliError::Parameter {
            name: name.to_string(),
            message: message.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Parameter { .. } => 3,
            CliError::Computation(_) => 4,
            CliError::Io(_) => 5,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Parameter { .. } => "parameter",
            CliError::Computation(_) => "computation",
            CliError::Io(_) => "io",
        }
    }

    /// Single-line JSON for stderr.
    pub fn to_line(&self) -> String {
        let line = ErrorLine {
            error: self.kind(),
            exit_code: self.exit_code(),
            message: self.to_string().replace('\n', " "),
        };
        serde_json::to_string(&line).expect("error line serializes")
    }
}

impl From<underspread_core::Error> for CliError {
    fn from(e: underspread_core::Error) -> Self {
        use underspread_core::Error as E;
        match e {
            E::Domain { .. } | E::DeltaTilde(_) => CliError::Parameter {
                name: "input".to_string(),
                message: e.to_string(),
            },
            _ => CliError::Computation(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
