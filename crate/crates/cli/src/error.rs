use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] cflab_core::Error),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    /// 2: config or validation, 3: resource cap, 1: anything else.
    /// Nonconvergence (4) is not an error; see [`crate::Status`].
    pub fn exit_code(&self) -> i32 {
        use cflab_core::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Core(e) => match e {
                E::ResourceCap { .. } | E::DistanceCapExceeded { .. } | E::Overflow(_) => 3,
                E::Internal(_) => 1,
                _ => 2,
            },
            _ => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.exit_code() {
            2 => "config",
            3 => "resource_cap",
            _ => "internal",
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
