use std::path::{Path, PathBuf};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(qei_core::Error),
    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io { .. } => 4,
        }
    }

    pub fn io(path: impl AsRef<Path>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.as_ref().to_path_buf(),
            source,
        }
    }
}

impl From<qei_core::Error> for CliError {
    fn from(err: qei_core::Error) -> Self {
        match err {
            qei_core::Error::InvalidParameter { .. } | qei_core::Error::IndexOutOfRange { .. } => {
                CliError::Config(err.to_string())
            }
            other => CliError::Numerical(other),
        }
    }
}
