use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}, line {line}: {msg}", path.display())]
    Parse { path: PathBuf, line: u64, msg: String },
    #[error("{0}")]
    Input(String),
    #[error("dimension mismatch: diagram of H{0} compared with diagram of H{1}")]
    DimMismatch(usize, usize),
    #[error(transparent)]
    Core(#[from] pdsim_core::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// 2 for bad usage or input, 3 for a semantic mismatch, 4 when a
    /// computation failed its own consistency checks.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } | Error::Parse { .. } | Error::Input(_) => 2,
            Error::DimMismatch(..) => 3,
            Error::Core(pdsim_core::Error::InvalidArgument(_)) => 2,
            Error::Core(_) => 4,
        }
    }
}
