use std::path::PathBuf;

use mdgsp::Error as CoreError;

/// Failure classes, each with its own exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Usage,
    Io,
    Format,
    InvalidInput,
    Dimension,
    NotConverged,
    Numeric,
    Parameter,
    TooLarge,
}

impl ErrorClass {
    pub fn code(self) -> &'static str {
        match self {
            ErrorClass::Usage => "usage",
            ErrorClass::Io => "io",
            ErrorClass::Format => "format",
            ErrorClass::InvalidInput => "invalid-input",
            ErrorClass::Dimension => "dimension",
            ErrorClass::NotConverged => "not-converged",
            ErrorClass::Numeric => "numeric",
            ErrorClass::Parameter => "parameter",
            ErrorClass::TooLarge => "too-large",
        }
    }

    pub fn exit_status(self) -> i32 {
        match self {
            ErrorClass::Usage => 2,
            ErrorClass::Io => 3,
            ErrorClass::Format => 4,
            ErrorClass::InvalidInput => 5,
            ErrorClass::Dimension => 6,
            ErrorClass::NotConverged => 7,
            ErrorClass::Numeric => 8,
            ErrorClass::Parameter => 9,
            ErrorClass::TooLarge => 10,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: CoreError,
    },
    #[error(transparent)]
    Core(#[from] CoreError),
}

fn classify(e: &CoreError) -> ErrorClass {
    match e {
        CoreError::LoopEdge(_)
        | CoreError::DuplicateEdge(..)
        | CoreError::InvalidWeight { .. }
        | CoreError::IndexOutOfRange { .. }
        | CoreError::TooFewVertices { .. }
        | CoreError::Asymmetric { .. }
        | CoreError::NotSquare { .. } => ErrorClass::InvalidInput,
        CoreError::DimensionMismatch { .. } | CoreError::SourceMismatch { .. } | CoreError::DegreeOverflow { .. } => {
            ErrorClass::Dimension
        }
        CoreError::Format(_) | CoreError::Json(_) => ErrorClass::Format,
        CoreError::Io(_) => ErrorClass::Io,
        CoreError::NotConverged(_) => ErrorClass::NotConverged,
        CoreError::TooLarge(_) => ErrorClass::TooLarge,
        CoreError::InvalidParameter(_) | CoreError::InsufficientSamples { .. } | CoreError::KernelMissing { .. } => {
            ErrorClass::Parameter
        }
        CoreError::NonFinite(_)
        | CoreError::KernelNotFinite { .. }
        | CoreError::RepeatedEigenvalues
        | CoreError::NotPsd { .. }
        | CoreError::NegativeVariance { .. }
        | CoreError::ComplexResidue(_) => ErrorClass::Numeric,
    }
}

impl CliError {
    pub fn class(&self) -> ErrorClass {
        match self {
            CliError::Usage(_) => ErrorClass::Usage,
            CliError::File { source, .. } | CliError::Core(source) => classify(source),
        }
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    /// `error[code]: message`, newlines folded so the line stays parseable.
    pub fn line(&self) -> String {
        let msg = self.to_string().replace(['\n', '\r'], " ");
        format!("error[{}]: {}", self.class().code(), msg.trim())
    }
}

pub trait AtPath<T> {
    fn at(self, path: &std::path::Path) -> Result<T, CliError>;
}

impl<T, E: Into<CoreError>> AtPath<T> for Result<T, E> {
    fn at(self, path: &std::path::Path) -> Result<T, CliError> {
        self.map_err(|e| CliError::File {
            path: path.to_path_buf(),
            source: e.into(),
        })
    }
}
