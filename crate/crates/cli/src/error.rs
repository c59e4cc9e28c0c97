use ltphi_core::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PROPERTY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported mode: {0}")]
    Unsupported(String),
    #[error("property failure: {0}")]
    Property(String),
    #[error("{0}")]
    Core(#[from] Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::Unsupported(_) => EXIT_UNSUPPORTED,
            CliError::Property(_) => EXIT_PROPERTY,
            CliError::Core(e) => match e {
                Error::NotEtale
                | Error::Unsupported(_)
                | Error::FieldTooLarge { .. }
                | Error::DigitUnsolvable { .. }
                | Error::WindowTooSmall { .. } => EXIT_UNSUPPORTED,
                Error::NotPrime(_)
                | Error::ZeroDegree
                | Error::NotLubinTate(_)
                | Error::NotEisenstein
                | Error::NotPolynomial
                | Error::NotRepresentation
                | Error::NotUnit
                | Error::NotUniformizer
                | Error::DimensionMismatch
                | Error::Precision { .. }
                | Error::Parse(_) => EXIT_USAGE,
                _ => EXIT_PROPERTY,
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
