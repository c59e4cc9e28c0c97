use alloc::string::String;
use core::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    NotPrime(u64),
    ZeroDegree,
    /// `p^m` does not fit the machine word used for element indices.
    FieldTooLarge { p: u64, m: u32 },
    RingMismatch,
    DimensionMismatch,
    NotEtale,
    NotUnit,
    NotUniformizer,
    NotEisenstein,
    /// Requested precision exceeds what the inputs carry.
    Precision { needed: i64, available: i64 },
    NonZeroConstantTerm,
    NonUnitLinearTerm,
    NotLubinTate(&'static str),
    /// A step that the theory guarantees to succeed did not.
    Inconsistent(String),
    NotPolynomial,
    NotRepresentation,
    /// Series-mode solving failed at this u-degree.
    Obstruction { degree: i64 },
    /// The digit equation at this uniformizer-adic index has no solution
    /// in the working unramified extension.
    DigitUnsolvable { digit: usize },
    NotCompatible { index: i64 },
    NoLimit { digit: usize },
    WindowTooSmall { window: usize },
    Unsupported(String),
    Parse(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotPrime(p) => write!(f, "{p} is not prime"),
            Error::ZeroDegree => write!(f, "extension degree must be at least 1"),
            Error::FieldTooLarge { p, m } => write!(f, "field of size {p}^{m} is too large"),
            Error::RingMismatch => write!(f, "operands live in different rings"),
            Error::DimensionMismatch => write!(f, "matrix dimensions do not match"),
            Error::NotEtale => write!(f, "not étale"),
            Error::NotUnit => write!(f, "element is not a unit"),
            Error::NotUniformizer => write!(f, "element is not a uniformizer"),
            Error::NotEisenstein => write!(f, "polynomial is not Eisenstein"),
            Error::Precision { needed, available } => {
                write!(f, "precision exhausted: need {needed}, have {available}")
            }
            Error::NonZeroConstantTerm => write!(f, "series has a nonzero constant term"),
            Error::NonUnitLinearTerm => write!(f, "linear coefficient is not a unit"),
            Error::NotLubinTate(why) => write!(f, "not a Lubin-Tate series: {why}"),
            Error::Inconsistent(msg) => write!(f, "internal inconsistency: {msg}"),
            Error::NotPolynomial => write!(f, "torsion polynomials require a polynomial Frobenius series"),
            Error::NotRepresentation => write!(f, "not a representation: cocycle condition fails"),
            Error::Obstruction { degree } => write!(f, "no solution at u-degree {degree}"),
            Error::DigitUnsolvable { digit } => {
                write!(f, "digit equation {digit} unsolvable in the working extension")
            }
            Error::NotCompatible { index } => {
                write!(f, "not a compatible sequence (index {index})")
            }
            Error::NoLimit { digit } => write!(f, "no limit at digit {digit}"),
            Error::WindowTooSmall { window } => {
                write!(f, "index window of length {window} too small; use a larger window")
            }
            Error::Unsupported(msg) => write!(f, "unsupported mode: {msg}"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
