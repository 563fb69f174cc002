use alloc::string::String;

/// Everything that can go wrong in the core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("real locus is not a surface: {0}")]
    NotASurface(String),
    #[error("curve is singular near {point:?}")]
    Singular { point: [f64; 4] },
    #[error("curve is reducible: {0}")]
    Reducible(String),
    #[error("numerical failure: {0}")]
    NonConvergence(String),
    #[error("rank deficient configuration ({0}); retry with jittered points")]
    RankDeficient(String),
    #[error("ambiguous real/imaginary root classification ({0}); increase precision")]
    Ambiguous(String),
    #[error("morphism is not separating: imaginary fiber points at angle {witness}")]
    NotSeparating { witness: f64 },
    #[error("not chessboard-colorable: {0}")]
    NotColorable(String),
    #[error("tangential crossing at resolution ({0}); perturb D")]
    Tangency(String),
    #[error("incidence within tolerance: {0}")]
    Incidence(String),
    #[error("no certified realization found: {0}")]
    NotRealized(String),
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Input,
    Numerical,
    Verification,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::InvalidInput(_) | Error::NotASurface(_) | Error::Incidence(_) => ErrorClass::Input,
            Error::Singular { .. } | Error::Reducible(_) => ErrorClass::Input,
            Error::NonConvergence(_) | Error::RankDeficient(_) | Error::Ambiguous(_) | Error::Tangency(_) => {
                ErrorClass::Numerical
            }
            Error::NotSeparating { .. } | Error::NotColorable(_) | Error::NotRealized(_) => ErrorClass::Verification,
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

pub(crate) fn numerical(msg: impl Into<String>) -> Error {
    Error::NonConvergence(msg.into())
}
