use thiserror::Error;

/// Every failure mode of the library. Variants carry enough context to be
/// reported to a user without the call stack.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("Sylvester operator is singular: eigenvalues {0} and {1} sum to zero")]
    SingularSylvester(usize, usize),
    #[error("eigenvalue {0} lies on the closed negative real axis")]
    BranchCutViolation(String),
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eig:e})")]
    NotPsd { min_eig: f64 },
    #[error("iteration did not converge: {0}")]
    ConvergenceFailure(String),
    #[error("pole on the frequency grid at omega = {omega}")]
    PoleOnGrid { omega: f64 },
    #[error("Moebius substitution is singular")]
    SingularSubstitution,
    #[error("Moebius map is degenerate (ad - bc = 0)")]
    DegenerateMap,
    #[error("shifted matrix is singular: {0}")]
    SingularShift(String),
    #[error("system is not Hurwitz stable (max real part {max_re:e})")]
    NotHurwitz { max_re: f64 },
    #[error("order {r} out of range for n = {n}")]
    OrderOutOfRange { r: usize, n: usize },
    #[error("reduced-model reconstruction failed: {0}")]
    SingularReconstruction(String),
    #[error("residualization matrix is singular")]
    SingularResidualization,
    #[error("frequency-limited Gramian is indefinite (min eigenvalue {min_eig:e})")]
    IndefiniteGramian { min_eig: f64 },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("non-finite entry in {0}")]
    NonFinite(String),
    #[error("eta step {step}: {source}")]
    EtaStep { step: usize, source: Box<Error> },
}

impl Error {
    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::SingularSylvester(..) => "SingularSylvester",
            Error::BranchCutViolation(_) => "BranchCutViolation",
            Error::NotPsd { .. } => "NotPsd",
            Error::ConvergenceFailure(_) => "ConvergenceFailure",
            Error::PoleOnGrid { .. } => "PoleOnGrid",
            Error::SingularSubstitution => "SingularSubstitution",
            Error::DegenerateMap => "DegenerateMap",
            Error::SingularShift(_) => "SingularShift",
            Error::NotHurwitz { .. } => "NotHurwitz",
            Error::OrderOutOfRange { .. } => "OrderOutOfRange",
            Error::SingularReconstruction(_) => "SingularReconstruction",
            Error::SingularResidualization => "SingularResidualization",
            Error::IndefiniteGramian { .. } => "IndefiniteGramian",
            Error::InvalidParameters(_) => "InvalidParameters",
            Error::NonFinite(_) => "NonFinite",
            Error::EtaStep { .. } => "EtaStep",
        }
    }

    /// True for errors caused by bad user input rather than numerics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::DimensionMismatch(_)
                | Error::OrderOutOfRange { .. }
                | Error::InvalidParameters(_)
                | Error::NonFinite(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
