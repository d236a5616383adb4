use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p = 2 is not supported here; an odd prime is required")]
    EvenPrime,
    #[error("zero input where a nonzero value is required")]
    ZeroInput,
    #[error("{0} is not a p-adic unit")]
    NotAUnit(String),
    #[error("singular matrix")]
    Singular,
    #[error("Q(x) is zero or not p-integral; no matching datum exists")]
    NotApplicable,
    #[error("element is not in standard position for its torus: {0}")]
    NotStandardPosition(String),
    #[error("coset representative is inconsistent with the case: {0}")]
    InconsistentCase(String),
    #[error("matrix is not an isometry of the quadratic form")]
    NotIsometry,
    #[error("ball radius {0} exceeds the guard of 6")]
    RadiusTooLarge(u32),
    #[error("orbit exceeded the guard of {0} vertices")]
    GuardExceeded(usize),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("overlapping supports in Schwartz function")]
    OverlappingSupports,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
