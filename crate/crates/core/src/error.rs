use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("polynomial with coefficients {0:?} is not Eisenstein")]
    NotEisenstein(Vec<i64>),
    #[error("precision must be positive")]
    ZeroPrecision,
    #[error("ring with p = {p} and precision {precision} is too large")]
    RingTooLarge { p: u64, precision: usize },
    #[error("element has valuation {valuation}, division by π^{required} impossible")]
    InsufficientValuation { valuation: usize, required: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("row {0} of the relation matrix is not in the span of the generators")]
    NotASubspace(usize),
    #[error("multiplication table is not a group: {0}")]
    NotAGroup(String),
    #[error("structure constants are not associative at basis triple {0:?}")]
    NotAssociative((usize, usize, usize)),
    #[error("unit vector is not a two-sided identity")]
    NotUnital,
    #[error("invalid bimodule: {0}")]
    InvalidBimodule(String),
    #[error("bad precision: {0}")]
    BadPrecision(String),
    #[error("insufficient precision: need at least {required}, have {available}")]
    InsufficientPrecision { required: usize, available: usize },
    #[error("linear map is not an algebra homomorphism: {0}")]
    NotAMorphism(String),
    #[error("linear map is not invertible")]
    NotInvertible,
    #[error("cohomological degree {0} exceeds the supported maximum of 3")]
    DegreeTooHigh(usize),
    #[error("cochain is not a cocycle")]
    NotACocycle,
    #[error("automorphism does not induce the identity modulo π^{0}")]
    NotIdentityModPiR(usize),
    #[error("automorphism is not of level {0}: {1}")]
    NotLevelR(usize, String),
    #[error("generators do not span a two-sided ideal")]
    NotAnIdeal,
    #[error("not a derivation")]
    NotADerivation,
}

impl Error {
    /// The variant name, for diagnostics that cite the violated invariant.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NonPrime(_) => "NonPrime",
            Error::NotEisenstein(_) => "NotEisenstein",
            Error::ZeroPrecision => "ZeroPrecision",
            Error::RingTooLarge { .. } => "RingTooLarge",
            Error::InsufficientValuation { .. } => "InsufficientValuation",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::NotASubspace(_) => "NotASubspace",
            Error::NotAGroup(_) => "NotAGroup",
            Error::NotAssociative(_) => "NotAssociative",
            Error::NotUnital => "NotUnital",
            Error::InvalidBimodule(_) => "InvalidBimodule",
            Error::BadPrecision(_) => "BadPrecision",
            Error::InsufficientPrecision { .. } => "InsufficientPrecision",
            Error::NotAMorphism(_) => "NotAMorphism",
            Error::NotInvertible => "NotInvertible",
            Error::DegreeTooHigh(_) => "DegreeTooHigh",
            Error::NotACocycle => "NotACocycle",
            Error::NotIdentityModPiR(_) => "NotIdentityModPiR",
            Error::NotLevelR(..) => "NotLevelR",
            Error::NotAnIdeal => "NotAnIdeal",
            Error::NotADerivation => "NotADerivation",
        }
    }
}
