use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("field mismatch: characteristic {left} combined with characteristic {right}")]
    FieldMismatch { left: u64, right: u64 },
    #[error("invalid characteristic {0}: expected 0 or a prime below 2^32")]
    InvalidCharacteristic(u64),
    #[error("cannot add forms of degree {left} and {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("inexact division")]
    InexactDivision,
    #[error("division by zero")]
    DivisionByZero,
    #[error("(0,0) is not a point of P¹")]
    ZeroPoint,
    #[error("cannot parse scalar `{0}`")]
    Parse(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("entry ({row},{col}) must have degree {expected}")]
    EntryDegree { row: usize, col: usize, expected: i64 },
    #[error("h⁰ data is not the profile of a split bundle: {0}")]
    InconsistentProfile(String),
    #[error("kernel generators did not stabilize by twist {bound}: {detail}")]
    KernelSearch { bound: i64, detail: String },
    #[error("section does not lie in the modeled subbundle: {0}")]
    NotInModel(String),
    #[error("all {trials} sampled maps were rank-deficient")]
    AllDegenerate { trials: usize },
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("invalid ambient: {0}")]
    InvalidAmbient(String),
    #[error("curve is not contained in the ambient: equation {index} ({equation}) does not vanish on it")]
    NotContained { index: usize, equation: String },
    #[error("rank drop along the curve: {0}")]
    RankDrop(String),
    #[error("map is not fiberwise surjective: {0}")]
    NotFiberwiseSurjective(String),
    #[error("cannot lift section to an ambient form: {0}")]
    LiftInfeasible(String),
    #[error("invalid b-sequence: exponent {ell} is not expressible")]
    InexpressibleExponent { ell: u64 },
    #[error("automorphism matrix is singular")]
    SingularAutomorphism,
    #[error("verification failed: {0}")]
    Verification(String),
}
