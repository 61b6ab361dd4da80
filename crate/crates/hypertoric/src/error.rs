//! Error type shared by every module.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("beta * iota is not zero")]
    NonExact,
    #[error("cokernel of iota has torsion (elementary divisors {0:?})")]
    NotSaturated(Vec<String>),
    #[error("beta has a maximal minor outside {{-1, 0, 1}}: {0}")]
    NotUnimodular(String),
    #[error("rank deficient: {0}")]
    RankDeficient(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("{0} is not a vertex of the arrangement")]
    NotAVertex(String),
    #[error("non-generic theta lift: vertex {0} lies on hyperplane {1}")]
    NonGenericTheta(String, usize),
    #[error("non-generic lift: {0}")]
    NonGenericLift(String),
    #[error("fixed points {0} and {1} are not adjacent")]
    NotAdjacent(String, String),
    #[error("shift produces a non-monomial factor: {0}")]
    NonMonomialShift(String),
    #[error("coefficient at degree {0:?} lies outside the computed box")]
    UnknownCoefficientAccess(Vec<i64>),
    #[error("series boxes do not match: {0}")]
    BoxMismatch(String),
    #[error("singular factor: {0}")]
    SingularFactor(String),
    #[error("symbol {0} has no image under the parameter map")]
    UnmappedSymbol(String),
    #[error("truncation tail dominates: {0}")]
    ConvergenceFailure(String),
    #[error("identity fails at degree {degree:?}: residual {residual}")]
    IdentityFailure { degree: Vec<i64>, residual: String },
    #[error("pole of order {0} at {1}")]
    NonSimplePole(u32, String),
    #[error("bilinear form mismatch: residual {0}")]
    FormMismatch(String),
    #[error("mismatch at fixed point {point}: {left} vs {right}")]
    MismatchAt { point: String, left: String, right: String },
    #[error("relation {1} does not vanish at fixed point {0}")]
    VanishingFailure(String, String),
}

impl Error {
    /// Whether the error stems from invalid input data rather than a failed check.
    pub fn is_data_error(&self) -> bool {
        matches!(
            self,
            Error::Parse(_)
                | Error::NonExact
                | Error::NotSaturated(_)
                | Error::NotUnimodular(_)
                | Error::RankDeficient(_)
                | Error::Shape(_)
                | Error::NotAVertex(_)
                | Error::NonGenericTheta(..)
                | Error::NonGenericLift(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
