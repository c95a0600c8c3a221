use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("specialized weight is trivial: {0}")]
    SpecializedWeightTrivial(String),
    #[error("singular evaluation point: {0}")]
    SingularPoint(String),
    #[error("leading term is not a unit: {0}")]
    NonUnitLeadingTerm(String),
    #[error("not a square: {0}")]
    NotASquare(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("unbounded order: {0}")]
    UnboundedOrder(String),
    #[error("invalid substitution: {0}")]
    InvalidSubstitution(String),
    #[error("invalid cone: {0}")]
    InvalidCone(String),
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("poles do not cancel: {0}")]
    PoleCancellationFailure(String),
    #[error("nonzero universality residual: {0}")]
    ResidualNonzero(String),
    #[error("configurations span rank {rank} of {needed}")]
    SpanDeficient { rank: usize, needed: usize },
    #[error("series order insufficient: {0}")]
    SeriesOrderInsufficient(String),
    #[error("invalid surface input: {0}")]
    InvalidSurface(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
