use thiserror::Error;

/// Errors shared by every layer of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid model spec: {0}")]
    SpecInvalid(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("factorization of {value} exceeds trial-division bound {bound}")]
    FactorizationTooLarge { value: String, bound: u64 },
    #[error("element is not a unit at the requested place")]
    NotAUnit,
    #[error("model does not support full element enumeration")]
    NotEnumerable,
    #[error("group table inconsistent: {0}")]
    TableInconsistent(String),
    #[error("bad kappa presentation: {0}")]
    BadPresentation(String),
    #[error("graph does not match quotient: {0}")]
    VertexMismatch(String),
    #[error("base element lies in N")]
    YInN,
    #[error("window inconclusive: {0}")]
    WindowInconclusive(String),
    #[error("equivalent conditions disagree: {0}")]
    ConditionsDisagree(String),
    #[error("level set empty on window: {0}")]
    EmptyLevelSet(String),
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
    #[error("affine rule violated: {0}")]
    AffineRuleViolated(String),
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("difference search exhausted: {0}")]
    DifferenceSearchExhausted(String),
    #[error("centralizer closure escaped the centralizer: {0}")]
    ClosureEscapesCentralizer(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
