use thiserror::Error;

/// Errors raised by the operator toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("insufficient precision: need {needed} known coefficients, have {available}")]
    InsufficientPrecision { needed: i64, available: i64 },
    #[error("antiderivative is not rational ({0})")]
    LogObstruction(String),
    #[error("operators act on different variables")]
    VariableMismatch,
    #[error("division by the zero operator")]
    DivisionByZeroOperator,
    #[error("operator is not monic")]
    NotMonic,
    #[error("operator is not normalized: {0}")]
    NotNormalized(String),
    #[error("gauge function is not rational")]
    NonRationalGauge,
    #[error("coefficient has a pole at the origin")]
    PoleAtOrigin,
    #[error("parameter index {index} outside 1..={max}")]
    BadIndex { index: usize, max: usize },
    #[error("invalid Bessel data: {0}")]
    BadBesselData(String),
    #[error("P does not right-divide the base operator")]
    NotAFactor,
    #[error("P violates the x^-n sum p_k(x^N) D^k form")]
    FormViolation,
    #[error("coefficient of d^{index} grows at infinity")]
    UnboundedCoefficient { index: usize },
    #[error("truncation order {have} cannot support depth {need}")]
    TruncationTooShort { have: usize, need: usize },
    #[error("value outside the domain of the involution: {0}")]
    NotInDomain(String),
    #[error("rational reconstruction failed for coefficient of d^{index}")]
    ReconstructionFailed { index: usize },
    #[error("dual operator is not normalized: {0}")]
    NormalizationFailed(String),
    #[error("operators do not commute")]
    NotCommuting,
    #[error("ad-condition not satisfied within budget {0}")]
    AdBudgetExceeded(usize),
    #[error("operator is not of generalized Airy shape: {0}")]
    NotAiryShape(String),
    #[error("height of the zero operator")]
    ZeroOperand,
    #[error("no coefficient grows at infinity")]
    NotIncreasing,
    #[error("polynomial is not weighted-homogeneous")]
    NotHomogeneous,
    #[error("expected {expected} initial values, got {got}")]
    InitialData { expected: usize, got: usize },
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("negative exponent on d at {pos}")]
    NegativeDerivativeExponent { pos: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
