use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("lower half-plane zero at {re} + {im}i")]
    LowerHalfPlaneZero { re: f64, im: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("sign must be +1 or -1, got {0}")]
    InvalidSign(i32),

    #[error("negative translation {0}")]
    NegativeTranslation(f64),

    #[error("atom mass must be positive, got {0}")]
    NonPositiveMass(f64),

    #[error("atom location must be nonnegative, got {0}")]
    NegativeAtomLocation(f64),

    #[error("duplicate atom location {0}")]
    DuplicateAtom(f64),

    #[error("invalid generator: {0}")]
    InvalidGenerator(String),

    #[error("truncation order {order} exceeds the {available} available zeros")]
    Truncation { order: usize, available: usize },

    #[error("evaluation at a pole or atom location, p = {re} + {im}i")]
    Pole { re: f64, im: f64 },

    #[error("exponential overflow at p = {re} + {im}i")]
    Overflow { re: f64, im: f64 },

    #[error("too few zeros ({0}) for a convergence-exponent fit")]
    TooFewZeros(usize),

    #[error("zero at the origin")]
    ZeroAtOrigin,

    #[error("mass must be positive and finite, got {0}")]
    InvalidMass(f64),

    #[error("operator {op} is not available in the {picture} picture")]
    PictureMismatch { op: String, picture: String },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("interpolation requested beyond grid support")]
    BeyondSupport,

    #[error("target grid does not cover the image of the source grid")]
    NotCovered,

    #[error("length mismatch: {0}")]
    LengthMismatch(String),

    #[error("evaluator returned a non-finite value at R = {0}")]
    NonFiniteEvaluator(f64),

    #[error("Nyquist guard: {0}")]
    NyquistGuard(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("witness construction failed: {0}")]
    Witness(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
