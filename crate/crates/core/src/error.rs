use alloc::string::String;

/// Errors raised by the core pipeline.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("truncation exceeds curve range: J = {requested} requested, largest feasible J is {max_feasible}")]
    TruncationExceedsRange { requested: usize, max_feasible: usize },

    #[error("no dyadic slope 2^-j with j <= {searched} lies in the range of the derivative")]
    NoFeasibleSlope { searched: u32 },

    #[error("classification undefined: |a_j| is not monotone at position {position}")]
    ClassificationUndefined { position: usize },

    #[error("sequence too short: need at least {needed} steps, got {got}")]
    TooShort { needed: usize, got: usize },

    #[error("sequence is not strictly monotone at position {position}")]
    NotMonotone { position: usize },

    #[error("sequences have different lengths ({a} vs {b})")]
    LengthMismatch { a: usize, b: usize },

    #[error("staircase needs a decreasing sequence; use increasing_staircase_symbol")]
    UseIncreasingStaircase,

    #[error("increasing staircase needs strictly increasing sequences")]
    DecreasingRejected,

    #[error("limit required: b_inf must be a finite limit of b_j")]
    LimitRequired,

    #[error("empty interval: lo = {lo}, hi = {hi}")]
    EmptyInterval { lo: f64, hi: f64 },

    #[error("empty collection")]
    EmptyCollection,

    #[error("polygon segment {index} has slope {slope}, outside (0, 1)")]
    SlopeOutOfRange { index: usize, slope: f64 },

    #[error("polygon vertices must strictly decrease in both coordinates (vertex {index})")]
    VerticesNotDecreasing { index: usize },

    #[error("grid size {0} is not a power of two >= 2")]
    NotPowerOfTwo(usize),

    #[error("grids do not match")]
    GridMismatch,

    #[error("invalid exponent triple ({p1}, {p2}, {p3}): {reason}")]
    BadExponents { p1: f64, p2: f64, p3: f64, reason: &'static str },

    #[error("exponent {0} is below 1")]
    ExponentBelowOne(f64),

    #[error("symbol is unbounded and no window was supplied")]
    UnboundedSymbol,

    #[error("symbol is undefined at ({xi}, {eta})")]
    SymbolUndefined { xi: f64, eta: f64 },

    #[error("function is identically zero")]
    ZeroFunction,

    #[error("empty scale range")]
    EmptyScaleRange,

    #[error("window too small to contain any {0}")]
    WindowTooSmall(&'static str),

    #[error("enumeration would produce more than {limit} items")]
    TooManyItems { limit: usize },

    #[error("tiles and filters disagree: {0}")]
    ParameterMismatch(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
