use thiserror::Error;

/// Errors raised by model validation and the solvers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("no finite reserve: {0}")]
    NoFiniteReserve(String),

    #[error("density undefined at w = {0}")]
    DensityUndefined(f64),

    #[error("per-item check unsound for this class")]
    PerItemUnsound,

    #[error("exhaustive verification infeasible for n = {0}")]
    VerificationInfeasible(usize),

    #[error("demand oracle requires small assortment (|T| = {0} > 22)")]
    AssortmentTooLarge(usize),

    #[error("brute force infeasible for n = {n} (limit {limit})")]
    BruteForceInfeasible { n: usize, limit: usize },

    #[error("hypothesis violated; use brute force or DP: {0}")]
    HypothesisViolated(String),

    #[error("dp requires additive k-demand valuation")]
    DpRequiresKDemand,

    #[error("exact arithmetic unavailable: {0}")]
    ExactUnavailable(String),

    #[error("not well-priced: violating set {0:?}")]
    NotWellPriced(Vec<usize>),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("rounding assumes nonincreasing revenue curve (R({at}) = {value} > {bound})")]
    IncreasingRevenue { at: f64, value: f64, bound: f64 },

    #[error("valuation is not certified gross substitutes")]
    NotGrossSubstitutes,

    #[error("insufficient sampling coverage: {0}")]
    InsufficientCoverage(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Whether the error is a refused precondition (as opposed to malformed input).
    pub fn is_precondition(&self) -> bool {
        !matches!(
            self,
            Error::InvalidInstance(_) | Error::InvalidDistribution(_) | Error::Parse(_) | Error::Internal(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
