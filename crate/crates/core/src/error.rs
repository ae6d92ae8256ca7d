use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid base {0}: base must be at least 2")]
    InvalidBase(u64),
    #[error("invalid block width {0}: width must be at least 1")]
    InvalidWidth(u64),
    #[error("malformed expansion: {0}")]
    MalformedExpansion(String),
    #[error("p-adic valuation of 0 is undefined")]
    UndefinedValuation,
    #[error("{0} is not prime")]
    InvalidPrime(u64),
    #[error("incomplete factorization: cofactor {cofactor} has a prime factor above {limit}")]
    IncompleteFactorization { cofactor: String, limit: u64 },
    #[error("log({a})/log({b}) is rational: {a}^{v} = {b}^{u}")]
    RationalRatio { a: u64, b: u64, u: u64, v: u64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("{what} = {value} exceeds the configured cap {cap}")]
    ResourceLimit {
        what: &'static str,
        value: u64,
        cap: u64,
    },
    #[error("domain error: {0}")]
    Domain(String),
    /// The comparison could not be decided at this working precision; retry with more bits.
    #[error("{0} bits of precision cannot decide the comparison")]
    NeedsPrecision(u32),
    #[error("comparison still undecided at the maximum precision of {0} bits")]
    Indeterminate(u32),
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

impl Error {
    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidBase(_) => "invalid-base",
            Error::InvalidWidth(_) => "invalid-width",
            Error::MalformedExpansion(_) => "malformed-expansion",
            Error::UndefinedValuation => "undefined-valuation",
            Error::InvalidPrime(_) => "invalid-prime",
            Error::IncompleteFactorization { .. } => "incomplete-factorization",
            Error::RationalRatio { .. } => "rational-log-ratio",
            Error::Precondition(_) => "precondition",
            Error::HypothesisViolation(_) => "hypothesis-violation",
            Error::ResourceLimit { .. } => "resource-limit",
            Error::Domain(_) => "domain",
            Error::NeedsPrecision(_) => "needs-precision",
            Error::Indeterminate(_) => "indeterminate",
            Error::IndexOutOfRange { .. } => "index-out-of-range",
            Error::InvalidParams(_) => "invalid-params",
        }
    }
}
