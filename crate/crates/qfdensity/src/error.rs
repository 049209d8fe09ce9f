//! Error type shared by every module of the crate.

use thiserror::Error;

/// Everything that can go wrong while constructing inputs or evaluating.
///
/// Variants fall into three rough groups: input validation (`NotOddPrime`,
/// `ZeroCoefficient`, ...), violated mathematical preconditions
/// (`NotCoprime`, `DepthTooSmall`, ...), and resource or precision guards on
/// the enumeration-based evaluators (`ResourceLimit`, `NumericalInstability`).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The value failed the odd-primality check.
    #[error("{value} is not an odd prime")]
    NotOddPrime { value: u64 },

    /// Zero is divisible by every power of p, so it has no unit/exponent split.
    #[error("zero has no p-adic unit decomposition")]
    ZeroPAdicSplit,

    /// Diagonal forms must have all coefficients nonzero (the degenerate
    /// counts diverge and the density is undefined).
    #[error("diagonal form coefficient must be nonzero")]
    ZeroCoefficient,

    /// An enumeration-based evaluator was asked to exceed its cap.
    #[error("{what} = {requested} exceeds the cap of {cap}")]
    ResourceLimit {
        what: &'static str,
        requested: u64,
        cap: u64,
    },

    /// Symbolic Gauss-sum values over different primes cannot be combined.
    #[error("cannot combine Gauss-sum values over p = {left} and p = {right}")]
    PrimeMismatch { left: u64, right: u64 },

    /// The symbolic value is an irrational real or properly complex number,
    /// so it has no exact rational representation.
    #[error("value {value} is not rational")]
    IrrationalValue { value: String },

    /// A parameter that must be a p-adic unit was divisible by p.
    #[error("{name} must be coprime to {prime}")]
    NotCoprime { name: &'static str, prime: u64 },

    /// Summation limits must satisfy 0 <= n1 <= n2 (and n2 <= k when a depth
    /// k bounds the interval).
    #[error("invalid summation interval [{n1}, {n2}]")]
    InvalidInterval { n1: i64, n2: i64 },

    /// A half-integral power of p survived where the caller demanded an exact
    /// rational; the caller must absorb the sqrt(p) factor first.
    #[error("sum carries an unabsorbed factor of sqrt(p); no rational form")]
    UnabsorbedHalfPower,

    /// The float evaluator's result did not land near an integer, so its
    /// rounding cannot be trusted.
    #[error("float evaluator instability: {value} is {residual} away from the nearest integer (allowed {bound})")]
    NumericalInstability {
        value: f64,
        residual: f64,
        bound: f64,
    },

    /// The stratified nonzero-target evaluator was handed m = 0; the
    /// zero-target evaluator owns that case.
    #[error("target 0 must use the zero-target evaluator")]
    ZeroTarget,

    /// Binary-form densities are only defined here for nonzero targets.
    #[error("binary local densities require a nonzero target")]
    BinaryZeroTarget,

    /// The unit-group stratification only covers depth k past the relevant
    /// valuations; smaller k must fall back to direct counting.
    #[error("depth k = {k} is too small for the stratified evaluator (need k >= {min})")]
    DepthTooSmall { k: u32, min: u32 },

    /// The form violates the normalization assumed by a closed-form
    /// evaluator (unit leading coefficient, ascending valuations).
    #[error("form is not normalized at p = {prime}: {reason}")]
    NotNormalized { prime: u64, reason: &'static str },

    /// The unramified density formula requires p to divide none of the
    /// coefficients and not the target.
    #[error("p = {prime} divides {what}; inputs are ramified")]
    Ramified { prime: u64, what: &'static str },

    /// The special-shape density formula requires -u to be a nonresidue.
    #[error("-u must be a quadratic nonresidue mod {prime}")]
    NotAntiresidue { prime: u64 },

    /// A string did not parse as an exact rational.
    #[error("cannot parse {input:?} as a rational number")]
    RationalParse { input: String },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
