//! Exact digital sums and certified lower bounds on digit counts.
//!
//! The crate computes base-`b` digit statistics of large integers (powers,
//! factorials, `lcm(1..n)`), builds integer-arithmetic certificates for
//! lower bounds on those statistics, and evaluates linear forms in
//! logarithms with certified error radii.
//!
//! - [`bigdigits`]: base-`b` expansions, `s_b`, `c_b`, block splitting and folding.
//! - [`valuations`]: trial-division factorization, `p`-adic valuations,
//!   multiplicative dependence, prime-pair constants.
//! - [`bounds`]: exponent ladders, block-count certificates, the
//!   Stolarsky block-sum bound, factorial/LCM bounds, sparse multiples of `3^n`.
//! - [`stewart`]: gap profiles of nonzero digits, truncation splits, the
//!   linear form `Λ`, the Baker–Wüstholz bound and the `log n / (log log n + C)` floor.
//! - [`heuristics`]: uniform-digit heuristics and scan tables.
//! - [`oeis`]: b-file loading, caching and cross-checking.
//! - [`rigorous`]: fixed-point interval reals with certified radii.
//!
//! Digit and valuation routines are generic over the unsigned integer type
//! (any [`UInt`]); [`Natural`] is the arbitrary-precision instance used
//! throughout.

pub mod bigdigits;
pub mod bounds;
mod error;
pub mod heuristics;
pub mod oeis;
pub mod rigorous;
mod scalar;
pub mod stewart;
pub mod valuations;

pub use error::{Error, Result};
pub use rigorous::{Precision, RigorousReal};
pub use scalar::UInt;

/// Arbitrary-precision non-negative integer.
pub type Natural = num_bigint::BigUint;
/// Arbitrary-precision signed integer.
pub type Integer = num_bigint::BigInt;
/// Exact rational with arbitrary-precision numerator and denominator.
pub type Rational = num_rational::BigRational;

/// Resource caps for desk-scale computations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Caps {
    /// Largest `n` accepted by `n!` and `lcm(1..n)`.
    pub max_factorial_n: u64,
    /// Largest `n` accepted by the sparse-multiple search.
    pub max_sparse_n: u32,
    /// Largest exponent accepted when forming `a^n`.
    pub max_exponent: u64,
    /// Trial-division bound for factorization.
    pub factor_limit: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_factorial_n: 5000,
            max_sparse_n: 64,
            max_exponent: 100_000,
            factor_limit: valuations::DEFAULT_FACTOR_LIMIT,
        }
    }
}

impl Caps {
    pub fn check_exponent(&self, n: u64) -> Result<()> {
        if n > self.max_exponent {
            return Err(Error::ResourceLimit {
                what: "exponent",
                value: n,
                cap: self.max_exponent,
            });
        }
        Ok(())
    }

    pub fn check_factorial(&self, n: u64) -> Result<()> {
        if n > self.max_factorial_n {
            return Err(Error::ResourceLimit {
                what: "factorial/lcm argument",
                value: n,
                cap: self.max_factorial_n,
            });
        }
        Ok(())
    }
}

/// `a^n` as a [`Natural`], subject to the exponent cap.
pub fn power(a: u64, n: u64, caps: &Caps) -> Result<Natural> {
    caps.check_exponent(n)?;
    let exp = u32::try_from(n).map_err(|_| Error::ResourceLimit {
        what: "exponent",
        value: n,
        cap: u32::MAX as u64,
    })?;
    Ok(num_traits::pow::Pow::pow(Natural::from(a), exp))
}
