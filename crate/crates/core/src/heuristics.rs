//! Uniform-digit heuristics and scan tables.
//!
//! If the base-`b` digits of `N` behaved like independent uniform draws,
//! `s_b(N)` would be about `(b−1)/2` times the digit count `log N/log b`.

use std::fmt;
use std::ops::RangeInclusive;

use rayon::prelude::*;

use crate::bigdigits::{check_base, digit_count, digit_sum, nonzero_count};
use crate::bounds::{
    factorials_upto, lcms_upto, power_certificate, special_value_bound, SpecialKind,
};
use crate::rigorous::{ln_u64, RigorousReal};
use crate::valuations::Factorizer;
use crate::{Caps, Error, Integer, Natural, Rational, Result};

/// Working precision of heuristic values; they are estimates, not certificates.
pub const HEURISTIC_PRECISION: u32 = 128;

fn half_span(b: u64) -> Rational {
    Rational::new(Integer::from(b - 1), Integer::from(2))
}

/// `((b−1)/2)·n·log a/log b`.
pub fn heuristic_power(n: u64, a: u64, b: u64) -> Result<RigorousReal> {
    if a < 2 || b < 2 {
        return Err(Error::Precondition(format!("need a, b ≥ 2 (got {a}, {b})")));
    }
    let prec = HEURISTIC_PRECISION;
    let scale = RigorousReal::from_rational(&(half_span(b) * Integer::from(n)), prec);
    scale.mul(&ln_u64(a, prec)).div(&ln_u64(b, prec))
}

/// `((b−1)/2)·log(n!)/log b` with the exact sum of logs, or
/// `((b−1)/2)·n/log b` for `lcm(1..n)`. `0! = 1` gives the empty sum.
pub fn heuristic_special(kind: SpecialKind, n: u64, b: u64) -> Result<RigorousReal> {
    if b < 2 {
        return Err(Error::InvalidBase(b));
    }
    if n == 0 && kind == SpecialKind::Lcm {
        return Err(Error::Precondition("lcm(1..n) needs n ≥ 1".into()));
    }
    let prec = HEURISTIC_PRECISION;
    let half = RigorousReal::from_rational(&half_span(b), prec);
    let log_size = match kind {
        SpecialKind::Factorial => (2..=n).fold(RigorousReal::from_integer(0, prec), |acc, k| {
            acc.add(&ln_u64(k, prec))
        }),
        SpecialKind::Lcm => RigorousReal::from_integer(n, prec),
    };
    half.mul(&log_size).div(&ln_u64(b, prec))
}

/// Which sequence a scan walks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScanKind {
    /// `a^n` in base `b`.
    Power {
        a: u64,
        b: u64,
    },
    Factorial {
        b: u64,
    },
    Lcm {
        b: u64,
    },
}

impl ScanKind {
    pub fn base(&self) -> u64 {
        match *self {
            ScanKind::Power { b, .. } | ScanKind::Factorial { b } | ScanKind::Lcm { b } => b,
        }
    }

    pub fn bound_kind(&self) -> BoundKind {
        match self {
            ScanKind::Power { .. } => BoundKind::NonzeroCount,
            _ => BoundKind::DigitSum,
        }
    }
}

impl fmt::Display for ScanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScanKind::Power { a, b } => write!(f, "power a={a} b={b}"),
            ScanKind::Factorial { b } => write!(f, "factorial b={b}"),
            ScanKind::Lcm { b } => write!(f, "lcm b={b}"),
        }
    }
}

/// The statistic a scan's certified bound applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundKind {
    /// A block-count certificate, bounding `c_b`.
    NonzeroCount,
    /// `(b−1)·⌊log_b(n+1)⌋`, bounding `s_b`.
    DigitSum,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanRow {
    pub n: u64,
    pub digit_count: u64,
    pub s_b: u64,
    pub c_b: u64,
    pub certified_bound: u64,
    pub bound_kind: BoundKind,
    pub heuristic: RigorousReal,
}

impl ScanRow {
    /// `c_b ≤ s_b ≤ (b−1)·c_b` and the certified bound does not exceed its statistic.
    pub fn is_consistent(&self, b: u64) -> bool {
        let bounded = match self.bound_kind {
            BoundKind::NonzeroCount => self.certified_bound <= self.c_b,
            BoundKind::DigitSum => self.certified_bound <= self.s_b,
        };
        bounded
            && self.c_b <= self.s_b
            && self.s_b <= (b - 1) * self.c_b
            && self.c_b <= self.digit_count
    }
}

fn row(
    kind: ScanKind,
    n: u64,
    value: &Natural,
    factorizer: &Factorizer,
    caps: &Caps,
) -> Result<ScanRow> {
    let b = kind.base();
    let base = b as u32;
    let (certified_bound, heuristic) = match kind {
        ScanKind::Power { a, b } => {
            let k = power_certificate(a, b, n, factorizer, caps)?.map_or(1, |c| c.k() as u64);
            (k, heuristic_power(n, a, b)?)
        }
        ScanKind::Factorial { .. } | ScanKind::Lcm { .. } => {
            let special = if matches!(kind, ScanKind::Factorial { .. }) {
                SpecialKind::Factorial
            } else {
                SpecialKind::Lcm
            };
            let bound = special_value_bound(special, n, base, caps)?.bound;
            (bound, heuristic_special(special, n, b)?)
        }
    };
    Ok(ScanRow {
        n,
        digit_count: digit_count(value, base)?,
        s_b: digit_sum(value, base)?,
        c_b: nonzero_count(value, base)?,
        certified_bound,
        bound_kind: kind.bound_kind(),
        heuristic,
    })
}

/// Rows for every `n` in `range`, in ascending `n`.
///
/// Values are built sequentially by running products; digit statistics
/// are computed in parallel and collected in order.
pub fn scan(kind: ScanKind, range: RangeInclusive<u64>, caps: &Caps) -> Result<Vec<ScanRow>> {
    let b = kind.base();
    check_base(u32::try_from(b).map_err(|_| Error::InvalidBase(b))?)?;
    if range.is_empty() {
        return Ok(Vec::new());
    }
    let (lo, hi) = (*range.start(), *range.end());
    let values: Vec<Natural> = match kind {
        ScanKind::Power { a, .. } => {
            if a < 2 {
                return Err(Error::Precondition(format!("need a ≥ 2 (got {a})")));
            }
            caps.check_exponent(hi)?;
            let mut acc = crate::power(a, lo, caps)?;
            let mut out = Vec::with_capacity((hi - lo + 1) as usize);
            for _ in lo..=hi {
                out.push(acc.clone());
                acc *= a;
            }
            out
        }
        ScanKind::Factorial { .. } => factorials_upto(hi, caps)?.split_off(lo as usize),
        ScanKind::Lcm { .. } => {
            if lo == 0 {
                return Err(Error::Precondition("lcm scans start at n ≥ 1".into()));
            }
            lcms_upto(hi, caps)?.split_off(lo as usize)
        }
    };
    let factorizer = Factorizer::new(caps.factor_limit);
    values
        .par_iter()
        .enumerate()
        .map(|(i, value)| row(kind, lo + i as u64, value, &factorizer, caps))
        .collect()
}
