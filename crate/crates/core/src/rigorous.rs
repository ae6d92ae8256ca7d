//! Fixed-point interval reals with certified enclosures.
//!
//! A [`RigorousReal`] at precision `p` stores integer endpoints `lo ≤ hi`
//! and encloses a real value `x` with `lo·2^-p ≤ x ≤ hi·2^-p`. Every
//! operation rounds outward, so a comparison that succeeds on the
//! enclosure holds for the true value. Comparisons that the enclosure
//! cannot decide return `None`; callers escalate precision through
//! [`Precision::run`].

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Rational, Result};

/// Precision schedule: start at `start` bits and double up to `max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Precision {
    pub start: u32,
    pub max: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Precision {
            start: 128,
            max: 8192,
        }
    }
}

impl Precision {
    pub fn fixed(bits: u32) -> Self {
        Precision {
            start: bits,
            max: bits,
        }
    }

    /// Runs `attempt` at increasing precision while it reports
    /// [`Error::NeedsPrecision`]. Gives up with [`Error::Indeterminate`]
    /// once `max` bits have been tried.
    pub fn run<T>(&self, mut attempt: impl FnMut(u32) -> Result<T>) -> Result<T> {
        let mut bits = self.start.max(8);
        loop {
            match attempt(bits) {
                Err(Error::NeedsPrecision(_)) if bits < self.max => {
                    bits = bits.saturating_mul(2).min(self.max);
                }
                Err(Error::NeedsPrecision(_)) => return Err(Error::Indeterminate(bits)),
                other => return other,
            }
        }
    }
}

/// A real number known to lie in `[lo·2^-prec, hi·2^-prec]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RigorousReal {
    lo: BigInt,
    hi: BigInt,
    prec: u32,
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

fn floor_shr(a: &BigInt, bits: u32) -> BigInt {
    // `>>` on BigInt rounds toward negative infinity.
    a >> bits
}

fn ceil_shr(a: &BigInt, bits: u32) -> BigInt {
    -((-a) >> bits)
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits
}

impl RigorousReal {
    /// The exact integer `n`.
    pub fn from_integer(n: impl Into<BigInt>, prec: u32) -> Self {
        let v = n.into() << prec;
        RigorousReal {
            lo: v.clone(),
            hi: v,
            prec,
        }
    }

    /// Enclosure of the exact rational `num/den` (`den ≠ 0`).
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let (num, den) = if den.is_negative() {
            (-num, -den)
        } else {
            (num.clone(), den.clone())
        };
        let scaled = num << prec;
        RigorousReal {
            lo: floor_div(&scaled, &den),
            hi: ceil_div(&scaled, &den),
            prec,
        }
    }

    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        Self::from_ratio(q.numer(), q.denom(), prec)
    }

    /// Enclosure built from explicit bounds, used by tests and formatting helpers.
    pub fn from_bounds(lo: &Rational, hi: &Rational, prec: u32) -> Self {
        assert!(lo <= hi, "empty interval");
        let s = pow2(prec);
        RigorousReal {
            lo: floor_div(&(lo.numer() * &s), lo.denom()),
            hi: ceil_div(&(hi.numer() * &s), hi.denom()),
            prec,
        }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn lower(&self) -> Rational {
        Rational::new(self.lo.clone(), pow2(self.prec))
    }

    pub fn upper(&self) -> Rational {
        Rational::new(self.hi.clone(), pow2(self.prec))
    }

    pub fn center(&self) -> Rational {
        Rational::new(&self.lo + &self.hi, pow2(self.prec + 1))
    }

    pub fn radius(&self) -> Rational {
        Rational::new(&self.hi - &self.lo, pow2(self.prec + 1))
    }

    /// Approximate center as `f64`, for display and diagnostics only.
    pub fn to_f64(&self) -> f64 {
        let c = self.center();
        ratio_to_f64(&c)
    }

    /// Same enclosure at another precision (exact when raising precision).
    pub fn at_prec(&self, prec: u32) -> Self {
        match prec.cmp(&self.prec) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => {
                let s = prec - self.prec;
                RigorousReal {
                    lo: &self.lo << s,
                    hi: &self.hi << s,
                    prec,
                }
            }
            Ordering::Less => {
                let s = self.prec - prec;
                RigorousReal {
                    lo: floor_shr(&self.lo, s),
                    hi: ceil_shr(&self.hi, s),
                    prec,
                }
            }
        }
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        let p = self.prec.max(other.prec);
        (self.at_prec(p), other.at_prec(p))
    }

    pub fn neg(&self) -> Self {
        RigorousReal {
            lo: -&self.hi,
            hi: -&self.lo,
            prec: self.prec,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        RigorousReal {
            lo: a.lo + b.lo,
            hi: a.hi + b.hi,
            prec: a.prec,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Multiplication by an exact integer.
    pub fn mul_int(&self, k: &BigInt) -> Self {
        let (lo, hi) = (&self.lo * k, &self.hi * k);
        let (lo, hi) = if k.is_negative() { (hi, lo) } else { (lo, hi) };
        RigorousReal {
            lo,
            hi,
            prec: self.prec,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        let products = [&a.lo * &b.lo, &a.lo * &b.hi, &a.hi * &b.lo, &a.hi * &b.hi];
        let min = products.iter().min().expect("four products");
        let max = products.iter().max().expect("four products");
        RigorousReal {
            lo: floor_shr(min, a.prec),
            hi: ceil_shr(max, a.prec),
            prec: a.prec,
        }
    }

    /// Division; fails when the divisor's enclosure contains zero.
    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.contains_zero() {
            return Err(Error::Domain("division by an interval containing 0".into()));
        }
        let (a, b) = self.aligned(other);
        let p = a.prec;
        let mut lo: Option<BigInt> = None;
        let mut hi: Option<BigInt> = None;
        for x in [&a.lo, &a.hi] {
            for y in [&b.lo, &b.hi] {
                let (x, y) = if y.is_negative() {
                    (-x, -y)
                } else {
                    (x.clone(), y.clone())
                };
                let scaled = x << p;
                let f = floor_div(&scaled, &y);
                let c = ceil_div(&scaled, &y);
                lo = Some(lo.map_or(f.clone(), |l| l.min(f)));
                hi = Some(hi.map_or(c.clone(), |h| h.max(c)));
            }
        }
        Ok(RigorousReal {
            lo: lo.expect("nonempty"),
            hi: hi.expect("nonempty"),
            prec: p,
        })
    }

    pub fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            RigorousReal {
                lo: BigInt::zero(),
                hi: (-&self.lo).max(self.hi.clone()),
                prec: self.prec,
            }
        }
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// Natural logarithm; the enclosure must be strictly positive.
    pub fn ln(&self) -> Result<Self> {
        if !self.lo.is_positive() {
            return Err(if self.hi.is_positive() {
                Error::NeedsPrecision(self.prec)
            } else {
                Error::Domain("logarithm of a non-positive value".into())
            });
        }
        let den = BigUint::one() << self.prec;
        let lo = ln_ratio(self.lo.magnitude(), &den, self.prec);
        let hi = ln_ratio(self.hi.magnitude(), &den, self.prec);
        Ok(RigorousReal {
            lo: lo.lo,
            hi: hi.hi,
            prec: self.prec,
        })
    }

    /// Compares the enclosed value against an exact rational.
    ///
    /// `None` when the enclosure straddles `q`.
    pub fn cmp_rational(&self, q: &Rational) -> Option<Ordering> {
        let s = pow2(self.prec);
        let target = q.numer() * &s;
        let lo = &self.lo * q.denom();
        let hi = &self.hi * q.denom();
        if lo > target {
            Some(Ordering::Greater)
        } else if hi < target {
            Some(Ordering::Less)
        } else if lo == target && hi == target {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Certified `self < other`, `Some(false)` when certified `self ≥ other`.
    pub fn lt(&self, other: &Self) -> Option<bool> {
        let (a, b) = self.aligned(other);
        if a.hi < b.lo {
            Some(true)
        } else if a.lo >= b.hi {
            Some(false)
        } else {
            None
        }
    }

    /// Certified sign, `None` when the enclosure contains zero.
    pub fn signum(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// The center at `digits` significant digits; see [`format_sig`].
    pub fn display_center(&self, digits: usize) -> String {
        format_sig(&self.center(), digits)
    }
}

/// `ln(n)` for an integer `n ≥ 1`.
pub fn ln_natural(n: &BigUint, prec: u32) -> RigorousReal {
    ln_ratio(n, &BigUint::one(), prec)
}

/// `ln(n)` for a small integer `n ≥ 1`.
pub fn ln_u64(n: u64, prec: u32) -> RigorousReal {
    ln_natural(&BigUint::from(n), prec)
}

/// Enclosure of `ln(num/den)` for positive integers.
///
/// The argument is reduced to `f = num/(den·2^e) ∈ (1/2, 2)` and
/// `ln f = 2·atanh((f−1)/(f+1))` is summed in fixed point with `64` guard bits.
pub fn ln_ratio(num: &BigUint, den: &BigUint, prec: u32) -> RigorousReal {
    assert!(!num.is_zero() && !den.is_zero(), "logarithm of zero");
    let e = num.bits() as i64 - den.bits() as i64;
    let (n2, d2) = if e >= 0 {
        (
            BigInt::from(num.clone()),
            BigInt::from(den.clone()) << (e as u64),
        )
    } else {
        (
            BigInt::from(num.clone()) << ((-e) as u64),
            BigInt::from(den.clone()),
        )
    };
    let guard = 64 + (64 - e.unsigned_abs().leading_zeros());
    let w = prec + guard;

    let (atanh, atanh_err) = atanh_fixed(&(&n2 - &d2), &(&n2 + &d2), w);
    let mut total = atanh << 1u32;
    let mut err = BigInt::from(2 * atanh_err);
    if e != 0 {
        let (ln2_half, ln2_err) = atanh_fixed(&BigInt::one(), &BigInt::from(3), w);
        total += (ln2_half << 1u32) * e;
        err += BigInt::from(2 * ln2_err) * BigInt::from(e.unsigned_abs());
    }
    RigorousReal {
        lo: floor_shr(&(&total - &err), guard),
        hi: ceil_shr(&(&total + &err), guard),
        prec,
    }
}

/// `atanh(p/q)·2^w` for `|p/q| ≤ 1/3`, `q > 0`, with an error bound in units of `2^-w`.
fn atanh_fixed(p: &BigInt, q: &BigInt, w: u32) -> (BigInt, u64) {
    debug_assert!(q.is_positive());
    debug_assert!(BigInt::from(3) * p.abs() <= *q);
    if p.is_zero() {
        return (BigInt::zero(), 0);
    }
    let negative = p.is_negative();
    let scale = pow2(w);
    // Z ≈ |z|·2^w and Z2 ≈ z²·2^w, truncated (errors below 1 and 2 units).
    let z = (p.abs() << w) / q;
    let z2 = (&z * &z) >> w;
    let mut term = z;
    let mut sum = BigInt::zero();
    let mut terms = 0u64;
    loop {
        sum += &term / BigInt::from(2 * terms + 1);
        terms += 1;
        if term.is_zero() {
            break;
        }
        term = (&term * &z2) / &scale;
    }
    // Each power carries at most 2 units of error, each division one more;
    // the tail after a zero term is below 3 units.
    let err = 3 * terms + 3;
    (if negative { -sum } else { sum }, err)
}

fn ratio_to_f64(q: &Rational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    // Scale to ~64 significant bits before converting.
    let shift = 64 - (nb - db);
    let scaled = if shift >= 0 {
        (q.numer() << shift as u64) / q.denom()
    } else {
        q.numer() / (q.denom() << (-shift) as u64)
    };
    scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-(shift as i32))
}

/// Formats `x` with `digits` significant digits, rounding half to even on
/// the exact rational value.
///
/// Decimal exponents from −5 up to `digits − 1` print in fixed notation;
/// others print as `d.ddddde±XX`. Trailing zeros are kept so that every
/// value shows exactly `digits` significant digits. Zero prints as `0`.
pub fn format_sig(x: &Rational, digits: usize) -> String {
    assert!(digits >= 1);
    if x.is_zero() {
        return "0".to_string();
    }
    let negative = x.is_negative();
    let ax = x.abs();
    let ten = BigInt::from(10);
    // Estimate floor(log10 |x|) from bit lengths, then correct.
    let bits = ax.numer().bits() as i64 - ax.denom().bits() as i64;
    let mut exp = ((bits as f64) * std::f64::consts::LOG10_2).floor() as i64;
    let pow10 = |k: i64| -> Rational {
        if k >= 0 {
            Rational::from_integer(num_traits::pow(ten.clone(), k as usize))
        } else {
            Rational::new(BigInt::one(), num_traits::pow(ten.clone(), (-k) as usize))
        }
    };
    while pow10(exp) > ax {
        exp -= 1;
    }
    while pow10(exp + 1) <= ax {
        exp += 1;
    }
    let scaled = &ax * pow10(digits as i64 - 1 - exp);
    let mut m = round_half_even(&scaled);
    if m == num_traits::pow(ten.clone(), digits) {
        m = num_traits::pow(ten.clone(), digits - 1);
        exp += 1;
    }
    let ds = m.to_string();
    let body = if (-5..digits as i64).contains(&exp) {
        if exp >= 0 {
            let int_len = exp as usize + 1;
            if int_len >= ds.len() {
                ds.clone()
            } else {
                format!("{}.{}", &ds[..int_len], &ds[int_len..])
            }
        } else {
            format!("0.{}{}", "0".repeat((-exp - 1) as usize), ds)
        }
    } else {
        let mantissa = if ds.len() > 1 {
            format!("{}.{}", &ds[..1], &ds[1..])
        } else {
            ds.clone()
        };
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

fn round_half_even(q: &Rational) -> BigInt {
    let floor = q.floor().to_integer();
    let frac = q - Rational::from_integer(floor.clone());
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    match frac.cmp(&half) {
        Ordering::Less => floor,
        Ordering::Greater => floor + 1,
        Ordering::Equal => {
            if floor.is_even() {
                floor
            } else {
                floor + 1
            }
        }
    }
}

impl std::fmt::Display for RigorousReal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} ± {}",
            format_sig(&self.center(), 6),
            format_sig(&self.radius(), 2)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn assert_encloses(x: &RigorousReal, v: f64, tol: f64) {
        let lo = ratio_to_f64(&x.lower());
        let hi = ratio_to_f64(&x.upper());
        assert!(lo - tol <= v && v <= hi + tol, "{v} not in [{lo}, {hi}]");
    }

    #[test]
    fn ln_small_values() {
        for n in 1u64..200 {
            let x = ln_u64(n, 128);
            assert_encloses(&x, (n as f64).ln(), 1e-15);
            assert!(x.radius() < q(1, 1 << 60), "radius too large for ln {n}");
        }
    }

    #[test]
    fn ln_one_is_exact_zero() {
        let x = ln_u64(1, 64);
        assert_eq!(x.lower(), Rational::zero());
        assert_eq!(x.upper(), Rational::zero());
    }

    #[test]
    fn ln_of_power_is_multiple() {
        // ln(2^200) = 200 ln 2: the enclosures must overlap.
        let big = BigUint::one() << 200u32;
        let a = ln_natural(&big, 256);
        let b = ln_u64(2, 256).mul_int(&BigInt::from(200));
        assert!(a.lower() <= b.upper() && b.lower() <= a.upper());
    }

    #[test]
    fn ln_ratio_below_one() {
        let x = ln_ratio(&BigUint::from(1000u32), &BigUint::from(1024u32), 128);
        assert_encloses(&x, (1000f64 / 1024.0).ln(), 1e-16);
        assert_eq!(x.signum(), Some(Ordering::Less));
    }

    #[test]
    fn ln_known_constant() {
        // ln 2 = 0.693147180559945309417232121458176568...
        let x = ln_u64(2, 200);
        let lo = Rational::new(
            BigInt::from(693147180559945309417232121458u128),
            num_traits::pow(BigInt::from(10), 30),
        );
        let hi = &lo + Rational::new(BigInt::one(), num_traits::pow(BigInt::from(10), 30));
        assert_eq!(x.cmp_rational(&lo), Some(Ordering::Greater));
        assert_eq!(x.cmp_rational(&hi), Some(Ordering::Less));
    }

    #[test]
    fn arithmetic_encloses() {
        let a = RigorousReal::from_rational(&q(1, 3), 64);
        let b = RigorousReal::from_rational(&q(-2, 7), 64);
        assert_encloses(&a.add(&b), 1.0 / 3.0 - 2.0 / 7.0, 1e-15);
        assert_encloses(&a.sub(&b), 1.0 / 3.0 + 2.0 / 7.0, 1e-15);
        assert_encloses(&a.mul(&b), -2.0 / 21.0, 1e-15);
        assert_encloses(&a.div(&b).unwrap(), -7.0 / 6.0, 1e-15);
        assert_encloses(&b.abs(), 2.0 / 7.0, 1e-15);
        assert!(a.div(&RigorousReal::from_integer(0, 64)).is_err());
    }

    #[test]
    fn ln_of_interval() {
        let x = ln_u64(16, 128).ln().unwrap();
        assert_encloses(&x, 16f64.ln().ln(), 1e-15);
        let straddle = RigorousReal::from_bounds(&q(-1, 2), &q(1, 2), 64);
        assert_eq!(straddle.ln(), Err(Error::NeedsPrecision(64)));
        let negative = RigorousReal::from_integer(-3, 64);
        assert!(matches!(negative.ln(), Err(Error::Domain(_))));
    }

    #[test]
    fn precision_escalation() {
        let mut seen = Vec::new();
        let r = Precision::default().run(|p| {
            seen.push(p);
            if p < 1000 {
                Err(Error::NeedsPrecision(p))
            } else {
                Ok(p)
            }
        });
        assert_eq!(r, Ok(1024));
        assert_eq!(seen, vec![128, 256, 512, 1024]);
        let r: Result<()> = Precision {
            start: 128,
            max: 256,
        }
        .run(|p| Err(Error::NeedsPrecision(p)));
        assert_eq!(r, Err(Error::Indeterminate(256)));
    }

    #[test]
    fn sig_formatting() {
        assert_eq!(format_sig(&q(135463, 1000), 6), "135.463");
        assert_eq!(format_sig(&q(1, 3), 6), "0.333333");
        assert_eq!(format_sig(&q(2, 3), 6), "0.666667");
        assert_eq!(format_sig(&q(100, 1), 6), "100.000");
        assert_eq!(format_sig(&q(9_999_995, 10), 6), "1.00000e+06");
        assert_eq!(format_sig(&q(-1, 40), 6), "-0.0250000");
        assert_eq!(format_sig(&q(1, 1_000_000), 6), "1.00000e-06");
        assert_eq!(format_sig(&q(12_345_678, 1), 6), "1.23457e+07");
        // Half to even.
        assert_eq!(format_sig(&q(1_234_565, 10_000_000), 6), "0.123456");
        assert_eq!(format_sig(&q(1_234_575, 10_000_000), 6), "0.123458");
        assert_eq!(format_sig(&Rational::zero(), 6), "0");
    }
}
