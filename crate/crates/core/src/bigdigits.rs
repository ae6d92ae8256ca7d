//! Base-`b` expansions and digit statistics.
//!
//! Expansions are little-endian: index `i` holds the digit multiplying `b^i`.
//! Zero is the empty expansion, so the most significant stored digit is
//! always nonzero.

use std::fmt;

use num_traits::{CheckedAdd, CheckedMul};

use crate::{Error, Result, UInt};

/// Rejects bases below 2.
pub fn check_base(base: u32) -> Result<()> {
    if base < 2 {
        return Err(Error::InvalidBase(base as u64));
    }
    Ok(())
}

/// A validated base-`b` digit sequence, least significant digit first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitExpansion {
    base: u32,
    digits: Vec<u32>,
}

impl DigitExpansion {
    /// Builds an expansion from little-endian digits.
    ///
    /// Every digit must lie in `0..base` and the last digit, if any, must be nonzero.
    pub fn new(base: u32, digits: Vec<u32>) -> Result<Self> {
        check_base(base)?;
        if let Some((i, d)) = digits.iter().enumerate().find(|(_, &d)| d >= base) {
            return Err(Error::MalformedExpansion(format!(
                "digit {d} at index {i} is out of range for base {base}"
            )));
        }
        if digits.last() == Some(&0) {
            return Err(Error::MalformedExpansion(format!(
                "most significant digit (index {}) is zero",
                digits.len() - 1
            )));
        }
        Ok(DigitExpansion { base, digits })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    /// Little-endian digits.
    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    /// Number of digits; zero has none.
    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.is_empty()
    }

    /// `s_b` of the represented value.
    pub fn digit_sum(&self) -> u64 {
        self.digits.iter().map(|&d| d as u64).sum()
    }

    /// `c_b` of the represented value.
    pub fn nonzero_count(&self) -> u64 {
        self.digits.iter().filter(|&&d| d != 0).count() as u64
    }

    /// Digits from the most significant end.
    pub fn most_significant_first(&self) -> impl Iterator<Item = u32> + '_ {
        self.digits.iter().rev().copied()
    }
}

impl fmt::Display for DigitExpansion {
    /// Most significant digit first. Bases up to 36 use `0-9a-z`; larger
    /// bases print decimal digit values separated by `:`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.digits.is_empty() {
            return f.write_str("0");
        }
        if self.base <= 36 {
            for d in self.most_significant_first() {
                let c = char::from_digit(d, self.base).expect("digit below base");
                write!(f, "{c}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self
                .most_significant_first()
                .map(|d| d.to_string())
                .collect();
            f.write_str(&parts.join(":"))
        }
    }
}

/// Largest power `base^w` that fits in a `u32` and in `T`, with its width `w`.
fn chunk<T: UInt>(base: u32) -> Option<(T, u32, u64)> {
    let mut width = 1u32;
    let mut value = base as u64;
    while let Some(next) = value.checked_mul(base as u64) {
        if next > u32::MAX as u64 {
            break;
        }
        value = next;
        width += 1;
    }
    loop {
        if let Some(t) = T::from_u64(value) {
            return Some((t, width, value));
        }
        if width == 1 {
            return None;
        }
        width -= 1;
        value /= base as u64;
    }
}

/// Calls `visit` on every digit of `n`, least significant first.
fn visit_digits<T: UInt>(n: &T, base: u32, mut visit: impl FnMut(u32)) -> Result<()> {
    check_base(base)?;
    if n.is_zero() {
        return Ok(());
    }
    let Some((divisor, width, _)) = chunk::<T>(base) else {
        // `base` does not fit in `T`, so `n < base` is a single digit.
        visit(n.to_u32().expect("value below base fits u32"));
        return Ok(());
    };
    let mut rest = n.clone();
    while !rest.is_zero() {
        let (q, r) = rest.div_rem(&divisor);
        let mut r = r.to_u64().expect("remainder below chunk fits u64");
        if q.is_zero() {
            while r != 0 {
                visit((r % base as u64) as u32);
                r /= base as u64;
            }
        } else {
            for _ in 0..width {
                visit((r % base as u64) as u32);
                r /= base as u64;
            }
        }
        rest = q;
    }
    Ok(())
}

/// Base-`b` expansion of `n`.
pub fn to_base<T: UInt>(n: &T, base: u32) -> Result<DigitExpansion> {
    let mut digits = Vec::new();
    visit_digits(n, base, |d| digits.push(d))?;
    Ok(DigitExpansion { base, digits })
}

/// Reconstructs `Σ d_i·b^i`. Fails only if the value does not fit in `T`.
pub fn from_base<T: UInt + CheckedAdd + CheckedMul>(e: &DigitExpansion) -> Result<T> {
    let base = T::from_u32(e.base);
    let overflow = || Error::Precondition("expansion value does not fit the target type".into());
    let mut acc = T::zero();
    for d in e.most_significant_first() {
        let base = base.clone().ok_or_else(overflow)?;
        let d = T::from_u32(d).ok_or_else(overflow)?;
        acc = acc
            .checked_mul(&base)
            .and_then(|v| v.checked_add(&d))
            .ok_or_else(overflow)?;
    }
    Ok(acc)
}

/// `s_b(n)`, the sum of the base-`b` digits.
pub fn digit_sum<T: UInt>(n: &T, base: u32) -> Result<u64> {
    let mut sum = 0u64;
    visit_digits(n, base, |d| sum += d as u64)?;
    Ok(sum)
}

/// `c_b(n)`, the number of nonzero base-`b` digits.
pub fn nonzero_count<T: UInt>(n: &T, base: u32) -> Result<u64> {
    let mut count = 0u64;
    visit_digits(n, base, |d| count += (d != 0) as u64)?;
    Ok(count)
}

/// Number of base-`b` digits of `n` (0 for `n = 0`).
pub fn digit_count<T: UInt>(n: &T, base: u32) -> Result<u64> {
    let mut count = 0u64;
    visit_digits(n, base, |_| count += 1)?;
    Ok(count)
}

/// `base^width` in `T`, or `None` if it overflows `T`.
fn block_modulus<T: UInt + CheckedMul>(base: u32, width: u32) -> Option<T> {
    let b = T::from_u32(base)?;
    let mut m = T::one();
    for _ in 0..width {
        m = m.checked_mul(&b)?;
    }
    Some(m)
}

fn check_width(width: u32) -> Result<()> {
    if width == 0 {
        return Err(Error::InvalidWidth(0));
    }
    Ok(())
}

/// Splits `n` into `width`-digit blocks `B_0, …, B_{k-1}` (least significant first)
/// with `n = Σ B_i·b^{width·i}`.
pub fn block_split<T: UInt + CheckedMul>(n: &T, base: u32, width: u32) -> Result<Vec<T>> {
    check_base(base)?;
    check_width(width)?;
    if n.is_zero() {
        return Ok(Vec::new());
    }
    let Some(modulus) = block_modulus::<T>(base, width) else {
        // b^width exceeds every value of T, so n is one block.
        return Ok(vec![n.clone()]);
    };
    let mut blocks = Vec::new();
    let mut rest = n.clone();
    while !rest.is_zero() {
        let (q, r) = rest.div_rem(&modulus);
        blocks.push(r);
        rest = q;
    }
    Ok(blocks)
}

/// The block-sum operator `G`: the sum of the `width`-digit blocks of `n`.
///
/// `G(n) ≡ n (mod b^width − 1)`, `G(n) < n` for `n ≥ b^width`, and
/// `G(n) = n` below `b^width`.
pub fn block_fold<T: UInt + CheckedMul>(n: &T, base: u32, width: u32) -> Result<T> {
    Ok(block_split(n, base, width)?
        .into_iter()
        .fold(T::zero(), |acc, b| acc + b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Natural;
    use num_traits::{One, Pow};

    #[test]
    fn expansion_of_two_to_fourteen() {
        let e = to_base(&16384u64, 10).unwrap();
        assert_eq!(e.digits(), &[4, 8, 3, 6, 1]);
        assert_eq!(e.to_string(), "16384");
        assert_eq!(from_base::<u64>(&e).unwrap(), 16384);
    }

    #[test]
    fn zero_is_empty() {
        let e = to_base(&0u32, 7).unwrap();
        assert!(e.is_zero());
        assert_eq!(e.len(), 0);
        assert_eq!(digit_sum(&0u8, 7).unwrap(), 0);
        assert_eq!(nonzero_count(&Natural::from(0u8), 3).unwrap(), 0);
        let empty = DigitExpansion::new(2, vec![]).unwrap();
        assert_eq!(from_base::<u64>(&empty).unwrap(), 0);
    }

    #[test]
    fn two_to_hundred_has_31_digits() {
        let n: Natural = Natural::from(2u8).pow(100u32);
        let e = to_base(&n, 10).unwrap();
        assert_eq!(e.len(), 31);
        assert_eq!(e.most_significant_first().next(), Some(1));
        assert_eq!(from_base::<Natural>(&e).unwrap(), n);
    }

    #[test]
    fn from_base_hand_example() {
        let e = DigitExpansion::new(10, vec![8, 0, 1]).unwrap();
        assert_eq!(from_base::<u32>(&e).unwrap(), 108);
    }

    #[test]
    fn malformed_expansions_rejected() {
        assert!(matches!(
            DigitExpansion::new(10, vec![3, 10]),
            Err(Error::MalformedExpansion(_))
        ));
        assert!(matches!(
            DigitExpansion::new(10, vec![3, 0]),
            Err(Error::MalformedExpansion(_))
        ));
        assert_eq!(DigitExpansion::new(1, vec![]), Err(Error::InvalidBase(1)));
    }

    #[test]
    fn invalid_base() {
        assert_eq!(to_base(&5u64, 1), Err(Error::InvalidBase(1)));
        assert_eq!(digit_sum(&5u64, 0), Err(Error::InvalidBase(0)));
        assert_eq!(nonzero_count(&5u64, 1), Err(Error::InvalidBase(1)));
    }

    #[test]
    fn digit_statistics() {
        assert_eq!(digit_sum(&32u32, 10).unwrap(), 5);
        assert_eq!(digit_sum(&3628800u64, 10).unwrap(), 27);
        assert_eq!(nonzero_count(&1024u64, 10).unwrap(), 3);
        assert_eq!(nonzero_count(&16384u64, 10).unwrap(), 5);
        assert_eq!(digit_sum(&16384u64, 10).unwrap(), 22);
        assert_eq!(digit_count(&16384u64, 10).unwrap(), 5);
        assert_eq!(digit_sum(&255u8, 2).unwrap(), 8);
    }

    #[test]
    fn base_wider_than_scalar() {
        let e = to_base(&200u8, 300).unwrap();
        assert_eq!(e.digits(), &[200]);
        let e = to_base(&Natural::from(300u32 * 300 + 7), 300).unwrap();
        assert_eq!(e.digits(), &[7, 0, 1]);
        assert_eq!(e.to_string(), "1:0:7");
    }

    #[test]
    fn large_bases_round_trip() {
        let n = Natural::from(u64::MAX) * Natural::from(u64::MAX);
        for base in [2u32, 3, 10, 16, 65535, 65536, 1 << 20, u32::MAX] {
            let e = to_base(&n, base).unwrap();
            assert_eq!(from_base::<Natural>(&e).unwrap(), n, "base {base}");
        }
    }

    #[test]
    fn generic_scalars_agree() {
        for n in [0u64, 1, 9, 10, 99, 12345, u32::MAX as u64, u64::MAX] {
            let big = Natural::from(n);
            for base in 2..=16 {
                assert_eq!(to_base(&n, base).unwrap(), to_base(&big, base).unwrap());
            }
        }
    }

    #[test]
    fn block_split_examples() {
        assert_eq!(block_split(&99u32, 10, 2).unwrap(), vec![99]);
        assert_eq!(block_split(&123456u32, 10, 2).unwrap(), vec![56, 34, 12]);
        assert_eq!(block_split(&0u32, 10, 2).unwrap(), Vec::<u32>::new());
        assert_eq!(block_split(&5u32, 10, 0), Err(Error::InvalidWidth(0)));
        // b^width overflowing the scalar leaves a single block.
        assert_eq!(block_split(&u64::MAX, 10, 30).unwrap(), vec![u64::MAX]);
    }

    #[test]
    fn block_split_of_sixteen_thousand() {
        // 16384 = 1 | 638 | 4 with ladder widths 1 and 3 reading low-to-high.
        let n = 16384u64;
        let (rest, low) = (n / 10, n % 10);
        let (high, mid) = (rest / 1000, rest % 1000);
        assert_eq!((low, mid, high), (4, 638, 1));
        assert_eq!(block_split(&n, 10, 1).unwrap(), vec![4, 8, 3, 6, 1]);
    }

    #[test]
    fn block_fold_examples() {
        assert_eq!(block_fold(&1188u32, 10, 2).unwrap(), 99);
        assert_eq!(block_fold(&99u32, 10, 2).unwrap(), 99);
        // Iterating from a multiple of b^r - 1 reaches b^r - 1.
        let mut m = Natural::from(99u32) * Natural::from(123_456_789u64);
        while m >= Natural::from(100u32) {
            m = block_fold(&m, 10, 2).unwrap();
        }
        assert_eq!(m, Natural::from(99u32));
        assert!(block_fold(&Natural::one(), 10, 3).unwrap().is_one());
    }
}
