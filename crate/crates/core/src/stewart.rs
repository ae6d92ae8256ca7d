//! Gap profiles of nonzero digits and the linear form `Λ`.
//!
//! Positions are numbered from the most significant digit: position `j`
//! holds the digit multiplying `b^{m−j}`, so the little-endian index `i`
//! sits at position `m − i`.

use std::cmp::Ordering;

use num_traits::{One, Pow, Zero};

use crate::bigdigits::{check_base, nonzero_count, to_base};
use crate::bounds::power_certificate;
use crate::rigorous::{ln_natural, ln_ratio, ln_u64, Precision, RigorousReal};
use crate::valuations::{strip_base_power, Factorizer};
use crate::{Caps, Error, Integer, Natural, Rational, Result};

fn big_pow(b: u64, e: u64) -> Natural {
    Natural::from(b).pow(u32::try_from(e).expect("exponent fits u32"))
}

/// Nonzero digits of `a^n` in base `b` with their left-based positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapProfile {
    pub a: u64,
    pub b: u64,
    pub n: u64,
    pub value: Natural,
    /// Number of base-`b` digits of `a^n`.
    pub m: u64,
    /// `1 = m_1 < … < m_k ≤ m`.
    pub positions: Vec<u64>,
    /// `d_1, …, d_k`, all in `1..b`.
    pub digits: Vec<u32>,
}

impl GapProfile {
    /// `k = c_b(a^n)`.
    pub fn k(&self) -> usize {
        self.positions.len()
    }

    /// `b^{m−1} < a^n < b^m` and the position invariants, exactly.
    pub fn verify(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::HypothesisViolation(msg.to_string()));
        if big_pow(self.b, self.m - 1) >= self.value || self.value >= big_pow(self.b, self.m) {
            return fail("b^{m-1} < a^n < b^m fails");
        }
        if self.positions.first() != Some(&1) {
            return fail("leading position is not 1");
        }
        if self.positions.windows(2).any(|w| w[0] >= w[1]) {
            return fail("positions are not increasing");
        }
        if self.positions.last().is_some_and(|&p| p > self.m) {
            return fail("position beyond m");
        }
        if self.digits.iter().any(|&d| d == 0 || d as u64 >= self.b) {
            return fail("digit out of range");
        }
        let rebuilt = self
            .positions
            .iter()
            .zip(&self.digits)
            .fold(Natural::zero(), |acc, (&p, &d)| {
                acc + big_pow(self.b, self.m - p) * d
            });
        if rebuilt != self.value {
            return fail("digits do not reproduce a^n");
        }
        Ok(())
    }

    /// `a^n = b^{m−m_k}·t` with `b^{m_k−1} < t < b^{m_k}`, checked against
    /// [`strip_base_power`].
    pub fn tail_decomposition(&self) -> Result<(u64, Natural)> {
        let mk = *self.positions.last().expect("profile is nonempty");
        let dec = strip_base_power(&self.value, self.b as u32)?;
        let t = dec.cofactor;
        if dec.exponent != self.m - mk || t <= big_pow(self.b, mk - 1) || t >= big_pow(self.b, mk) {
            return Err(Error::HypothesisViolation(format!(
                "a^n = b^(m - m_k) t fails for n = {}",
                self.n
            )));
        }
        Ok((dec.exponent, t))
    }
}

/// Builds the gap profile of `a^n`; `a` and `b` must be multiplicatively independent.
pub fn gap_profile(
    a: u64,
    b: u64,
    n: u64,
    factorizer: &Factorizer,
    caps: &Caps,
) -> Result<GapProfile> {
    let base = u32::try_from(b).map_err(|_| Error::InvalidBase(b))?;
    check_base(base)?;
    if a < 2 {
        return Err(Error::Precondition(format!("need a ≥ 2 (got {a})")));
    }
    if n == 0 {
        return Err(Error::Precondition("need n ≥ 1".into()));
    }
    if let Some((u, v)) = factorizer.multiplicative_dependence(a, b)? {
        return Err(Error::RationalRatio { a, b, u, v });
    }
    let value = crate::power(a, n, caps)?;
    let expansion = to_base(&value, base)?;
    let m = expansion.len() as u64;
    let (positions, digits) = expansion
        .most_significant_first()
        .enumerate()
        .filter(|&(_, d)| d != 0)
        .map(|(j, d)| (j as u64 + 1, d))
        .unzip();
    Ok(GapProfile {
        a,
        b,
        n,
        value,
        m,
        positions,
        digits,
    })
}

/// `a^n = b^{m−m_i}·q + r`, splitting after the `i`-th nonzero digit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncationSplit {
    pub i: usize,
    pub m_i: u64,
    pub m_next: u64,
    pub q: Natural,
    pub r: Natural,
}

/// Splits the profile at the `i`-th nonzero digit (`1 ≤ i < k`) and checks
/// every bound of the split exactly.
///
/// The lower bound on `q` is `b^{m_i−1} < q` except when `m_i = 1` and
/// `d_1 = 1`, where `q = 1 = b^0`.
pub fn split_at(p: &GapProfile, i: usize) -> Result<TruncationSplit> {
    let k = p.k();
    if k < 2 {
        return Err(Error::Precondition(format!(
            "a^n has a single nonzero digit (n = {})",
            p.n
        )));
    }
    if i == 0 || i >= k {
        return Err(Error::IndexOutOfRange {
            index: i,
            max: k - 1,
        });
    }
    let m_i = p.positions[i - 1];
    let m_next = p.positions[i];
    let shift = big_pow(p.b, p.m - m_i);
    let (q, r) = num_integer::Integer::div_rem(&p.value, &shift);
    let split = TruncationSplit {
        i,
        m_i,
        m_next,
        q,
        r,
    };
    check_split(p, &split)?;
    Ok(split)
}

fn check_split(p: &GapProfile, s: &TruncationSplit) -> Result<()> {
    let fail = |what: &str| {
        Err(Error::HypothesisViolation(format!(
            "{what} fails for n = {}, i = {}",
            p.n, s.i
        )))
    };
    let b = p.b;
    if big_pow(b, p.m - s.m_i) * &s.q + &s.r != p.value {
        return fail("a^n = b^(m - m_i) q + r");
    }
    let q_floor = big_pow(b, s.m_i - 1);
    let q_low_ok = if s.m_i == 1 && s.q.is_one() {
        s.q == q_floor
    } else {
        s.q > q_floor
    };
    if !q_low_ok || s.q >= big_pow(b, s.m_i) {
        return fail("b^(m_i - 1) < q < b^m_i");
    }
    if s.r < big_pow(b, p.m - s.m_next) || s.r >= big_pow(b, p.m - s.m_next + 1) {
        return fail("b^(m - m_(i+1)) ≤ r < b^(m - m_(i+1) + 1)");
    }
    // b^{-m_{i+1}} < a^{-n} r < b^{-m_{i+1}+2}
    let scaled = big_pow(b, s.m_next) * &s.r;
    if p.value >= scaled || scaled >= &p.value * big_pow(b, 2) {
        return fail("b^-m_(i+1) < a^-n r < b^(2 - m_(i+1))");
    }
    if big_pow(b, p.m - s.m_i) * &s.q == p.value {
        return fail("a^n ≠ b^(m - m_i) q");
    }
    Ok(())
}

/// Certified `(1/2)·ρ < −log(a^{−n} r)/log q < (3/2)·ρ` with `ρ = m_{i+1}/m_i`.
///
/// Only meaningful when `m_i ≥ 3` and `m_{i+1} ≥ 4`; returns `None` otherwise.
pub fn ratio_estimate(
    p: &GapProfile,
    s: &TruncationSplit,
    precision: Precision,
) -> Result<Option<bool>> {
    if s.m_i < 3 || s.m_next < 4 {
        return Ok(None);
    }
    let rho = Rational::new(Integer::from(s.m_next), Integer::from(s.m_i));
    let half = Rational::new(Integer::one(), Integer::from(2));
    let lower = &rho * &half;
    let upper = &rho * Rational::from_integer(Integer::from(3)) * &half;
    precision
        .run(|prec| {
            let x = ln_ratio(&p.value, &s.r, prec);
            let ratio = x
                .div(&ln_natural(&s.q, prec))
                .map_err(|_| Error::NeedsPrecision(prec))?;
            let above = ratio
                .cmp_rational(&lower)
                .ok_or(Error::NeedsPrecision(prec))?;
            let below = ratio
                .cmp_rational(&upper)
                .ok_or(Error::NeedsPrecision(prec))?;
            Ok(above == Ordering::Greater && below == Ordering::Less)
        })
        .map(Some)
}

/// `Λ = −n·log a + (m − m_i)·log b + log q` with its certified checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearForm {
    pub value: RigorousReal,
    /// `2r < a^n`, i.e. `a^{−n} r < 1/2`.
    pub small_remainder: bool,
    /// `|Λ| < 2r/a^n` on the enclosure; `None` when `small_remainder` is false.
    pub below_truncation_bound: Option<bool>,
}

impl LinearForm {
    pub fn passed(&self) -> bool {
        self.value.signum() == Some(Ordering::Less) && self.below_truncation_bound != Some(false)
    }
}

/// Evaluates `Λ` to a precision where its sign is certified and, when
/// `2r < a^n`, where `|Λ| < 2r/a^n` is decided.
pub fn linear_form(
    p: &GapProfile,
    s: &TruncationSplit,
    precision: Precision,
) -> Result<LinearForm> {
    if s.q.is_zero() {
        return Err(Error::Precondition("q must be at least 1".into()));
    }
    let small_remainder = &s.r * 2u8 < p.value;
    let bound = Rational::new(Integer::from(&s.r * 2u8), Integer::from(p.value.clone()));
    let shift = Integer::from(p.m - s.m_i);
    let n = Integer::from(p.n);
    precision.run(|prec| {
        let value = ln_u64(p.b, prec)
            .mul_int(&shift)
            .sub(&ln_u64(p.a, prec).mul_int(&n))
            .add(&ln_natural(&s.q, prec));
        // b^{m−m_i}·q = a^n − r < a^n, so Λ < 0.
        if value.signum() != Some(Ordering::Less) {
            return Err(Error::NeedsPrecision(prec));
        }
        let below_truncation_bound = if small_remainder {
            match value.abs().cmp_rational(&bound) {
                Some(Ordering::Less) => Some(true),
                Some(_) => Some(false),
                None => return Err(Error::NeedsPrecision(prec)),
            }
        } else {
            None
        };
        Ok(LinearForm {
            value,
            small_remainder,
            below_truncation_bound,
        })
    })
}

/// `log Λ` evaluated directly from the rational `b^{m−m_i}·q/a^n`.
pub fn linear_form_direct(p: &GapProfile, s: &TruncationSplit, prec: u32) -> RigorousReal {
    let num = big_pow(p.b, p.m - s.m_i) * &s.q;
    ln_ratio(&num, &p.value, prec)
}

/// A height or coefficient bound for the Baker–Wüstholz estimate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Height {
    /// Euler's number, the smallest admissible height (`log e = 1`).
    E,
    Value(Rational),
}

impl Height {
    pub fn ln(&self, prec: u32) -> RigorousReal {
        match self {
            Height::E => RigorousReal::from_integer(1, prec),
            Height::Value(q) => {
                let num = q.numer().magnitude();
                let den = q.denom().magnitude();
                ln_ratio(num, den, prec)
            }
        }
    }

    /// `Some(true)` if certified `≥ e`, `Some(false)` if certified `< e`.
    fn at_least_e(&self) -> Result<bool> {
        match self {
            Height::E => Ok(true),
            Height::Value(q) if q <= &Rational::zero() => Ok(false),
            Height::Value(_) => Precision::default().run(|prec| {
                let l = self.ln(prec);
                match l.cmp_rational(&Rational::one()) {
                    Some(Ordering::Less) => Ok(false),
                    Some(_) => Ok(true),
                    None => Err(Error::NeedsPrecision(prec)),
                }
            }),
        }
    }

    fn clamp(self) -> Result<Height> {
        Ok(if self.at_least_e()? { self } else { Height::E })
    }
}

impl From<u64> for Height {
    fn from(v: u64) -> Self {
        Height::Value(Rational::from_integer(Integer::from(v)))
    }
}

impl std::fmt::Display for Height {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Height::E => f.write_str("e"),
            Height::Value(q) => write!(f, "{q}"),
        }
    }
}

/// Parameters of `log|Λ| > −(16nd)^{2(n+2)}·log A_1 ⋯ log A_n·log B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BakerParams {
    heights: Vec<Height>,
    coefficient_bound: Height,
    degree: u64,
}

impl BakerParams {
    /// Rejects heights or `B` below `e`.
    pub fn new(heights: Vec<Height>, coefficient_bound: Height, degree: u64) -> Result<Self> {
        if heights.is_empty() || degree == 0 {
            return Err(Error::InvalidParams(
                "need at least one term and d ≥ 1".into(),
            ));
        }
        for (i, h) in heights.iter().enumerate() {
            if !h.at_least_e()? {
                return Err(Error::InvalidParams(format!(
                    "height A_{} = {h} is below e",
                    i + 1
                )));
            }
        }
        if !coefficient_bound.at_least_e()? {
            return Err(Error::InvalidParams(format!(
                "B = {coefficient_bound} is below e"
            )));
        }
        Ok(BakerParams {
            heights,
            coefficient_bound,
            degree,
        })
    }

    /// Raises every height and `B` below `e` to `e`.
    pub fn clamped(heights: Vec<Height>, coefficient_bound: Height, degree: u64) -> Result<Self> {
        let heights = heights
            .into_iter()
            .map(Height::clamp)
            .collect::<Result<_>>()?;
        BakerParams::new(heights, coefficient_bound.clamp()?, degree)
    }

    /// Parameters for `Λ = −n·log a + (m − m_i)·log b + log q` over the rationals.
    pub fn for_split(p: &GapProfile, s: &TruncationSplit) -> Result<Self> {
        let q = Height::Value(Rational::from_integer(Integer::from(s.q.clone())));
        BakerParams::clamped(
            vec![p.a.into(), p.b.into(), q],
            p.n.max(p.m - s.m_i).into(),
            1,
        )
    }

    pub fn terms(&self) -> u64 {
        self.heights.len() as u64
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn heights(&self) -> &[Height] {
        &self.heights
    }

    pub fn coefficient_bound(&self) -> &Height {
        &self.coefficient_bound
    }
}

/// `(16nd)^{2(n+2)}`.
pub fn baker_constant(terms: u64, degree: u64) -> Natural {
    let base = Natural::from(16u8) * terms * degree;
    base.pow(u32::try_from(2 * (terms + 2)).expect("term count fits"))
}

/// `−(16nd)^{2(n+2)}·∏ log A_i·log B`, a lower bound on `log|Λ|`.
pub fn baker_lower_bound(params: &BakerParams, prec: u32) -> RigorousReal {
    let constant = Integer::from(baker_constant(params.terms(), params.degree));
    params
        .heights
        .iter()
        .fold(params.coefficient_bound.ln(prec), |acc, h| {
            acc.mul(&h.ln(prec))
        })
        .mul_int(&constant)
        .neg()
}

/// One gap `m_{i+1}/m_i` of `a^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapRow {
    pub n: u64,
    pub i: usize,
    pub m_i: u64,
    pub m_next: u64,
    pub ratio: Rational,
    /// `(m_{i+1}/m_i)/log n`; `None` at `n = 1`.
    pub ratio_over_log_n: Option<RigorousReal>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapReport {
    pub rows: Vec<GapRow>,
    /// `(n, ok)`: the gaps of `a^n` multiply to `m_k`, and their logs
    /// sum to an enclosure overlapping `log m_k`.
    pub telescoping: Vec<(u64, bool)>,
    /// `max (m_{i+1}/m_i)/log n` over rows with `n ≥ 2`.
    pub empirical_c6: Option<RigorousReal>,
}

/// Every gap of `a^n` for `n` in `range`, ascending in `n` then `i`.
pub fn gap_report(
    a: u64,
    b: u64,
    range: std::ops::RangeInclusive<u64>,
    prec: u32,
    factorizer: &Factorizer,
    caps: &Caps,
) -> Result<GapReport> {
    let mut rows = Vec::new();
    let mut telescoping = Vec::new();
    let mut empirical_c6: Option<RigorousReal> = None;
    for n in range {
        let p = gap_profile(a, b, n, factorizer, caps)?;
        if p.k() < 2 {
            continue;
        }
        let log_n = (n >= 2).then(|| ln_u64(n, prec));
        let mut product = Rational::one();
        let mut log_sum = RigorousReal::from_integer(0, prec);
        for i in 1..p.k() {
            let (m_i, m_next) = (p.positions[i - 1], p.positions[i]);
            let ratio = Rational::new(Integer::from(m_next), Integer::from(m_i));
            product *= &ratio;
            log_sum = log_sum.add(&ln_ratio(&Natural::from(m_next), &Natural::from(m_i), prec));
            let ratio_over_log_n = match &log_n {
                Some(l) => Some(RigorousReal::from_rational(&ratio, prec).div(l)?),
                None => None,
            };
            if let Some(v) = &ratio_over_log_n {
                let larger = match &empirical_c6 {
                    None => true,
                    Some(best) => best.center() < v.center(),
                };
                if larger {
                    empirical_c6 = Some(v.clone());
                }
            }
            rows.push(GapRow {
                n,
                i,
                m_i,
                m_next,
                ratio,
                ratio_over_log_n,
            });
        }
        let mk = *p.positions.last().expect("k ≥ 2");
        let log_mk = ln_u64(mk, prec);
        let overlaps = log_sum.sub(&log_mk).contains_zero();
        let exact = product == Rational::from_integer(Integer::from(mk));
        telescoping.push((n, exact && overlaps));
    }
    Ok(GapReport {
        rows,
        telescoping,
        empirical_c6,
    })
}

/// `log n/(log log n + C)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StewartFloor {
    pub n: u64,
    pub value: RigorousReal,
    /// `n ≤ e^e` with `C = 0`, where `log log n ≤ 1`.
    pub below_threshold: bool,
}

pub fn stewart_floor(n: u64, c: &RigorousReal, precision: Precision) -> Result<StewartFloor> {
    if n <= 4 {
        return Err(Error::Domain(format!("need n > 4 (got {n})")));
    }
    if c.signum() == Some(Ordering::Less) {
        return Err(Error::Domain("C must be non-negative".into()));
    }
    precision.run(|prec| {
        let log_n = ln_u64(n, prec);
        let log_log_n = log_n.ln()?;
        let below_threshold = c.signum() == Some(Ordering::Equal)
            && log_log_n
                .cmp_rational(&Rational::one())
                .ok_or(Error::NeedsPrecision(prec))?
                != Ordering::Greater;
        let den = log_log_n.add(&c.at_prec(prec));
        if den.contains_zero() {
            return Err(Error::Domain("log log n + C straddles zero".into()));
        }
        Ok(StewartFloor {
            n,
            value: log_n.div(&den)?,
            below_threshold,
        })
    })
}

/// One row of [`floor_report`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FloorRow {
    pub n: u64,
    pub nonzero_count: u64,
    /// `c_b(a^n)·log log n/log n`.
    pub normalized: RigorousReal,
    /// Block-count certificate `k` when one applies to `(a, b)`.
    pub certified_k: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FloorReport {
    pub rows: Vec<FloorRow>,
    /// Row minimizing `normalized`.
    pub minimum: Option<(u64, RigorousReal)>,
    /// Every row with a certificate has `c_b(a^n) ≥ k`.
    pub certificates_hold: bool,
}

/// `c_b(a^n)·log log n/log n` over `range` (each `n ≥ 3`).
pub fn floor_report(
    a: u64,
    b: u64,
    range: std::ops::RangeInclusive<u64>,
    prec: u32,
    factorizer: &Factorizer,
    caps: &Caps,
) -> Result<FloorReport> {
    let base = u32::try_from(b).map_err(|_| Error::InvalidBase(b))?;
    if *range.start() < 3 {
        return Err(Error::Domain("log log n needs n ≥ 3".into()));
    }
    let mut rows = Vec::new();
    let mut certificates_hold = true;
    for n in range {
        let value = crate::power(a, n, caps)?;
        let c = nonzero_count(&value, base)?;
        let log_n = ln_u64(n, prec);
        let normalized = log_n.ln()?.mul_int(&Integer::from(c)).div(&log_n)?;
        let certified_k = power_certificate(a, b, n, factorizer, caps)?.map(|cert| {
            certificates_hold &= cert.passed() && c >= cert.k() as u64;
            cert.k()
        });
        rows.push(FloorRow {
            n,
            nonzero_count: c,
            normalized,
            certified_k,
        });
    }
    let minimum = rows
        .iter()
        .min_by(|x, y| x.normalized.center().cmp(&y.normalized.center()))
        .map(|r| (r.n, r.normalized.clone()));
    Ok(FloorReport {
        rows,
        minimum,
        certificates_hold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(a: u64, b: u64, n: u64) -> GapProfile {
        gap_profile(a, b, n, &Factorizer::default(), &Caps::default()).unwrap()
    }

    #[test]
    fn profiles() {
        let p = profile(2, 10, 10);
        assert_eq!((p.m, p.positions.clone(), p.k()), (4, vec![1, 3, 4], 3));
        assert_eq!(p.digits, vec![1, 2, 4]);
        p.verify().unwrap();
        let p = profile(2, 10, 1);
        assert_eq!((p.m, p.positions.clone()), (1, vec![1]));
        let p = profile(3, 10, 5);
        assert_eq!(p.positions, vec![1, 2, 3]);
    }

    #[test]
    fn dependent_pair_rejected() {
        let err = gap_profile(4, 8, 3, &Factorizer::default(), &Caps::default()).unwrap_err();
        assert_eq!(
            err,
            Error::RationalRatio {
                a: 4,
                b: 8,
                u: 2,
                v: 3
            }
        );
    }

    #[test]
    fn splits_of_1024() {
        let p = profile(2, 10, 10);
        let s = split_at(&p, 1).unwrap();
        assert_eq!(
            (s.q.clone(), s.r.clone()),
            (Natural::from(1u8), Natural::from(24u8))
        );
        let s = split_at(&p, 2).unwrap();
        assert_eq!(
            (s.q.clone(), s.r.clone()),
            (Natural::from(102u8), Natural::from(4u8))
        );
        assert!(matches!(
            split_at(&p, 3),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            split_at(&p, 0),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            split_at(&profile(2, 10, 1), 1),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn linear_form_of_1024() {
        let p = profile(2, 10, 10);
        let s = split_at(&p, 1).unwrap();
        let lf = linear_form(&p, &s, Precision::default()).unwrap();
        assert!(lf.small_remainder);
        assert_eq!(lf.below_truncation_bound, Some(true));
        assert!(lf.passed());
        let expected = -(1.024f64.ln());
        assert!((lf.value.to_f64() - expected).abs() < 1e-15);
        assert!((lf.value.to_f64() + 0.023716).abs() < 1e-6);
        let direct = linear_form_direct(&p, &s, 256);
        assert!(direct.sub(&lf.value).contains_zero());
    }

    #[test]
    fn linear_form_small_cases() {
        // 3^4 = 81 splits as 8 | 1.
        let p = profile(3, 10, 4);
        let s = split_at(&p, 1).unwrap();
        assert_eq!(s.r, Natural::one());
        assert!(linear_form(&p, &s, Precision::default()).unwrap().passed());
        // r < b^{m−m_i} ≤ a^n − r, so 2r < a^n for every split.
        let p = profile(3, 10, 3);
        let lf = linear_form(&p, &split_at(&p, 1).unwrap(), Precision::default()).unwrap();
        assert!(lf.small_remainder);
        assert_eq!(lf.below_truncation_bound, Some(true));
    }

    #[test]
    fn linear_form_escalates_for_tiny_values() {
        let p = profile(3, 10, 1000);
        for i in 1..p.k() {
            let s = split_at(&p, i).unwrap();
            let lf = linear_form(&p, &s, Precision::default()).unwrap();
            assert!(lf.passed(), "i = {i}");
        }
        // |Λ| < 10^-300 near the last split cannot be resolved at 128 bits.
        let s = split_at(&p, p.k() - 1).unwrap();
        assert_eq!(
            linear_form(&p, &s, Precision::fixed(128)),
            Err(Error::Indeterminate(128))
        );
    }

    #[test]
    fn ratio_estimates_hold() {
        let p = profile(3, 10, 200);
        let mut checked = 0;
        for i in 1..p.k() {
            let s = split_at(&p, i).unwrap();
            if let Some(ok) = ratio_estimate(&p, &s, Precision::default()).unwrap() {
                assert!(ok, "i = {i}");
                checked += 1;
            }
        }
        assert!(checked > 10);
    }

    #[test]
    fn tail_matches_strip() {
        for n in 1..60 {
            let p = profile(2, 10, n);
            let (shift, t) = p.tail_decomposition().unwrap();
            assert_eq!(big_pow(10, shift) * t, p.value);
        }
    }

    #[test]
    fn baker_constant_value() {
        assert_eq!(baker_constant(3, 1), Natural::from(64925062108545024u64));
        assert_eq!(baker_constant(3, 1), Natural::from(48u8).pow(10u32));
        assert_eq!(
            baker_constant(3, 1),
            Natural::from(2u8).pow(40u32) * Natural::from(3u8).pow(10u32)
        );
    }

    #[test]
    fn baker_minimal_heights() {
        let params = BakerParams::new(vec![Height::E; 3], Height::E, 1).unwrap();
        let bound = baker_lower_bound(&params, 128);
        let expected = -Rational::from_integer(Integer::from(baker_constant(3, 1)));
        assert_eq!(bound.cmp_rational(&expected), Some(Ordering::Equal));
    }

    #[test]
    fn baker_heights_are_validated_or_clamped() {
        assert!(matches!(
            BakerParams::new(vec![2.into(), 10.into(), 7.into()], 100.into(), 1),
            Err(Error::InvalidParams(_))
        ));
        assert!(matches!(
            BakerParams::new(vec![3.into()], 2.into(), 1),
            Err(Error::InvalidParams(_))
        ));
        let params =
            BakerParams::clamped(vec![2.into(), 10.into(), 7.into()], 100.into(), 1).unwrap();
        assert_eq!(params.heights()[0], Height::E);
        assert_eq!(params.heights()[1], Height::from(10));
        let bound = baker_lower_bound(&params, 128).to_f64();
        let expected = -64925062108545024f64 * 10f64.ln() * 7f64.ln() * 100f64.ln();
        assert!((bound / expected - 1.0).abs() < 1e-12);
        // e < 2.72 but e > 2.718.
        let just_above = Height::Value(Rational::new(Integer::from(272), Integer::from(100)));
        assert!(BakerParams::new(vec![just_above], 3.into(), 1).is_ok());
        let just_below = Height::Value(Rational::new(Integer::from(2718), Integer::from(1000)));
        assert!(BakerParams::new(vec![just_below], 3.into(), 1).is_err());
    }

    #[test]
    fn baker_params_for_split() {
        let p = profile(2, 10, 10);
        let s = split_at(&p, 2).unwrap();
        let params = BakerParams::for_split(&p, &s).unwrap();
        assert_eq!(params.terms(), 3);
        assert_eq!(params.heights()[0], Height::E);
        assert_eq!(params.heights()[2], Height::from(102));
        assert_eq!(params.coefficient_bound(), &Height::from(10));
    }

    #[test]
    fn gap_reports() {
        let f = Factorizer::default();
        let caps = Caps::default();
        let r = gap_report(3, 10, 5..=5, 128, &f, &caps).unwrap();
        let ratios: Vec<Rational> = r.rows.iter().map(|row| row.ratio.clone()).collect();
        assert_eq!(
            ratios,
            vec![
                Rational::from_integer(Integer::from(2)),
                Rational::new(Integer::from(3), Integer::from(2))
            ]
        );
        let r = gap_report(2, 10, 10..=10, 128, &f, &caps).unwrap();
        let ratios: Vec<Rational> = r.rows.iter().map(|row| row.ratio.clone()).collect();
        assert_eq!(
            ratios,
            vec![
                Rational::from_integer(Integer::from(3)),
                Rational::new(Integer::from(4), Integer::from(3))
            ]
        );
        assert_eq!(r.telescoping, vec![(10, true)]);
        let r = gap_report(2, 10, 1..=3, 128, &f, &caps).unwrap();
        assert!(r.rows.is_empty());
        let r = gap_report(3, 10, 2..=100, 128, &f, &caps).unwrap();
        assert!(r.telescoping.iter().all(|&(_, ok)| ok));
        assert!(r.empirical_c6.is_some());
    }

    #[test]
    fn floors() {
        let zero = RigorousReal::from_integer(0, 128);
        let f = stewart_floor(1000, &zero, Precision::default()).unwrap();
        assert!((f.value.to_f64() - 3.574).abs() < 1e-3);
        assert!(!f.below_threshold);
        let f = stewart_floor(16, &zero, Precision::default()).unwrap();
        assert!((f.value.to_f64() - 2.719).abs() < 1e-3);
        assert!(!f.below_threshold);
        let f = stewart_floor(15, &zero, Precision::default()).unwrap();
        assert!(f.below_threshold);
        assert!(matches!(
            stewart_floor(4, &zero, Precision::default()),
            Err(Error::Domain(_))
        ));
        let straddle = RigorousReal::from_bounds(
            &Rational::from_integer(Integer::from(-2)),
            &Rational::new(Integer::one(), Integer::from(2)),
            128,
        );
        assert!(matches!(
            stewart_floor(1000, &straddle, Precision::default()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn floor_reports() {
        let f = Factorizer::default();
        let r = floor_report(3, 10, 10..=100, 128, &f, &Caps::default()).unwrap();
        assert_eq!(r.rows.len(), 91);
        assert!(r.rows.iter().all(|row| row.certified_k.is_none()));
        assert!(r.certificates_hold);
        assert!(r.minimum.is_some());
        let r = floor_report(2, 10, 10..=60, 128, &f, &Caps::default()).unwrap();
        assert!(r.rows.iter().all(|row| row.certified_k.is_some()));
        assert!(r.certificates_hold);
    }
}
