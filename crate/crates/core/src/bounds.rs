//! Certified lower bounds on `c_b` and `s_b`.
//!
//! Everything that enters a certificate is an exact integer comparison.
//! Enclosures from [`crate::rigorous`] appear only where a logarithm is
//! part of the statement being checked (the ladder growth estimate and the
//! `C·log n` constant).

use std::fmt;

use num_integer::Integer as _;
use num_traits::{CheckedMul, One, Pow, Zero};

use crate::bigdigits::{block_fold, check_base, digit_sum, nonzero_count};
use crate::rigorous::{ln_u64, Precision, RigorousReal};
use crate::valuations::{coprime_split, nu, Factorizer};
use crate::{Caps, Error, Integer, Natural, Rational, Result, UInt};

fn pow_u64(base: u64, exp: u64) -> Natural {
    Natural::from(base).pow(u32::try_from(exp).expect("exponent checked against caps"))
}

fn check_ladder_pair(a: u64, b: u64) -> Result<()> {
    if a < 2 || b <= a || !b.is_multiple_of(a) {
        return Err(Error::Precondition(format!(
            "ladders need 2 ≤ a < b with a | b (got a = {a}, b = {b})"
        )));
    }
    Ok(())
}

/// Exponents `e_1 < e_2 < …` with `e_1 ≥ 1` and `a^{e_k} > b^{e_{k-1}}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentLadder {
    a: u64,
    b: u64,
    exponents: Vec<u64>,
}

impl ExponentLadder {
    /// Validates an explicit exponent sequence by exact comparison.
    pub fn from_exponents(a: u64, b: u64, exponents: Vec<u64>) -> Result<Self> {
        check_ladder_pair(a, b)?;
        let ladder = ExponentLadder { a, b, exponents };
        ladder.verify()?;
        Ok(ladder)
    }

    /// The ladder `e_k = 4^{k-1}` for `a = 2`, `b = 10`.
    pub fn base_four(k: usize) -> Self {
        let exponents = (0..k as u32).map(|i| 4u64.pow(i)).collect();
        ExponentLadder {
            a: 2,
            b: 10,
            exponents,
        }
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    /// Re-checks `e_1 ≥ 1` and `a^{e_k} > b^{e_{k-1}}` exactly.
    pub fn verify(&self) -> Result<()> {
        if let Some(&first) = self.exponents.first() {
            if first < 1 {
                return Err(Error::HypothesisViolation("e_1 must be at least 1".into()));
            }
        }
        for (k, w) in self.exponents.windows(2).enumerate() {
            if pow_u64(self.a, w[1]) <= pow_u64(self.b, w[0]) {
                return Err(Error::HypothesisViolation(format!(
                    "{}^{} ≤ {}^{} at k = {}",
                    self.a,
                    w[1],
                    self.b,
                    w[0],
                    k + 2
                )));
            }
        }
        Ok(())
    }

    /// Checks `e_k ≤ Σ_{i<k} r^i < r^k/(r−1)` for `r = log b / log a`.
    ///
    /// When `r` is rational the sums are exact rationals and the first
    /// inequality may be an equality; otherwise it is certified strict on
    /// enclosures, escalating precision as needed.
    pub fn growth_estimate(
        &self,
        factorizer: &Factorizer,
        precision: Precision,
    ) -> Result<Vec<LadderEstimate>> {
        if let Some((u, v)) = factorizer.multiplicative_dependence(self.a, self.b)? {
            // a^v = b^u, so r = v/u.
            let r = Rational::new(Integer::from(v), Integer::from(u));
            let one = Rational::one();
            let mut rows = Vec::new();
            let mut sum = Rational::zero();
            let mut power = one.clone();
            for (k, &e) in self.exponents.iter().enumerate() {
                sum += &power;
                power *= &r;
                let closed = &power / (&r - &one);
                let e = Rational::from_integer(Integer::from(e));
                rows.push(LadderEstimate {
                    k: k + 1,
                    exponent: self.exponents[k],
                    geometric_sum: RigorousReal::from_rational(&sum, precision.start),
                    closed_form: RigorousReal::from_rational(&closed, precision.start),
                    below_sum: e <= sum,
                    strict: e < sum,
                    below_closed_form: sum < closed,
                });
            }
            return Ok(rows);
        }
        precision.run(|prec| {
            let r = ln_u64(self.b, prec).div(&ln_u64(self.a, prec))?;
            let r_minus_one = r.sub(&RigorousReal::from_integer(1, prec));
            let mut rows = Vec::new();
            let mut sum = RigorousReal::from_integer(0, prec);
            let mut power = RigorousReal::from_integer(1, prec);
            for (k, &e) in self.exponents.iter().enumerate() {
                sum = sum.add(&power);
                power = power.mul(&r);
                let closed = power.div(&r_minus_one)?;
                // e_1 = 1 is the empty-tail sum exactly.
                let below_sum = k == 0
                    || RigorousReal::from_integer(e, prec)
                        .lt(&sum)
                        .ok_or(Error::NeedsPrecision(prec))?;
                let below_closed = sum.lt(&closed).ok_or(Error::NeedsPrecision(prec))?;
                rows.push(LadderEstimate {
                    k: k + 1,
                    exponent: e,
                    geometric_sum: sum.clone(),
                    closed_form: closed,
                    below_sum,
                    strict: below_sum && k > 0,
                    below_closed_form: below_closed,
                });
            }
            Ok(rows)
        })
    }
}

impl fmt::Display for ExponentLadder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.exponents.iter().map(u64::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

/// One row of [`ExponentLadder::growth_estimate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LadderEstimate {
    pub k: usize,
    pub exponent: u64,
    pub geometric_sum: RigorousReal,
    pub closed_form: RigorousReal,
    /// `e_k ≤ Σ_{i<k} r^i`.
    pub below_sum: bool,
    /// `e_k < Σ_{i<k} r^i`; never holds at `k = 1`.
    pub strict: bool,
    /// `Σ_{i<k} r^i < r^k/(r−1)`.
    pub below_closed_form: bool,
}

/// The ladder with `e_1 = 1` and each `e_k` the least exponent with
/// `a^{e_k} > b^{e_{k-1}}`, found by exact search.
pub fn exponent_ladder(a: u64, b: u64, k: usize, caps: &Caps) -> Result<ExponentLadder> {
    check_ladder_pair(a, b)?;
    let mut exponents: Vec<u64> = Vec::with_capacity(k);
    let ratio = (b as f64).ln() / (a as f64).ln();
    for i in 0..k {
        let e = match exponents.last() {
            None => 1,
            Some(&prev) => {
                let target = pow_u64(b, prev);
                let mut e = ((prev as f64) * ratio).floor().max(1.0) as u64;
                caps.check_exponent(e)?;
                while e > 1 && pow_u64(a, e - 1) > target {
                    e -= 1;
                }
                while pow_u64(a, e) <= target {
                    e += 1;
                    caps.check_exponent(e)?;
                }
                e
            }
        };
        if i > 0 {
            caps.check_exponent(e)?;
        }
        exponents.push(e);
    }
    Ok(ExponentLadder { a, b, exponents })
}

/// Largest `e` with `a^e | n` (`n ≥ 1`, `a ≥ 2`).
pub fn power_multiplicity(n: &Natural, a: u64) -> u64 {
    let a = Natural::from(a);
    let mut rest = n.clone();
    let mut e = 0;
    while !rest.is_zero() {
        let (q, r) = rest.div_rem(&a);
        if !r.is_zero() {
            break;
        }
        rest = q;
        e += 1;
    }
    e
}

/// The shortest minimal ladder whose last exponent exceeds `multiplicity`,
/// so every usable level for an `N` with `ν_a(N) = multiplicity` is present.
pub fn covering_ladder(a: u64, b: u64, multiplicity: u64, caps: &Caps) -> Result<ExponentLadder> {
    let mut ladder = exponent_ladder(a, b, 1, caps)?;
    while ladder.exponents.last().is_some_and(|&e| e <= multiplicity) {
        let next = exponent_ladder(a, b, ladder.len() + 1, caps)?;
        ladder = next;
    }
    Ok(ladder)
}

/// One division step `N_j = b^{e_{j-1}}·q + r` of a block certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSplit {
    /// Level `j` of the induction (from `k` down to 2).
    pub level: usize,
    /// `e_{j-1}`.
    pub exponent: u64,
    pub quotient: Natural,
    pub remainder: Natural,
}

/// Certificate that `c_b(N) ≥ k` from `a^{e_k} | N` and `b ∤ N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockCertificate {
    pub n: Natural,
    pub a: u64,
    pub b: u64,
    pub ladder: Vec<u64>,
    pub k: usize,
    pub splits: Vec<BlockSplit>,
    /// `c_b(N)` computed directly, for the cross-check `k ≤ c_b(N)`.
    pub nonzero_count: u64,
}

impl BlockCertificate {
    /// Replays every split and re-checks the induction hypotheses.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::HypothesisViolation(msg));
        let b = Natural::from(self.b);
        if self.n.is_zero() || (&self.n % &b).is_zero() {
            return fail(format!("{} divides N", self.b));
        }
        if self.splits.len() + 1 != self.k.max(1) {
            return fail("split count does not match k".into());
        }
        let mut current = self.n.clone();
        for (step, split) in self.splits.iter().enumerate() {
            let level = self.k - step;
            if split.level != level || split.exponent != self.ladder[level - 2] {
                return fail(format!("split {step} is out of order"));
            }
            let block = pow_u64(self.b, split.exponent);
            if &block * &split.quotient + &split.remainder != current {
                return fail(format!(
                    "split at level {level} does not reproduce its input"
                ));
            }
            if split.quotient.is_zero() || split.remainder >= block {
                return fail(format!(
                    "split at level {level} is not a division with q ≥ 1"
                ));
            }
            if !(&split.remainder % pow_u64(self.a, split.exponent)).is_zero() {
                return fail(format!(
                    "remainder at level {level} is not divisible by {}^{}",
                    self.a, split.exponent
                ));
            }
            if (&split.remainder % &b).is_zero() {
                return fail(format!(
                    "remainder at level {level} is divisible by {}",
                    self.b
                ));
            }
            current = split.remainder.clone();
        }
        if (self.nonzero_count as usize) < self.k {
            return fail(format!(
                "c_{}(N) = {} is below the certified {}",
                self.b, self.nonzero_count, self.k
            ));
        }
        Ok(())
    }

    pub fn passed(&self) -> bool {
        self.validate().is_ok()
    }
}

/// Certifies `c_b(N) ≥ k` for the largest `k` with `a^{e_k} | N`.
///
/// With no ladder entry dividing `N` the certificate is the trivial `k = 1`.
pub fn certify_block_count(n: &Natural, ladder: &ExponentLadder) -> Result<BlockCertificate> {
    let (a, b) = (ladder.a, ladder.b);
    let big_b = Natural::from(b);
    if n.is_zero() || (n % &big_b).is_zero() {
        return Err(Error::HypothesisViolation(format!("{b} divides N")));
    }
    let k = ladder
        .exponents
        .iter()
        .take_while(|&&e| (n % pow_u64(a, e)).is_zero())
        .count()
        .max(1);
    let mut splits = Vec::with_capacity(k.saturating_sub(1));
    let mut current = n.clone();
    for level in (2..=k).rev() {
        let exponent = ladder.exponents[level - 2];
        let (quotient, remainder) = current.div_rem(&pow_u64(b, exponent));
        current = remainder.clone();
        splits.push(BlockSplit {
            level,
            exponent,
            quotient,
            remainder,
        });
    }
    Ok(BlockCertificate {
        n: n.clone(),
        a,
        b,
        ladder: ladder.exponents.clone(),
        k,
        splits,
        nonzero_count: nonzero_count(n, b as u32)?,
    })
}

/// `⌈log_4 n⌉` with an enclosure of `log_4 n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorollaryFloor {
    pub n: u64,
    pub ceil_log4: u32,
    pub log4: RigorousReal,
}

pub fn corollary_floor(n: u64) -> Result<CorollaryFloor> {
    if n <= 1 {
        return Err(Error::Precondition(format!("need n > 1 (got {n})")));
    }
    let mut k = 0u32;
    while 4u128.pow(k) < n as u128 {
        k += 1;
    }
    let prec = 128;
    let log4 = ln_u64(n, prec).div(&ln_u64(4, prec))?;
    Ok(CorollaryFloor {
        n,
        ceil_log4: k,
        log4,
    })
}

/// `c_10(a^n) ≥ ⌈log_4 n⌉` for even `a` not divisible by 10, certified
/// with the ladder `e_k = 4^{k-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorollaryCertificate {
    pub a: u64,
    pub floor: CorollaryFloor,
    pub certificate: BlockCertificate,
}

impl CorollaryCertificate {
    pub fn passed(&self) -> bool {
        self.certificate.passed() && self.certificate.k >= self.floor.ceil_log4 as usize
    }
}

pub fn certify_corollary(a: u64, n: u64, caps: &Caps) -> Result<CorollaryCertificate> {
    if !a.is_multiple_of(2) || a.is_multiple_of(10) {
        return Err(Error::Precondition(format!(
            "a must be even and not divisible by 10 (got {a})"
        )));
    }
    let floor = corollary_floor(n)?;
    let value = crate::power(a, n, caps)?;
    let nu2 = nu(&value, 2)?;
    let mut len = 1usize;
    while 4u128.pow(len as u32 - 1) <= nu2 as u128 {
        len += 1;
    }
    let certificate = certify_block_count(&value, &ExponentLadder::base_four(len))?;
    Ok(CorollaryCertificate {
        a,
        floor,
        certificate,
    })
}

/// A rational `C` strictly below `1/log(log b / log a)`, within relative
/// error `10^-6` of it.
pub fn admissible_constant(a: u64, b: u64) -> Result<Rational> {
    check_ladder_pair(a, b)?;
    let tolerance = Rational::new(Integer::one(), Integer::from(1_000_000));
    Precision::default().run(|prec| {
        let r = ln_u64(b, prec).div(&ln_u64(a, prec))?;
        let log_r = r.ln()?;
        let inv = RigorousReal::from_integer(1, prec)
            .div(&log_r)
            .map_err(|_| Error::NeedsPrecision(prec))?;
        let lower = inv.lower() - Rational::new(Integer::one(), Integer::one() << prec);
        if lower <= Rational::zero() || (inv.upper() - &lower) / &lower >= tolerance {
            return Err(Error::NeedsPrecision(prec));
        }
        Ok(lower)
    })
}

/// General power certificate: strip `b`-powers from `a^n`, pick a prime
/// `p` of the reduced divisor `d`, and certify `c_b(a^n) = c_b(s) ≥ k` with a
/// ladder for `(p, b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerCertificate {
    pub a: u64,
    pub b: u64,
    pub n: u64,
    pub d: u64,
    pub p: u64,
    /// `ν_p(s)` where `a^n = b^m·s`, `b ∤ s`.
    pub nu_p: u64,
    /// `ν_p(t) ≥ c1·n` for `d^n = b^m·t`.
    pub valuation_bound_holds: bool,
    pub block: BlockCertificate,
}

impl PowerCertificate {
    pub fn k(&self) -> usize {
        self.block.k
    }

    pub fn passed(&self) -> bool {
        self.valuation_bound_holds && self.block.passed()
    }
}

/// `None` when no prime of `a` yields a ladder: `a` shares no prime with
/// `b`, or its shared part `d` has `log d / log b` rational.
pub fn power_certificate(
    a: u64,
    b: u64,
    n: u64,
    factorizer: &Factorizer,
    caps: &Caps,
) -> Result<Option<PowerCertificate>> {
    check_base(u32::try_from(b).map_err(|_| Error::InvalidBase(b))?)?;
    if a < 2 {
        return Err(Error::Precondition(format!("need a ≥ 2 (got {a})")));
    }
    caps.check_exponent(n)?;
    let d = factorizer.reduced_divisor(a, b)?;
    if d == 1 || factorizer.multiplicative_dependence(d, b)?.is_some() {
        return Ok(None);
    }
    let pair = factorizer.select_prime_pair(d, b)?;
    let p = pair.p;
    if p >= b {
        return Ok(None);
    }
    let split = coprime_split(a, b as u32, n, factorizer)?;
    let nu_p = nu(&split.s, p)?;
    let valuation_bound_holds = n == 0 || pair.bound_holds(nu(&split.t, p)?, n);
    let ladder = covering_ladder(p, b, nu_p, caps)?;
    let block = certify_block_count(&split.s, &ladder)?;
    Ok(Some(PowerCertificate {
        a,
        b,
        n,
        d,
        p,
        nu_p,
        valuation_bound_holds,
        block,
    }))
}

/// One `n` of the `c_b(a^n) > C·log n` scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogBoundRow {
    pub n: u64,
    pub nonzero_count: u64,
    /// `false` when `b | a^n`, which puts the instance outside the hypothesis.
    pub applicable: bool,
    pub certified_k: Option<usize>,
    pub c_log_n: RigorousReal,
    /// `c_b(a^n) > C·log n`, decided on enclosures.
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogBoundScan {
    pub constant: Rational,
    pub rows: Vec<LogBoundRow>,
    /// Smallest `n0` in the range such that every applicable row with
    /// `n ≥ n0` satisfies the bound.
    pub observed_threshold: Option<u64>,
}

/// Scans `N = a^n` for `2 ≤ a < b`, `a | b`, reporting where `c_b(N) > C·log n`.
pub fn log_bound_scan(
    a: u64,
    b: u64,
    range: std::ops::RangeInclusive<u64>,
    caps: &Caps,
) -> Result<LogBoundScan> {
    let constant = admissible_constant(a, b)?;
    let big_b = Natural::from(b);
    let mut rows = Vec::new();
    for n in range {
        let value = crate::power(a, n, caps)?;
        let nonzero = nonzero_count(&value, b as u32)?;
        let applicable = !(&value % &big_b).is_zero();
        let certified_k = if applicable && n >= 1 {
            Some(
                certify_block_count(
                    &value,
                    &covering_ladder(a, b, power_multiplicity(&value, a), caps)?,
                )?
                .k,
            )
        } else {
            None
        };
        let c_log_n = Precision::default().run(|prec| {
            Ok(ln_u64(n.max(1), prec).mul(&RigorousReal::from_rational(&constant, prec)))
        })?;
        let holds = RigorousReal::from_integer(nonzero, 128)
            .lt(&c_log_n)
            .map(|below| !below)
            .unwrap_or(false)
            && c_log_n.cmp_rational(&Rational::from_integer(Integer::from(nonzero)))
                == Some(std::cmp::Ordering::Less);
        rows.push(LogBoundRow {
            n,
            nonzero_count: nonzero,
            applicable,
            certified_k,
            c_log_n,
            holds,
        });
    }
    let mut observed_threshold = None;
    for row in rows.iter().rev().filter(|r| r.applicable) {
        if !row.holds {
            break;
        }
        observed_threshold = Some(row.n);
    }
    Ok(LogBoundScan {
        constant,
        rows,
        observed_threshold,
    })
}

/// Block-fold certificate for `s_b(m) ≥ (b−1)·r` when `(b^r − 1) | m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StolarskyCertificate<T> {
    pub base: u32,
    pub width: u32,
    pub bound: u64,
    pub digit_sum: u64,
    /// `m_0 = m, m_{t+1} = G(m_t)`, ending at `b^r − 1`.
    pub trace: Vec<T>,
    pub trace_ok: bool,
}

impl<T> StolarskyCertificate<T> {
    pub fn passed(&self) -> bool {
        self.trace_ok && self.digit_sum >= self.bound
    }
}

pub fn stolarsky_check<T: UInt + CheckedMul>(
    m: &T,
    b: u32,
    r: u32,
) -> Result<StolarskyCertificate<T>> {
    check_base(b)?;
    if r == 0 {
        return Err(Error::InvalidWidth(0));
    }
    let bt =
        T::from_u32(b).ok_or_else(|| Error::Precondition("base exceeds scalar range".into()))?;
    let mut block = T::one();
    for _ in 0..r {
        block = block.checked_mul(&bt).ok_or(Error::ResourceLimit {
            what: "b^r",
            value: r as u64,
            cap: 0,
        })?;
    }
    let modulus = block.clone() - T::one();
    if m.is_zero() || !(m.clone() % modulus.clone()).is_zero() {
        return Err(Error::HypothesisViolation(format!(
            "{b}^{r} − 1 does not divide {m}"
        )));
    }
    let mut trace = vec![m.clone()];
    let mut trace_ok = true;
    let mut current = m.clone();
    while current >= block {
        let next = block_fold(&current, b, r)?;
        trace_ok &= next < current && (next.clone() % modulus.clone()).is_zero();
        current = next.clone();
        trace.push(next);
    }
    trace_ok &= current == modulus;
    Ok(StolarskyCertificate {
        base: b,
        width: r,
        bound: (b as u64 - 1) * r as u64,
        digit_sum: digit_sum(m, b)?,
        trace,
        trace_ok,
    })
}

/// Primes `≤ n` by the sieve of Eratosthenes.
pub fn primes_upto(n: u64) -> Vec<u64> {
    let n = n as usize;
    if n < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

pub fn factorial(n: u64, caps: &Caps) -> Result<Natural> {
    caps.check_factorial(n)?;
    Ok((2..=n).fold(Natural::one(), |acc, k| acc * k))
}

/// `Λ_n = lcm(1, …, n) = ∏_{p ≤ n} p^{⌊log_p n⌋}`.
pub fn lcm_upto(n: u64, caps: &Caps) -> Result<Natural> {
    if n == 0 {
        return Err(Error::Precondition("lcm(1..n) needs n ≥ 1".into()));
    }
    caps.check_factorial(n)?;
    let mut acc = Natural::one();
    for p in primes_upto(n) {
        let mut pk = p;
        while let Some(next) = pk.checked_mul(p).filter(|&v| v <= n) {
            pk = next;
        }
        acc *= pk;
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpecialKind {
    Factorial,
    Lcm,
}

impl SpecialKind {
    pub fn value(self, n: u64, caps: &Caps) -> Result<Natural> {
        match self {
            SpecialKind::Factorial => factorial(n, caps),
            SpecialKind::Lcm => lcm_upto(n, caps),
        }
    }
}

impl fmt::Display for SpecialKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpecialKind::Factorial => "factorial",
            SpecialKind::Lcm => "lcm",
        })
    }
}

impl std::str::FromStr for SpecialKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "factorial" => Ok(SpecialKind::Factorial),
            "lcm" => Ok(SpecialKind::Lcm),
            other => Err(Error::InvalidParams(format!("unknown kind {other:?}"))),
        }
    }
}

/// `s_b(n!)`, `s_b(Λ_n) ≥ (b−1)·r` with `r = ⌊log_b(n+1)⌋`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialBound {
    pub kind: SpecialKind,
    pub n: u64,
    pub b: u32,
    pub r: u32,
    pub bound: u64,
    /// `r = 0`: `n < b − 1` and the bound is vacuous.
    pub degenerate: bool,
}

/// Largest `r` with `b^r ≤ n + 1`, by exact comparison.
pub fn floor_log(n_plus_one: u64, b: u32) -> u32 {
    let mut r = 0;
    let mut power = 1u128;
    while power * b as u128 <= n_plus_one as u128 {
        power *= b as u128;
        r += 1;
    }
    r
}

pub fn special_value_bound(kind: SpecialKind, n: u64, b: u32, caps: &Caps) -> Result<SpecialBound> {
    check_base(b)?;
    caps.check_factorial(n)?;
    let r = floor_log(n + 1, b);
    Ok(SpecialBound {
        kind,
        n,
        b,
        r,
        bound: (b as u64 - 1) * r as u64,
        degenerate: r == 0,
    })
}

/// [`SpecialBound`] cross-checked against the exact value through [`stolarsky_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialCertificate {
    pub bound: SpecialBound,
    pub digit_sum: u64,
    pub stolarsky: Option<StolarskyCertificate<Natural>>,
}

impl SpecialCertificate {
    pub fn passed(&self) -> bool {
        self.digit_sum >= self.bound.bound && self.stolarsky.as_ref().is_none_or(|c| c.passed())
    }
}

pub fn certify_special(
    kind: SpecialKind,
    n: u64,
    b: u32,
    caps: &Caps,
) -> Result<SpecialCertificate> {
    let bound = special_value_bound(kind, n, b, caps)?;
    let value = kind.value(n.max(1), caps)?;
    let stolarsky = if bound.degenerate {
        None
    } else {
        Some(stolarsky_check(&value, b, bound.r)?)
    };
    Ok(SpecialCertificate {
        digit_sum: digit_sum(&value, b)?,
        bound,
        stolarsky,
    })
}

/// Witness sizes above this are checked structurally rather than by expansion.
pub const SPARSE_EXPANSION_LIMIT: u64 = 20_000;

/// How `c_10(10^k + 8) = 2` was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessDigits {
    /// By expanding `10^k + 8` and counting nonzero digits.
    Expanded(u64),
    /// `k ≥ 1` and `8 < 10`: the expansion is `1 0…0 8` by uniqueness.
    Structural,
}

/// The least `k ≥ 1` with `3^n | 10^k + 8`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMultiple {
    pub n: u32,
    pub k: u64,
    /// Multiplicative order of 10 modulo `3^n`; every solution is `≡ k` modulo it.
    pub order: u64,
    pub digits: WitnessDigits,
}

impl SparseMultiple {
    pub fn nonzero_digits(&self) -> u64 {
        match self.digits {
            WitnessDigits::Expanded(c) => c,
            WitnessDigits::Structural => 2,
        }
    }
}

fn three_pow(n: u32) -> Natural {
    Natural::from(3u8).pow(n)
}

/// `3^n | 10^k + 8`, checked by exact modular exponentiation.
pub fn divides_sparse(n: u32, k: u64) -> bool {
    let modulus = three_pow(n);
    let residue = Natural::from(10u8).modpow(&Natural::from(k), &modulus);
    ((residue + 8u8) % &modulus).is_zero()
}

/// Finds the least `k` by lifting a solution modulo `3^j` to `3^{j+1}`.
///
/// Modulo `3^n` (`n ≥ 2`) the powers of 10 form a cyclic group of order
/// `3^{n-2}` containing `−8`, so a solution modulo `3^j` lifts by adding
/// `t·3^{j-2}` for one `t ∈ {0, 1, 2}`. The order is verified exactly before
/// it is used to reduce to the least positive representative.
pub fn sparse_multiple(n: u32, caps: &Caps) -> Result<SparseMultiple> {
    if n == 0 {
        return Err(Error::Precondition("need n ≥ 1".into()));
    }
    if n > caps.max_sparse_n {
        return Err(Error::ResourceLimit {
            what: "sparse-multiple n",
            value: n as u64,
            cap: caps.max_sparse_n as u64,
        });
    }
    let ten = Natural::from(10u8);
    let order_exp = n.max(2) - 2;
    let order = 3u64.pow(order_exp);
    let modulus = three_pow(n);
    if ten.modpow(&Natural::from(order), &modulus) != Natural::one()
        || (order_exp > 0 && ten.modpow(&Natural::from(order / 3), &modulus).is_one())
    {
        return Err(Error::HypothesisViolation(format!(
            "10 does not have order 3^{order_exp} modulo 3^{n}"
        )));
    }
    let mut k = 0u64;
    for j in 3..=n {
        let step = 3u64.pow(j - 3);
        let lifted = (0..3)
            .map(|t| k + t * step)
            .find(|&cand| divides_sparse(j, cand))
            .ok_or_else(|| Error::HypothesisViolation(format!("no lift to 3^{j}")))?;
        k = lifted;
    }
    k %= order;
    if k == 0 {
        k = order;
    }
    if !divides_sparse(n, k) {
        return Err(Error::HypothesisViolation(format!("3^{n} ∤ 10^{k} + 8")));
    }
    let digits = if k <= SPARSE_EXPANSION_LIMIT {
        let value = Natural::from(10u8).pow(k as u32) + 8u8;
        WitnessDigits::Expanded(nonzero_count(&value, 10)?)
    } else {
        WitnessDigits::Structural
    };
    Ok(SparseMultiple {
        n,
        k,
        order,
        digits,
    })
}

/// The least `k` by stepping `10^k mod 3^n`, giving up after `max_k` steps.
pub fn sparse_multiple_by_stepping(n: u32, max_k: u64) -> Result<u64> {
    let modulus = 3u128
        .checked_pow(n)
        .ok_or_else(|| Error::Precondition("3^n exceeds u128".into()))?;
    let mut x = 10 % modulus;
    for k in 1..=max_k {
        if (x + 8) % modulus == 0 {
            return Ok(k);
        }
        x = x * 10 % modulus;
    }
    Err(Error::ResourceLimit {
        what: "sparse-multiple search steps",
        value: max_k + 1,
        cap: max_k,
    })
}

/// `n!` for `n = 0..=max`, by a running product.
pub fn factorials_upto(max: u64, caps: &Caps) -> Result<Vec<Natural>> {
    caps.check_factorial(max)?;
    let mut out = Vec::with_capacity(max as usize + 1);
    let mut acc = Natural::one();
    out.push(acc.clone());
    for k in 1..=max {
        acc *= k;
        out.push(acc.clone());
    }
    Ok(out)
}

/// `Λ_n` for `n = 1..=max` (index 0 holds `Λ_0 = 1`).
pub fn lcms_upto(max: u64, caps: &Caps) -> Result<Vec<Natural>> {
    caps.check_factorial(max)?;
    let mut out = Vec::with_capacity(max as usize + 1);
    let mut acc = Natural::one();
    out.push(acc.clone());
    for k in 1..=max {
        // Λ_k = Λ_{k-1}·p exactly when k is a power of the prime p.
        if let Some(p) = prime_power_base(k) {
            acc *= p;
        }
        out.push(acc.clone());
    }
    Ok(out)
}

fn prime_power_base(k: u64) -> Option<u64> {
    if k < 2 {
        return None;
    }
    let p = (2..=k).find(|d| k.is_multiple_of(*d))?;
    let mut rest = k;
    while rest.is_multiple_of(p) {
        rest /= p;
    }
    (rest == 1).then_some(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn ladder_for_two_and_ten() {
        let ladder = exponent_ladder(2, 10, 5, &caps()).unwrap();
        assert_eq!(ladder.exponents(), &[1, 4, 14, 47, 157]);
        assert_eq!(ladder.to_string(), "1 4 14 47 157");
        ladder.verify().unwrap();
    }

    #[test]
    fn ladder_small_cases() {
        assert_eq!(
            exponent_ladder(2, 10, 1, &caps()).unwrap().exponents(),
            &[1]
        );
        assert_eq!(
            exponent_ladder(2, 4, 4, &caps()).unwrap().exponents(),
            &[1, 3, 7, 15]
        );
        assert!(exponent_ladder(2, 10, 0, &caps()).unwrap().is_empty());
        assert!(exponent_ladder(3, 10, 3, &caps()).is_err());
        assert!(exponent_ladder(4, 4, 3, &caps()).is_err());
    }

    #[test]
    fn ladder_respects_exponent_cap() {
        let tight = Caps {
            max_exponent: 100,
            ..Caps::default()
        };
        assert!(matches!(
            exponent_ladder(2, 10, 5, &tight),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn explicit_ladders_are_validated() {
        assert!(ExponentLadder::from_exponents(2, 10, vec![1, 4, 14]).is_ok());
        assert!(ExponentLadder::from_exponents(2, 10, vec![1, 3]).is_err());
        assert!(ExponentLadder::from_exponents(2, 10, vec![0, 4]).is_err());
        assert!(ExponentLadder::base_four(6).verify().is_ok());
    }

    #[test]
    fn growth_estimate_irrational_ratio() {
        let ladder = exponent_ladder(2, 10, 6, &caps()).unwrap();
        let rows = ladder
            .growth_estimate(&Factorizer::default(), Precision::default())
            .unwrap();
        assert_eq!(rows.len(), 6);
        assert!(rows.iter().all(|r| r.below_sum && r.below_closed_form));
        assert!(rows[1..].iter().all(|r| r.strict) && !rows[0].strict);
    }

    #[test]
    fn growth_estimate_rational_ratio_is_tight() {
        // r = 2: e_k = 2^k − 1 equals the geometric sum.
        let ladder = exponent_ladder(2, 4, 5, &caps()).unwrap();
        let rows = ladder
            .growth_estimate(&Factorizer::default(), Precision::default())
            .unwrap();
        assert!(rows
            .iter()
            .all(|r| r.below_sum && !r.strict && r.below_closed_form));
    }

    #[test]
    fn block_certificate_for_two_to_157() {
        let ladder = exponent_ladder(2, 10, 5, &caps()).unwrap();
        let n = Natural::from(2u8).pow(157u32);
        let cert = certify_block_count(&n, &ladder).unwrap();
        assert_eq!(cert.k, 5);
        assert_eq!(cert.splits.len(), 4);
        cert.validate().unwrap();
        // 2^157 mod 10^47 keeps the lower blocks.
        assert_eq!(cert.splits[3].remainder, Natural::from(2u8));
        assert_eq!(cert.splits[2].remainder, Natural::from(7872u32));
    }

    #[test]
    fn block_certificate_small_cases() {
        let ladder = exponent_ladder(2, 10, 5, &caps()).unwrap();
        let cert = certify_block_count(&Natural::one(), &ladder).unwrap();
        assert_eq!(cert.k, 1);
        assert!(cert.passed());
        let n = Natural::from(1u32 << 20);
        let cert = certify_block_count(&n, &ladder).unwrap();
        assert_eq!((cert.k, cert.nonzero_count), (3, 6));
        assert!(cert.passed());
        assert!(matches!(
            certify_block_count(&Natural::from(20u8), &ladder),
            Err(Error::HypothesisViolation(_))
        ));
    }

    #[test]
    fn tampered_certificate_fails() {
        let ladder = exponent_ladder(2, 10, 5, &caps()).unwrap();
        let mut cert = certify_block_count(&Natural::from(2u8).pow(47u32), &ladder).unwrap();
        cert.splits[0].quotient += 1u8;
        assert!(!cert.passed());
    }

    #[test]
    fn corollary_examples() {
        assert_eq!(corollary_floor(4).unwrap().ceil_log4, 1);
        assert_eq!(corollary_floor(100).unwrap().ceil_log4, 4);
        assert_eq!(corollary_floor(157).unwrap().ceil_log4, 4);
        assert!(corollary_floor(1).is_err());
        let log4 = corollary_floor(100).unwrap().log4.to_f64();
        assert!((log4 - 100f64.ln() / 4f64.ln()).abs() < 1e-12);

        let cert = certify_corollary(2, 4, &caps()).unwrap();
        assert!(cert.passed());
        assert_eq!(cert.certificate.nonzero_count, 2);
        let cert = certify_corollary(2, 100, &caps()).unwrap();
        assert!(cert.passed() && cert.certificate.k >= 4);
        let cert = certify_corollary(2, 157, &caps()).unwrap();
        assert_eq!(cert.certificate.k, 4);
        assert!(certify_corollary(10, 5, &caps()).is_err());
        assert!(certify_corollary(3, 5, &caps()).is_err());
    }

    #[test]
    fn admissible_constants() {
        let c = admissible_constant(2, 10).unwrap();
        let true_value = 1.0 / (10f64.ln() / 2f64.ln()).ln();
        let approx = c.numer().to_f64().unwrap() / c.denom().to_f64().unwrap();
        assert!((true_value - approx).abs() / true_value < 1e-12);
        let prec = 512;
        let sharp = RigorousReal::from_integer(1, prec)
            .div(
                &ln_u64(10, prec)
                    .div(&ln_u64(2, prec))
                    .unwrap()
                    .ln()
                    .unwrap(),
            )
            .unwrap();
        assert!(c < sharp.lower());
        assert!((approx - 0.83295).abs() < 1e-5);
        let c = admissible_constant(2, 4).unwrap();
        let approx = c.numer().to_f64().unwrap() / c.denom().to_f64().unwrap();
        assert!((approx - 1.0 / 2f64.ln()).abs() < 1e-9);
        assert!(admissible_constant(3, 10).is_err());
    }

    #[test]
    fn stolarsky_examples() {
        let c = stolarsky_check(&99u32, 10, 2).unwrap();
        assert_eq!((c.bound, c.digit_sum, c.trace.clone()), (18, 18, vec![99]));
        assert!(c.passed());
        let c = stolarsky_check(&1188u32, 10, 2).unwrap();
        assert_eq!(
            (c.bound, c.digit_sum, c.trace.clone()),
            (18, 18, vec![1188, 99])
        );
        let c = stolarsky_check(&2520u32, 10, 1).unwrap();
        assert_eq!((c.bound, c.digit_sum), (9, 9));
        assert!(matches!(
            stolarsky_check(&100u32, 10, 2),
            Err(Error::HypothesisViolation(_))
        ));
        assert!(stolarsky_check(&0u32, 10, 2).is_err());
    }

    #[test]
    fn factorial_and_lcm_values() {
        assert_eq!(factorial(10, &caps()).unwrap(), Natural::from(3628800u32));
        assert_eq!(factorial(0, &caps()).unwrap(), Natural::one());
        assert_eq!(lcm_upto(10, &caps()).unwrap(), Natural::from(2520u32));
        assert_eq!(lcm_upto(1, &caps()).unwrap(), Natural::one());
        assert!(matches!(
            factorial(5001, &caps()),
            Err(Error::ResourceLimit { .. })
        ));
        assert!(lcm_upto(0, &caps()).is_err());
    }

    #[test]
    fn lcm_matches_iterated_gcd() {
        let mut acc = Natural::one();
        let table = lcms_upto(200, &caps()).unwrap();
        for n in 1..=200u64 {
            acc = acc.lcm(&Natural::from(n));
            assert_eq!(lcm_upto(n, &caps()).unwrap(), acc, "n = {n}");
            assert_eq!(table[n as usize], acc);
        }
        let facts = factorials_upto(30, &caps()).unwrap();
        assert_eq!(facts[10], Natural::from(3628800u32));
    }

    #[test]
    fn special_bounds() {
        let b = special_value_bound(SpecialKind::Factorial, 100, 10, &caps()).unwrap();
        assert_eq!((b.r, b.bound, b.degenerate), (2, 18, false));
        let b = special_value_bound(SpecialKind::Lcm, 10, 10, &caps()).unwrap();
        assert_eq!((b.r, b.bound), (1, 9));
        let b = special_value_bound(SpecialKind::Factorial, 8, 10, &caps()).unwrap();
        assert_eq!((b.r, b.bound, b.degenerate), (0, 0, true));

        let c = certify_special(SpecialKind::Lcm, 10, 10, &caps()).unwrap();
        assert_eq!(c.digit_sum, 9);
        assert!(c.passed());
        let c = certify_special(SpecialKind::Factorial, 100, 10, &caps()).unwrap();
        assert!(c.passed() && c.digit_sum >= 18);
    }

    #[test]
    fn sparse_multiple_examples() {
        let k: Vec<u64> = (1..=3)
            .map(|n| sparse_multiple(n, &caps()).unwrap().k)
            .collect();
        assert_eq!(k, vec![1, 1, 2]);
        let w = sparse_multiple(3, &caps()).unwrap();
        assert_eq!(w.digits, WitnessDigits::Expanded(2));
        assert!(matches!(
            sparse_multiple(65, &caps()),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn sparse_multiple_matches_stepping() {
        for n in 1..=12 {
            let lifted = sparse_multiple(n, &caps()).unwrap().k;
            let stepped = sparse_multiple_by_stepping(n, 1_000_000).unwrap();
            assert_eq!(lifted, stepped, "n = {n}");
        }
    }

    #[test]
    fn power_certificates() {
        let f = Factorizer::default();
        let cert = power_certificate(2, 10, 157, &f, &caps()).unwrap().unwrap();
        assert_eq!((cert.p, cert.k()), (2, 5));
        assert!(cert.passed());
        let cert = power_certificate(6, 10, 50, &f, &caps()).unwrap().unwrap();
        assert_eq!(cert.d, 2);
        assert!(cert.passed());
        // 20^n = 10^n·2^n: the stripped part carries the ladder.
        let cert = power_certificate(20, 10, 60, &f, &caps()).unwrap().unwrap();
        assert_eq!(cert.block.n, Natural::from(2u8).pow(60u32));
        assert!(cert.passed());
        assert!(power_certificate(3, 10, 40, &f, &caps()).unwrap().is_none());
        assert!(power_certificate(100, 10, 4, &f, &caps())
            .unwrap()
            .is_none());
    }

    #[test]
    fn log_bound_scan_reports_threshold() {
        let scan = log_bound_scan(2, 10, 1..=200, &caps()).unwrap();
        assert_eq!(scan.rows.len(), 200);
        assert!(scan.rows.iter().all(|r| r.applicable));
        assert!(scan.observed_threshold.is_some());
        let scan = log_bound_scan(2, 4, 1..=10, &caps()).unwrap();
        assert!(!scan.rows[5].applicable);
    }
}
