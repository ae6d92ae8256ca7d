//! Desk-scale factorization, `p`-adic valuations and the prime-pair
//! constants used to bound the valuation of what remains of `a^n` after
//! removing powers of `b`.

use std::collections::BTreeMap;

use num_integer::Integer as _;
use num_traits::{One, Pow, ToPrimitive, Zero};

use crate::rigorous::{ln_u64, RigorousReal};
use crate::{Error, Integer, Natural, Rational, Result, UInt};

pub const DEFAULT_FACTOR_LIMIT: u64 = 1_000_000;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// `ν_p(n)`: the exponent of the prime `p` in `n ≥ 1`.
pub fn nu<T: UInt>(n: &T, p: u64) -> Result<u64> {
    if n.is_zero() {
        return Err(Error::UndefinedValuation);
    }
    if !is_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    let Some(pt) = T::from_u64(p) else {
        return Ok(0);
    };
    let mut count = 0;
    let mut rest = n.clone();
    loop {
        let (q, r) = rest.div_rem(&pt);
        if !r.is_zero() {
            return Ok(count);
        }
        count += 1;
        rest = q;
    }
}

/// Prime factorization as a map `p → ν_p`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Factorization {
    factors: BTreeMap<u64, u64>,
}

impl Factorization {
    pub fn factors(&self) -> &BTreeMap<u64, u64> {
        &self.factors
    }

    /// `ν_p` of the factored value (0 for primes not present).
    pub fn exponent(&self, p: u64) -> u64 {
        self.factors.get(&p).copied().unwrap_or(0)
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.keys().copied()
    }

    /// The factored value, `∏ p^e`.
    pub fn value(&self) -> Natural {
        self.factors.iter().fold(Natural::one(), |acc, (&p, &e)| {
            acc * Natural::from(p).pow(e as u32)
        })
    }
}

/// Trial-division factorizer. Fails cleanly when a prime factor exceeds `limit`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Factorizer {
    pub limit: u64,
}

impl Default for Factorizer {
    fn default() -> Self {
        Factorizer {
            limit: DEFAULT_FACTOR_LIMIT,
        }
    }
}

impl Factorizer {
    pub fn new(limit: u64) -> Self {
        Factorizer { limit }
    }

    pub fn factorize<T: UInt>(&self, n: &T) -> Result<Factorization> {
        if n.is_zero() {
            return Err(Error::Precondition("cannot factorize 0".into()));
        }
        let mut factors = BTreeMap::new();
        let mut rest = n.clone();
        let mut d = 2u64;
        while d <= self.limit {
            match d.checked_mul(d).and_then(T::from_u64) {
                Some(square) if square <= rest => {}
                _ => break,
            }
            let dt = T::from_u64(d).expect("d² fits, so d fits");
            loop {
                let (q, r) = rest.div_rem(&dt);
                if !r.is_zero() {
                    break;
                }
                *factors.entry(d).or_insert(0) += 1;
                rest = q;
            }
            d += if d == 2 { 1 } else { 2 };
        }
        if !rest.is_one() {
            let within = T::from_u64(self.limit).is_none_or(|l| rest <= l);
            if !within {
                return Err(Error::IncompleteFactorization {
                    cofactor: rest.to_string(),
                    limit: self.limit,
                });
            }
            let p = rest.to_u64().expect("cofactor below limit fits u64");
            *factors.entry(p).or_insert(0) += 1;
        }
        Ok(Factorization { factors })
    }

    /// Minimal `(u, v)` with `a^v = b^u`, or `None` when `log a / log b` is irrational.
    pub fn multiplicative_dependence(&self, a: u64, b: u64) -> Result<Option<(u64, u64)>> {
        check_at_least_two(a, b)?;
        let fa = self.factorize(&a)?;
        let fb = self.factorize(&b)?;
        if !fa.primes().eq(fb.primes()) {
            return Ok(None);
        }
        let p = fa.primes().next().expect("a ≥ 2 has a prime factor");
        let (alpha, beta) = (fa.exponent(p), fb.exponent(p));
        let g = alpha.gcd(&beta);
        let (u, v) = (alpha / g, beta / g);
        let proportional = fa
            .primes()
            .all(|q| v as u128 * fa.exponent(q) as u128 == u as u128 * fb.exponent(q) as u128);
        Ok(proportional.then_some((u, v)))
    }

    /// Chooses primes `p, q` with `ν_p(a)ν_q(b) − ν_q(a)ν_p(b) > 0` and
    /// returns `c1 = (ν_p(a)ν_q(b) − ν_q(a)ν_p(b)) / ν_q(b)`.
    ///
    /// Among all valid pairs the largest `c1` wins; ties go to the smallest
    /// `p`, then the smallest `q`.
    pub fn select_prime_pair(&self, a: u64, b: u64) -> Result<PrimePairConstant> {
        if let Some((u, v)) = self.multiplicative_dependence(a, b)? {
            return Err(Error::RationalRatio { a, b, u, v });
        }
        let fa = self.factorize(&a)?;
        let fb = self.factorize(&b)?;
        let mut best: Option<PrimePairConstant> = None;
        for p in fa.primes() {
            for q in fb.primes() {
                let det = fa.exponent(p) as i128 * fb.exponent(q) as i128
                    - fa.exponent(q) as i128 * fb.exponent(p) as i128;
                if det <= 0 {
                    continue;
                }
                let c1 = Rational::new(Integer::from(det), Integer::from(fb.exponent(q)));
                let better = match &best {
                    None => true,
                    Some(cur) => c1 > cur.c1,
                };
                if better {
                    best = Some(PrimePairConstant {
                        a,
                        b,
                        p,
                        q,
                        determinant: det as u64,
                        c1,
                    });
                }
            }
        }
        // Independent exponent vectors always admit a positive determinant.
        best.ok_or_else(|| Error::Precondition(format!("no prime pair separates {a} and {b}")))
    }

    /// The smallest divisor `d` of `a` with `gcd(a/d, b) = 1`: the part of
    /// `a` supported on primes shared with `b`.
    pub fn reduced_divisor(&self, a: u64, b: u64) -> Result<u64> {
        check_at_least_two(a, b)?;
        let fa = self.factorize(&a)?;
        let fb = self.factorize(&b)?;
        Ok(fa
            .factors()
            .iter()
            .filter(|(p, _)| fb.exponent(**p) > 0)
            .map(|(&p, &e)| p.pow(e as u32))
            .product())
    }
}

fn check_at_least_two(a: u64, b: u64) -> Result<()> {
    if a < 2 || b < 2 {
        return Err(Error::Precondition(format!(
            "arguments must be at least 2 (got {a}, {b})"
        )));
    }
    Ok(())
}

/// Factorization with the default trial-division limit.
pub fn factorize<T: UInt>(n: &T) -> Result<Factorization> {
    Factorizer::default().factorize(n)
}

/// `c1` with `ν_p(t) ≥ c1·n` whenever `a^n = b^m·t`, for a pair `(a, b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimePairConstant {
    pub a: u64,
    pub b: u64,
    pub p: u64,
    pub q: u64,
    /// `ν_p(a)ν_q(b) − ν_q(a)ν_p(b)`, always positive.
    pub determinant: u64,
    pub c1: Rational,
}

impl PrimePairConstant {
    /// Whether `ν_p(t) ≥ c1·n`, checked exactly.
    pub fn bound_holds(&self, nu_p_t: u64, n: u64) -> bool {
        Rational::from_integer(Integer::from(nu_p_t)) >= &self.c1 * Integer::from(n)
    }

    /// The growth constants `(C, C') = (c1·log p, log a)` of `C·n ≤ log t ≤ C'·n`.
    pub fn growth_constants(&self, prec: u32) -> (RigorousReal, RigorousReal) {
        let lower = ln_u64(self.p, prec).mul(&RigorousReal::from_rational(&self.c1, prec));
        (lower, ln_u64(self.a, prec))
    }

    /// Exact form of the growth envelope for the cofactor `t` of `a^n = b^m·t`:
    /// `p^{c1·n} ≤ t ≤ a^n`, compared as `t^den ≥ p^{num·n}`.
    pub fn envelope_holds(&self, t: &Natural, n: u64) -> bool {
        let num = self.c1.numer().to_u32().expect("small numerator");
        let den = self.c1.denom().to_u32().expect("small denominator");
        let exp = u32::try_from(n).expect("exponent fits u32") * num;
        let lower = t.pow(den) >= Natural::from(self.p).pow(exp);
        let upper = *t <= Natural::from(self.a).pow(n as u32);
        lower && upper
    }
}

/// `N = base^m · cofactor` with `base ∤ cofactor`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerDecomposition<T> {
    pub base: u32,
    pub exponent: u64,
    pub cofactor: T,
}

/// Removes the largest power of `b` dividing `n ≥ 1`; the exponent equals
/// the number of trailing zero base-`b` digits.
pub fn strip_base_power<T: UInt>(n: &T, b: u32) -> Result<PowerDecomposition<T>> {
    crate::bigdigits::check_base(b)?;
    if n.is_zero() {
        return Err(Error::Precondition(
            "cannot strip base powers from 0".into(),
        ));
    }
    let Some(bt) = T::from_u32(b) else {
        return Ok(PowerDecomposition {
            base: b,
            exponent: 0,
            cofactor: n.clone(),
        });
    };
    let mut exponent = 0;
    let mut rest = n.clone();
    loop {
        let (q, r) = rest.div_rem(&bt);
        if !r.is_zero() {
            break;
        }
        exponent += 1;
        rest = q;
    }
    Ok(PowerDecomposition {
        base: b,
        exponent,
        cofactor: rest,
    })
}

/// The split `a^n = b^m·s`, `s = g^n·t`, `d^n = b^m·t` with `d` the
/// reduced divisor of `a` and `g = a/d` coprime to `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoprimeSplit {
    pub m: u64,
    pub s: Natural,
    pub d: u64,
    pub g: u64,
    pub t: Natural,
}

pub fn coprime_split(a: u64, b: u32, n: u64, factorizer: &Factorizer) -> Result<CoprimeSplit> {
    let d = factorizer.reduced_divisor(a, b as u64)?;
    let g = a / d;
    let exp = u32::try_from(n).map_err(|_| Error::Precondition("exponent too large".into()))?;
    let an = Natural::from(a).pow(exp);
    let dec = strip_base_power(&an, b)?;
    let gn = Natural::from(g).pow(exp);
    let (t, rem) = dec.cofactor.div_rem(&gn);
    if !rem.is_zero() {
        return Err(Error::HypothesisViolation(format!(
            "{g}^{n} does not divide s"
        )));
    }
    let m32 = u32::try_from(dec.exponent).expect("exponent fits");
    debug_assert_eq!(
        Natural::from(d).pow(exp),
        Natural::from(b).pow(m32) * &t,
        "d^n = b^m t"
    );
    Ok(CoprimeSplit {
        m: dec.exponent,
        s: dec.cofactor,
        d,
        g,
        t,
    })
}
