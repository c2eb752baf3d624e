//! Exact arbitrary-precision arithmetic and p-adic valuations.
//!
//! Everything downstream works over [`BigInt`] and [`BigRational`] so that
//! polygon geometry is exact; no floating point appears anywhere in the
//! numeric core. This module adds the valuation layer: a checked [`Prime`]
//! wrapper, `ord_p` on integers and rationals, and the extended value
//! `ord_p(0) = +infinity`.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

/// A p-adic valuation: either a finite integer or `+infinity` (for 0).
///
/// `Infinity` compares greater than every `Finite` value, so `min` over
/// valuations behaves the way the ultrametric inequality expects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtendedValuation {
    Finite(i64),
    Infinity,
}

impl ExtendedValuation {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtendedValuation::Finite(_))
    }

    /// The finite value, or `None` for infinity.
    pub fn finite(self) -> Option<i64> {
        match self {
            ExtendedValuation::Finite(v) => Some(v),
            ExtendedValuation::Infinity => None,
        }
    }
}

impl From<i64> for ExtendedValuation {
    fn from(v: i64) -> Self {
        ExtendedValuation::Finite(v)
    }
}

impl fmt::Display for ExtendedValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedValuation::Finite(v) => write!(f, "{v}"),
            ExtendedValuation::Infinity => write!(f, "inf"),
        }
    }
}

/// A positive integer that has passed a primality check.
///
/// Constructing a `Prime` is the only place primality is verified; the
/// valuation functions take `&Prime` and are total.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prime(BigInt);

/// Rejection raised by [`Prime::new`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0} is not prime")]
pub struct NotPrime(pub BigInt);

impl Prime {
    pub fn new(n: BigInt) -> Result<Self, NotPrime> {
        if is_prime(&n) {
            Ok(Prime(n))
        } else {
            Err(NotPrime(n))
        }
    }

    pub fn from_u64(n: u64) -> Result<Self, NotPrime> {
        Prime::new(BigInt::from(n))
    }

    pub fn as_bigint(&self) -> &BigInt {
        &self.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

const SMALL_PRIMES: [u32; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// Miller-Rabin bases that decide primality for every n < 2^64.
const DETERMINISTIC_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Extra rounds for inputs above 2^64, where the fixed base set is no longer
/// a proof. Error probability is below 4^-40 over the combined rounds.
const EXTRA_ROUNDS: usize = 28;

/// Primality test: trial division by small primes, then Miller-Rabin.
///
/// Deterministic for n < 2^64. Above that the bases are derived from n by a
/// fixed splitmix64 walk, so repeated calls always agree.
pub fn is_prime(n: &BigInt) -> bool {
    if !n.is_positive() {
        return false;
    }
    let n = n.magnitude();
    if n < &BigUint::from(2u32) {
        return false;
    }
    for q in SMALL_PRIMES {
        let q = BigUint::from(q);
        if *n == q {
            return true;
        }
        if (n % &q).is_zero() {
            return false;
        }
    }

    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().expect("n is odd and > 2");
    let d = &n_minus_1 >> s;

    let mut bases: Vec<BigUint> = DETERMINISTIC_BASES.iter().map(|&b| BigUint::from(b)).collect();
    if n.bits() > 64 {
        let mut state = n.iter_u64_digits().fold(0u64, |acc, w| acc ^ w).wrapping_add(0x9e3779b97f4a7c15);
        for _ in 0..EXTRA_ROUNDS {
            state = splitmix64(&mut state);
            // reduce into [2, n-2]; n > 2^64 so the range is never degenerate
            bases.push(BigUint::from(state % u64::MAX) + 2u32);
        }
    }

    bases
        .iter()
        .all(|a| !witnesses_composite(n, &d, s, a))
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// One Miller-Rabin round: does base `a` witness that odd `n` is composite?
/// `d` and `s` satisfy n - 1 = d * 2^s with d odd.
fn witnesses_composite(n: &BigUint, d: &BigUint, s: u64, a: &BigUint) -> bool {
    let a = a % n;
    if a.is_zero() || a.is_one() {
        return false;
    }
    let n_minus_1 = n - 1u32;
    let mut x = a.modpow(d, n);
    if x.is_one() || x == n_minus_1 {
        return false;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_1 {
            return false;
        }
    }
    true
}

/// p-adic valuation of an integer; `ord_p(0) = Infinity`.
pub fn ord_int(n: &BigInt, p: &Prime) -> ExtendedValuation {
    if n.is_zero() {
        return ExtendedValuation::Infinity;
    }
    let mut m = n.abs();
    if p.as_bigint().magnitude() == &BigUint::from(2u32) {
        let tz = m.magnitude().trailing_zeros().expect("nonzero");
        return ExtendedValuation::Finite(tz as i64);
    }
    let p = p.as_bigint();
    let mut v: i64 = 0;
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return ExtendedValuation::Finite(v);
        }
        v += 1;
        m = q;
    }
}

/// p-adic valuation of a rational: `ord(num) - ord(den)`; `Infinity` for 0.
pub fn ord_rat(q: &BigRational, p: &Prime) -> ExtendedValuation {
    if q.is_zero() {
        return ExtendedValuation::Infinity;
    }
    // BigRational is kept reduced, so at most one of the two parts has
    // positive valuation, but computing both is just as correct.
    let vn = ord_int(q.numer(), p).finite().expect("nonzero numerator");
    let vd = ord_int(q.denom(), p).finite().expect("nonzero denominator");
    ExtendedValuation::Finite(vn - vd)
}

/// Rejection raised by [`parse_rational`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational literal `{0}`")]
    Malformed(String),
    #[error("denominator must be a positive integer in `{0}`")]
    BadDenominator(String),
}

/// Parses `a`, `-a`, or `a/b` with integer `a` and positive integer `b`.
pub fn parse_rational(text: &str) -> Result<BigRational, ParseRationalError> {
    let t = text.trim();
    if t.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let malformed = || ParseRationalError::Malformed(text.to_owned());
    match t.split_once('/') {
        None => {
            let n = parse_signed_integer(t).ok_or_else(malformed)?;
            Ok(BigRational::from_integer(n))
        }
        Some((num, den)) => {
            let n = parse_signed_integer(num.trim()).ok_or_else(malformed)?;
            let den = den.trim();
            let d = parse_unsigned_integer(den).ok_or_else(malformed)?;
            if d.is_zero() {
                return Err(ParseRationalError::BadDenominator(text.to_owned()));
            }
            Ok(BigRational::new(n, d.into()))
        }
    }
}

fn parse_signed_integer(s: &str) -> Option<BigInt> {
    let (negative, digits) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let magnitude = parse_unsigned_integer(digits)?;
    let value = BigInt::from(magnitude);
    Some(if negative { -value } else { value })
}

fn parse_unsigned_integer(s: &str) -> Option<BigUint> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigUint::parse_bytes(s.as_bytes(), 10)
}
