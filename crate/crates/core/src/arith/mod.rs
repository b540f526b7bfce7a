//! Exact arithmetic: rationals, primitive integer vectors, S-units,
//! valuations and elements of quadratic fields.

mod quad;
mod units;

pub use quad::QuadElem;
pub use units::{fundamental_unit, squarefree_decompose};

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number.
pub type Rat = BigRational;

/// Rational from a machine integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational `n / d`.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Big integer from a machine integer.
pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

/// Finite part of the set S of places. The archimedean place is implied.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PrimeSet {
    primes: Vec<u64>,
}

impl PrimeSet {
    /// Builds a prime set, sorting and checking every entry.
    pub fn new(mut primes: Vec<u64>) -> Result<Self> {
        primes.sort_unstable();
        primes.dedup();
        for &p in &primes {
            if !is_prime_u64(p) {
                return Err(Error::InvalidInput(format!("{p} is not prime")));
            }
        }
        Ok(PrimeSet { primes })
    }

    /// S = {∞}.
    pub fn empty() -> Self {
        PrimeSet::default()
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn contains(&self, p: u64) -> bool {
        self.primes.binary_search(&p).is_ok()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }
}

/// Deterministic primality for machine-size integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Scales a nonzero rational vector to coprime integers with the first
/// nonzero entry positive.
pub fn normalize_primitive(coords: &[Rat]) -> Result<Vec<BigInt>> {
    if coords.iter().all(|c| c.is_zero()) {
        return Err(Error::ZeroInput("normalize_primitive"));
    }
    let mut den = BigInt::one();
    for c in coords {
        den = den.lcm(c.denom());
    }
    let ints: Vec<BigInt> = coords
        .iter()
        .map(|c| c.numer() * (&den / c.denom()))
        .collect();
    Ok(primitive_int(&ints))
}

/// Integer version of [`normalize_primitive`]; the zero vector is returned unchanged.
pub fn primitive_int(v: &[BigInt]) -> Vec<BigInt> {
    let mut g = BigInt::zero();
    for x in v {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return v.to_vec();
    }
    if let Some(first) = v.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            g = -g;
        }
    }
    v.iter().map(|x| x / &g).collect()
}

/// Content (nonnegative gcd) of an integer vector.
pub fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Divides out every prime of S and reports whether ±1 remains.
pub fn is_s_unit(n: &BigInt, s: &PrimeSet) -> Result<bool> {
    if n.is_zero() {
        return Err(Error::ZeroInput("is_s_unit"));
    }
    Ok(strip_primes(n, s).abs().is_one())
}

/// Removes every prime of S from `n`, returning the part prime to S.
pub fn strip_primes(n: &BigInt, s: &PrimeSet) -> BigInt {
    let mut m = n.clone();
    for &p in s.primes() {
        let p = BigInt::from(p);
        while !m.is_zero() && (&m % &p).is_zero() {
            m /= &p;
        }
    }
    m
}

/// Largest k with p^k dividing n.
pub fn p_valuation(n: &BigInt, p: u64) -> Result<u32> {
    if n.is_zero() {
        return Err(Error::ZeroInput("p_valuation"));
    }
    if !is_prime_u64(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    let p = BigInt::from(p);
    let mut m = n.clone();
    let mut k = 0;
    while (&m % &p).is_zero() {
        m /= &p;
        k += 1;
    }
    Ok(k)
}

/// Exact integer square root when `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

/// Exact rational square root.
pub fn rat_sqrt(q: &Rat) -> Option<Rat> {
    let n = exact_sqrt(q.numer())?;
    let d = exact_sqrt(q.denom())?;
    Some(Rat::new(n, d))
}

/// Exact integer cube root, sign included.
pub fn exact_cbrt(n: &BigInt) -> Option<BigInt> {
    let r = if n.is_negative() {
        -(-n).cbrt()
    } else {
        n.cbrt()
    };
    if &r * &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

/// Exact rational cube root.
pub fn rat_cbrt(q: &Rat) -> Option<Rat> {
    Some(Rat::new(exact_cbrt(q.numer())?, exact_cbrt(q.denom())?))
}

/// Lowest common multiple of denominators.
pub fn common_denominator(v: &[Rat]) -> BigInt {
    v.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()))
}

/// Converts to `i64` when it fits.
pub fn to_i64(n: &BigInt) -> Option<i64> {
    n.to_i64()
}
