//! Exact rational scalars, p-adic valuations and q-brackets.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type ExactRational = BigRational;

pub fn rat(n: i64, d: i64) -> ExactRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> ExactRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `"a/b"` or `"a"`. Decimal notation is rejected.
pub fn parse_rational(s: &str) -> Result<ExactRational> {
    let s = s.trim();
    let bad = || Error::InvalidArgument(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::DivisionByZero("zero denominator"));
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(
            BigInt::from_str(s).map_err(|_| bad())?,
        )),
    }
}

/// `"num/den"`, with the denominator omitted when it is 1.
pub fn format_rational(r: &ExactRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn pow(r: &ExactRational, e: u64) -> ExactRational {
    Pow::pow(r, BigUint::from(e))
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Multinomial coefficient `n! / (i_1! ... i_m!)` where `n = Σ i_j`.
pub fn multinomial(parts: &[usize]) -> BigInt {
    let mut total = 0;
    let mut acc = BigInt::one();
    for &p in parts {
        total += p;
        acc *= binomial(total, p);
    }
    acc
}

/// `[x]_q = (q^x - 1)/(q - 1)`, and `x` at `q = 1`.
pub fn q_bracket(x: u64, q: &ExactRational) -> ExactRational {
    if q.is_one() {
        return BigRational::from_integer(BigInt::from(x));
    }
    (pow(q, x) - BigRational::one()) / (q - BigRational::one())
}

/// `[x]_{-q} = (1 - (-q)^x)/(1 + q)`.
pub fn q_bracket_neg(x: u64, q: &ExactRational) -> Result<ExactRational> {
    let one_plus_q = BigRational::one() + q;
    if one_plus_q.is_zero() {
        return Err(Error::DivisionByZero("[x]_{-q} at q = -1"));
    }
    Ok((BigRational::one() - pow(&-q, x)) / one_plus_q)
}

/// A p-adic valuation, with `Infinite` for zero. `Finite(_) < Infinite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// Finite valuations serialize as integers, `Infinite` as `"inf"`.
impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_i64(*v),
            Valuation::Infinite => s.serialize_str("inf"),
        }
    }
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow_mod = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        r
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in SMALL {
        let mut x = pow_mod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn int_valuation(n: &BigInt, p: &BigInt) -> i64 {
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (quot, rem) = n.div_rem(p);
        if !rem.is_zero() {
            return v;
        }
        n = quot;
        v += 1;
    }
}

/// `v_p(r) = v_p(numerator) - v_p(denominator)`.
pub fn padic_valuation(r: &ExactRational, p: u64) -> Result<Valuation> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if r.is_zero() {
        return Ok(Valuation::Infinite);
    }
    let p = BigInt::from(p);
    Ok(Valuation::Finite(
        int_valuation(r.numer(), &p) - int_valuation(r.denom(), &p),
    ))
}

/// The parameter pair `(q, ζ)` of the weighted integral.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QWeight {
    q: ExactRational,
    zeta: ExactRational,
}

impl QWeight {
    /// Rejects `q = -1` and `1 + qζ = 0`.
    pub fn new(q: ExactRational, zeta: ExactRational) -> Result<Self> {
        if (BigRational::one() + &q).is_zero() {
            return Err(Error::InvalidWeight("q = -1 makes [2]_q vanish".into()));
        }
        if (BigRational::one() + &q * &zeta).is_zero() {
            return Err(Error::InvalidWeight(format!(
                "1 + q*zeta = 0 at q = {}, zeta = {}",
                format_rational(&q),
                format_rational(&zeta)
            )));
        }
        Ok(QWeight { q, zeta })
    }

    pub fn parse(q: &str, zeta: &str) -> Result<Self> {
        Self::new(parse_rational(q)?, parse_rational(zeta)?)
    }

    pub fn classical() -> Self {
        QWeight {
            q: BigRational::one(),
            zeta: BigRational::one(),
        }
    }

    pub fn q(&self) -> &ExactRational {
        &self.q
    }

    pub fn zeta(&self) -> &ExactRational {
        &self.zeta
    }

    pub fn q_zeta(&self) -> ExactRational {
        &self.q * &self.zeta
    }

    /// `[2]_q = 1 + q`.
    pub fn two_q(&self) -> ExactRational {
        BigRational::one() + &self.q
    }

    /// The weight `(q^d, ζ^d)`, validated.
    pub fn power(&self, d: u64) -> Result<Self> {
        Self::new(pow(&self.q, d), pow(&self.zeta, d))
    }

    /// `v_p(q - 1) ≥ 1` and `v_p(ζ - 1) ≥ 1`.
    pub fn is_padic_small(&self, p: u64) -> Result<bool> {
        let one = BigRational::one();
        let vq = padic_valuation(&(&self.q - &one), p)?;
        let vz = padic_valuation(&(&self.zeta - &one), p)?;
        Ok(vq >= Valuation::Finite(1) && vz >= Valuation::Finite(1))
    }
}

impl fmt::Display for QWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "q={}, zeta={}",
            format_rational(&self.q),
            format_rational(&self.zeta)
        )
    }
}
