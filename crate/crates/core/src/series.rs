//! Truncated formal power series `c_0 + c_1 t + ... + c_N t^N + O(t^{N+1})`.
//!
//! Coefficients are stored in ordinary form. The umbral coefficient
//! `a_k = <f(t) | x^k>` is `k! * c_k`, see [`TruncatedSeries::umbral_coeff`].
//! Every binary operation truncates to the smaller precision.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numbers::{factorial, format_rational, parse_rational, pow, ExactRational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "SeriesRepr", try_from = "SeriesRepr")]
pub struct TruncatedSeries {
    coeffs: Vec<ExactRational>,
}

/// Order of a truncated series. `Unbounded` means every stored coefficient
/// vanishes, so the true order is beyond the precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Order {
    Finite(usize),
    Unbounded,
}

impl Order {
    pub fn finite(self) -> Option<usize> {
        match self {
            Order::Finite(k) => Some(k),
            Order::Unbounded => None,
        }
    }
}

impl TruncatedSeries {
    /// Builds a series of precision `coeffs.len() - 1`. An empty vector is
    /// read as the zero series at precision 0.
    pub fn new(mut coeffs: Vec<ExactRational>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(BigRational::zero());
        }
        TruncatedSeries { coeffs }
    }

    pub fn zero(precision: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![BigRational::zero(); precision + 1],
        }
    }

    pub fn constant(c: ExactRational, precision: usize) -> Self {
        let mut s = Self::zero(precision);
        s.coeffs[0] = c;
        s
    }

    pub fn one(precision: usize) -> Self {
        Self::constant(BigRational::one(), precision)
    }

    /// `t^k`; the zero series when `k > precision`.
    pub fn monomial(k: usize, precision: usize) -> Self {
        let mut s = Self::zero(precision);
        if k <= precision {
            s.coeffs[k] = BigRational::one();
        }
        s
    }

    /// The identity series `t`.
    pub fn identity(precision: usize) -> Self {
        Self::monomial(1, precision)
    }

    /// `e^{yt}`: `c_k = y^k / k!`.
    pub fn exp(y: &ExactRational, precision: usize) -> Self {
        let mut coeffs = Vec::with_capacity(precision + 1);
        let mut c = BigRational::one();
        coeffs.push(c.clone());
        for k in 1..=precision {
            c = c * y / BigRational::from_integer(BigInt::from(k));
            coeffs.push(c.clone());
        }
        TruncatedSeries { coeffs }
    }

    /// Builds a series from umbral coefficients `a_k = <f | x^k>`.
    pub fn from_umbral(a: &[ExactRational]) -> Self {
        Self::new(
            a.iter()
                .enumerate()
                .map(|(k, ak)| ak / BigRational::from_integer(factorial(k)))
                .collect(),
        )
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[ExactRational] {
        &self.coeffs
    }

    /// Ordinary coefficient `c_k`; zero past the precision.
    pub fn coeff(&self, k: usize) -> ExactRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    /// `a_k = k! * c_k`.
    pub fn umbral_coeff(&self, k: usize) -> ExactRational {
        self.coeff(k) * BigRational::from_integer(factorial(k))
    }

    pub fn truncate(&self, precision: usize) -> Self {
        let n = precision.min(self.precision());
        TruncatedSeries {
            coeffs: self.coeffs[..=n].to_vec(),
        }
    }

    pub fn order(&self) -> Order {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map_or(Order::Unbounded, Order::Finite)
    }

    pub fn scale(&self, c: &ExactRational) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// `f(t/α)`: `c_k / α^k`.
    pub fn rescale(&self, alpha: &ExactRational) -> Result<Self> {
        if alpha.is_zero() {
            return Err(Error::DivisionByZero("rescaling t/α at α = 0"));
        }
        let inv = alpha.recip();
        let mut w = BigRational::one();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            coeffs.push(c * &w);
            w *= &inv;
        }
        Ok(TruncatedSeries { coeffs })
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::one(self.precision());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn invert(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::NotInvertible);
        }
        let inv0 = c0.recip();
        let n = self.precision();
        let mut out: Vec<ExactRational> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for k in 1..=n {
            let mut acc = BigRational::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc += &self.coeffs[j] * &out[k - j];
                }
            }
            out.push(-acc * &inv0);
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    /// `self(inner(t))`; `inner` must have order at least 1.
    pub fn compose(&self, inner: &TruncatedSeries) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::CompositionDomain);
        }
        let n = self.precision().min(inner.precision());
        let inner = inner.truncate(n);
        // Horner from the top coefficient; terms past `n` cannot reach t^n.
        let mut acc = Self::constant(self.coeffs[n].clone(), n);
        for k in (0..n).rev() {
            acc = &acc * &inner;
            acc.coeffs[0] += &self.coeffs[k];
        }
        Ok(acc)
    }

    /// Compositional inverse of a delta series, solved order by order.
    pub fn comp_inverse(&self) -> Result<Self> {
        match self.order() {
            Order::Finite(1) => {}
            o => return Err(Error::NotDelta(o.finite())),
        }
        let n = self.precision();
        let f1_inv = self.coeffs[1].recip();
        let mut h = vec![BigRational::zero(); n + 1];
        // powers[j][m] = [t^m] h(t)^j, filled column by column.
        let mut powers = vec![vec![BigRational::zero(); n + 1]; n + 1];
        for m in 1..=n {
            let mut known = BigRational::zero();
            for j in 2..=m {
                let mut acc = BigRational::zero();
                for i in 1..=(m - j + 1) {
                    if !h[i].is_zero() && !powers[j - 1][m - i].is_zero() {
                        acc += &h[i] * &powers[j - 1][m - i];
                    }
                }
                if !self.coeffs[j].is_zero() {
                    known += &self.coeffs[j] * &acc;
                }
                powers[j][m] = acc;
            }
            let target = if m == 1 {
                BigRational::one()
            } else {
                BigRational::zero()
            };
            h[m] = (target - known) * &f1_inv;
            powers[1][m] = h[m].clone();
        }
        Ok(TruncatedSeries { coeffs: h })
    }

    /// Formal derivative; the precision drops by one, saturating at 0.
    pub fn derivative(&self) -> Self {
        let n = self.precision();
        if n == 0 {
            return Self::zero(0);
        }
        TruncatedSeries {
            coeffs: (0..n)
                .map(|k| &self.coeffs[k + 1] * BigRational::from_integer(BigInt::from(k + 1)))
                .collect(),
        }
    }

    /// Evaluates the truncated polynomial at a rational point.
    pub fn eval_truncated(&self, t: &ExactRational) -> ExactRational {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * pow(t, k as u64))
            .fold(BigRational::zero(), |a, b| a + b)
    }
}

fn zip_with(
    a: &TruncatedSeries,
    b: &TruncatedSeries,
    op: impl Fn(&ExactRational, &ExactRational) -> ExactRational,
) -> TruncatedSeries {
    let n = a.precision().min(b.precision());
    TruncatedSeries {
        coeffs: (0..=n).map(|k| op(&a.coeffs[k], &b.coeffs[k])).collect(),
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: Self) -> TruncatedSeries {
        zip_with(self, rhs, |x, y| x + y)
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: Self) -> TruncatedSeries {
        zip_with(self, rhs, |x, y| x - y)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: Self) -> TruncatedSeries {
        let n = self.precision().min(rhs.precision());
        let mut coeffs = vec![BigRational::zero(); n + 1];
        for (i, a) in self.coeffs[..=n].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        TruncatedSeries { coeffs }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for TruncatedSeries {
            type Output = TruncatedSeries;
            fn $m(self, rhs: Self) -> TruncatedSeries {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    coeffs: Vec<String>,
    precision: usize,
}

impl From<TruncatedSeries> for SeriesRepr {
    fn from(s: TruncatedSeries) -> Self {
        SeriesRepr {
            precision: s.precision(),
            coeffs: s.coeffs.iter().map(format_rational).collect(),
        }
    }
}

impl TryFrom<SeriesRepr> for TruncatedSeries {
    type Error = Error;
    fn try_from(r: SeriesRepr) -> Result<Self> {
        if r.coeffs.len() != r.precision + 1 {
            return Err(Error::InvalidArgument(format!(
                "series with precision {} needs {} coefficients, got {}",
                r.precision,
                r.precision + 1,
                r.coeffs.len()
            )));
        }
        let coeffs = r
            .coeffs
            .iter()
            .map(|c| parse_rational(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(TruncatedSeries { coeffs })
    }
}
