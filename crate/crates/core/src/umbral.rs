//! The umbral algebra acting on `Q[x]`.
//!
//! A [`TruncatedSeries`] is read two ways: as the linear functional
//! `<f | x^n> = n! c_n` and as the operator `Σ c_k d^k/dx^k`. Sheffer
//! sequences are built by expanding `g(f̄(t))^{-1} e^{x f̄(t)}`; the
//! biorthogonality relation `<g f^k | S_n> = n! δ_{n,k}` is left as an
//! independent check.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numbers::{binomial, factorial, multinomial, ExactRational};
use crate::polynomials::Polynomial;
use crate::series::{Order, TruncatedSeries};

/// An invertible series `g` and a delta series `f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShefferPair {
    g: TruncatedSeries,
    f: TruncatedSeries,
}

impl ShefferPair {
    pub fn new(g: TruncatedSeries, f: TruncatedSeries) -> Result<Self> {
        if g.order() != Order::Finite(0) {
            return Err(Error::NotInvertible);
        }
        if f.order() != Order::Finite(1) {
            return Err(Error::NotDelta(f.order().finite()));
        }
        Ok(ShefferPair { g, f })
    }

    /// The Appell pair `(g, t)`.
    pub fn appell(g: TruncatedSeries) -> Result<Self> {
        let t = TruncatedSeries::identity(g.precision());
        Self::new(g, t)
    }

    /// The associated pair `(1, f)`.
    pub fn associated(f: TruncatedSeries) -> Result<Self> {
        let one = TruncatedSeries::one(f.precision());
        Self::new(one, f)
    }

    pub fn g(&self) -> &TruncatedSeries {
        &self.g
    }

    pub fn f(&self) -> &TruncatedSeries {
        &self.f
    }

    pub fn precision(&self) -> usize {
        self.g.precision().min(self.f.precision())
    }

    /// `g(t) f(t)^k`.
    pub fn basis_element(&self, k: usize) -> TruncatedSeries {
        &self.g * &self.f.pow(k)
    }
}

fn require_precision(needed: usize, available: usize) -> Result<()> {
    if needed > available {
        Err(Error::InsufficientPrecision { needed, available })
    } else {
        Ok(())
    }
}

/// `<f(t) | p(x)> = Σ_n [x^n]p · n! · c_n(f)`.
pub fn apply_functional(f: &TruncatedSeries, p: &Polynomial) -> Result<ExactRational> {
    let Some(deg) = p.degree() else {
        return Ok(BigRational::zero());
    };
    require_precision(deg, f.precision())?;
    Ok(p.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(n, c)| c * f.umbral_coeff(n))
        .fold(BigRational::zero(), |a, b| a + b))
}

/// `f(t) p(x) = Σ_k c_k(f) p^{(k)}(x)`.
///
/// Fails when `f` is truncated below `degree(p)`, since the dropped terms
/// would still act on `p`.
pub fn apply_operator(f: &TruncatedSeries, p: &Polynomial) -> Result<Polynomial> {
    let Some(deg) = p.degree() else {
        return Ok(Polynomial::zero());
    };
    require_precision(deg, f.precision())?;
    // [x^m] = Σ_k c_k (m+k)!/m! p_{m+k}
    let mut out = Vec::with_capacity(deg + 1);
    for m in 0..=deg {
        let mut acc = BigRational::zero();
        let mut falling = BigInt::one();
        for k in 0..=(deg - m) {
            if k > 0 {
                falling *= BigInt::from(m + k);
            }
            let pc = &p.coeffs()[m + k];
            let fc = &f.coeffs()[k];
            if !pc.is_zero() && !fc.is_zero() {
                acc += fc * pc * BigRational::from_integer(falling.clone());
            }
        }
        out.push(acc);
    }
    Ok(Polynomial::new(out))
}

/// `S_n = g(t)^{-1} x^n` for `n = 0..=n_max`.
pub fn appell_sequence(g: &TruncatedSeries, n_max: usize) -> Result<Vec<Polynomial>> {
    require_precision(n_max, g.precision())?;
    let inv = g.truncate(n_max).invert()?;
    (0..=n_max)
        .map(|n| apply_operator(&inv, &Polynomial::x_pow(n)))
        .collect()
}

/// Expands `A(t) e^{x f̄(t)} = Σ S_n(x) t^n / n!` with `f̄` the compositional
/// inverse of `f` and `A = 1 / g(f̄(t))`, so that
/// `S_n(x) = n! Σ_j x^j / j! · [t^n] A f̄^j`.
pub fn sheffer_sequence(pair: &ShefferPair, n_max: usize) -> Result<Vec<Polynomial>> {
    require_precision(n_max, pair.precision())?;
    // precision 1 at least, so that f keeps its linear term
    let work = n_max.max(1);
    let f_bar = pair.f.truncate(work).comp_inverse()?;
    let a = pair.g.truncate(work).compose(&f_bar)?.invert()?;
    let mut columns = Vec::with_capacity(n_max + 1);
    let mut term = a;
    for _ in 0..=n_max {
        columns.push(term.clone());
        term = &term * &f_bar;
    }
    Ok((0..=n_max)
        .map(|n| {
            let n_fact = BigRational::from_integer(factorial(n));
            Polynomial::new(
                (0..=n)
                    .map(|j| {
                        columns[j].coeff(n) * &n_fact / BigRational::from_integer(factorial(j))
                    })
                    .collect(),
            )
        })
        .collect())
}

/// Matrix of `<g f^k | S_n>`, rows indexed by `n`.
pub fn biorthogonality(
    pair: &ShefferPair,
    seq: &[Polynomial],
    n_max: usize,
    k_max: usize,
) -> Result<Vec<Vec<ExactRational>>> {
    if n_max >= seq.len() {
        return Err(Error::InvalidArgument(format!(
            "sequence has {} terms, need {}",
            seq.len(),
            n_max + 1
        )));
    }
    let basis: Vec<_> = (0..=k_max).map(|k| pair.basis_element(k)).collect();
    seq[..=n_max]
        .iter()
        .map(|s| basis.iter().map(|b| apply_functional(b, s)).collect())
        .collect()
}

/// Whether a biorthogonality matrix is `diag(0!, 1!, ...)`.
pub fn is_factorial_diagonal(matrix: &[Vec<ExactRational>]) -> bool {
    matrix.iter().enumerate().all(|(n, row)| {
        row.iter().enumerate().all(|(k, v)| {
            if n == k {
                *v == BigRational::from_integer(factorial(n))
            } else {
                v.is_zero()
            }
        })
    })
}

/// `λ_k = <h | S_k> / k!`, the coordinates of `h` in the basis `g f^k`.
pub fn expand_functional(h: &TruncatedSeries, seq: &[Polynomial]) -> Result<Vec<ExactRational>> {
    seq.iter()
        .enumerate()
        .map(|(k, s)| Ok(apply_functional(h, s)? / BigRational::from_integer(factorial(k))))
        .collect()
}

/// `Σ λ_k g f^k`.
pub fn reconstruct_functional(pair: &ShefferPair, lambda: &[ExactRational]) -> TruncatedSeries {
    let mut acc = TruncatedSeries::zero(pair.precision());
    let mut fk = TruncatedSeries::one(pair.precision());
    for l in lambda {
        acc = &acc + &(&pair.g * &fk).scale(l);
        fk = &fk * &pair.f;
    }
    acc
}

/// `μ_k = <g f^k | p> / k!`, the coordinates of `p` in the basis `S_k`.
pub fn expand_polynomial(
    p: &Polynomial,
    pair: &ShefferPair,
    seq: &[Polynomial],
) -> Result<Vec<ExactRational>> {
    if let Some(d) = p.degree() {
        require_precision(d, seq.len().saturating_sub(1))?;
    }
    (0..seq.len())
        .map(|k| {
            Ok(apply_functional(&pair.basis_element(k), p)?
                / BigRational::from_integer(factorial(k)))
        })
        .collect()
}

pub fn reconstruct_polynomial(mu: &[ExactRational], seq: &[Polynomial]) -> Polynomial {
    mu.iter()
        .zip(seq)
        .fold(Polynomial::zero(), |acc, (m, s)| &acc + &s.scale(m))
}

/// Both sides of `S_n(x0 + y0) = Σ_k C(n,k) P_k(y0) S_{n-k}(x0)`, where
/// `P` is the associated sequence of the pair's delta series.
pub fn sheffer_identity_check(
    pair: &ShefferPair,
    seq: &[Polynomial],
    n: usize,
    x0: &ExactRational,
    y0: &ExactRational,
) -> Result<crate::Comparison<ExactRational>> {
    if n >= seq.len() {
        return Err(Error::InvalidArgument(format!(
            "degree {n} beyond the {} supplied terms",
            seq.len()
        )));
    }
    let assoc = sheffer_sequence(&ShefferPair::associated(pair.f.clone())?, n)?;
    let lhs = seq[n].evaluate(&(x0 + y0));
    let rhs = (0..=n)
        .map(|k| {
            BigRational::from_integer(binomial(n, k))
                * assoc[k].evaluate(y0)
                * seq[n - k].evaluate(x0)
        })
        .fold(BigRational::zero(), |a, b| a + b);
    Ok(crate::Comparison::new(lhs, rhs))
}

/// Calls `visit` on every composition `i_1 + ... + i_m = n` with `i_j ≥ 0`.
pub fn for_each_composition(n: usize, m: usize, mut visit: impl FnMut(&[usize])) {
    fn descend(rest: usize, slots: usize, buf: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if slots == 1 {
            buf.push(rest);
            visit(buf);
            buf.pop();
            return;
        }
        for i in 0..=rest {
            buf.push(i);
            descend(rest - i, slots - 1, buf, visit);
            buf.pop();
        }
    }
    if m == 0 {
        if n == 0 {
            visit(&[]);
        }
        return;
    }
    descend(n, m, &mut Vec::with_capacity(m), &mut visit);
}

/// `Σ_{i_1+...+i_m=n} C(n; i_1..i_m) Π_j <f_j | x^{i_j}>`.
pub fn multinomial_action(fs: &[TruncatedSeries], n: usize) -> Result<ExactRational> {
    for f in fs {
        require_precision(n, f.precision())?;
    }
    let moments: Vec<Vec<ExactRational>> = fs
        .iter()
        .map(|f| (0..=n).map(|i| f.umbral_coeff(i)).collect())
        .collect();
    let mut total = BigRational::zero();
    for_each_composition(n, fs.len(), |parts| {
        let mut term = BigRational::from_integer(multinomial(parts));
        for (j, &i) in parts.iter().enumerate() {
            term *= &moments[j][i];
        }
        total += term;
    });
    Ok(total)
}

/// `<f_1 f_2 ... f_m | x^n>` through the series product.
pub fn product_action(fs: &[TruncatedSeries], n: usize) -> Result<ExactRational> {
    let prec = fs.iter().map(TruncatedSeries::precision).min().unwrap_or(n);
    let product = fs
        .iter()
        .fold(TruncatedSeries::one(prec), |acc, f| &acc * f);
    apply_functional(&product, &Polynomial::x_pow(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::{int, rat};

    fn s(v: &[(i64, i64)]) -> TruncatedSeries {
        TruncatedSeries::new(v.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    fn euler_g(prec: usize) -> TruncatedSeries {
        // (e^t + 1)/2
        let e = TruncatedSeries::exp(&int(1), prec);
        (&e + &TruncatedSeries::one(prec)).scale(&rat(1, 2))
    }

    #[test]
    fn functional_examples() {
        let t2 = TruncatedSeries::monomial(2, 4);
        assert_eq!(apply_functional(&t2, &Polynomial::x_pow(2)).unwrap(), int(2));
        assert_eq!(apply_functional(&t2, &Polynomial::x_pow(3)).unwrap(), int(0));
        let e3 = TruncatedSeries::exp(&int(3), 4);
        assert_eq!(apply_functional(&e3, &Polynomial::x_pow(2)).unwrap(), int(9));
        let f = s(&[(1, 1), (1, 1), (1, 1)]);
        let x = Polynomial::x_pow(1);
        assert_eq!(apply_functional(&f, &(&x * &x)).unwrap(), int(2));
        assert_eq!(apply_functional(&f.derivative(), &x).unwrap(), int(2));
        assert_eq!(
            apply_functional(&f, &(&x * &Polynomial::constant(int(1)))).unwrap(),
            int(1)
        );
        assert_eq!(
            apply_functional(&f.derivative(), &Polynomial::constant(int(1))).unwrap(),
            int(1)
        );
        assert_eq!(
            apply_functional(&TruncatedSeries::one(1), &Polynomial::x_pow(2)),
            Err(Error::InsufficientPrecision { needed: 2, available: 1 })
        );
    }

    #[test]
    fn exp_plus_one_evaluates_twice() {
        let y = rat(-2, 3);
        let p = Polynomial::new(vec![int(5), int(-1), rat(1, 2), int(3)]);
        let f = &TruncatedSeries::exp(&y, 3) + &TruncatedSeries::one(3);
        assert_eq!(
            apply_functional(&f, &p).unwrap(),
            p.evaluate(&y) + p.evaluate(&int(0))
        );
    }

    #[test]
    fn operator_examples() {
        let t = TruncatedSeries::identity(6);
        assert_eq!(
            apply_operator(&t, &Polynomial::x_pow(5)).unwrap(),
            Polynomial::x_pow(4).scale(&int(5))
        );
        let p = Polynomial::new(vec![int(1), int(-2), rat(1, 3), int(4)]);
        let y = rat(7, 2);
        assert_eq!(
            apply_operator(&TruncatedSeries::exp(&y, 3), &p).unwrap(),
            p.shift(&y)
        );
        let inv = euler_g(4).invert().unwrap();
        assert_eq!(
            apply_operator(&inv, &Polynomial::x_pow(1)).unwrap(),
            Polynomial::new(vec![rat(-1, 2), int(1)])
        );
    }

    #[test]
    fn appell_examples() {
        let id = appell_sequence(&TruncatedSeries::one(6), 6).unwrap();
        for (n, p) in id.iter().enumerate() {
            assert_eq!(*p, Polynomial::x_pow(n));
        }
        let g = euler_g(10);
        let e = appell_sequence(&g, 8).unwrap();
        assert_eq!(e[2], Polynomial::new(vec![int(0), int(-1), int(1)]));
        for (n, en) in e.iter().enumerate() {
            assert!(en.is_monic() && en.degree() == Some(n));
            assert_eq!(apply_operator(&g, en).unwrap(), Polynomial::x_pow(n));
        }
    }

    #[test]
    fn sheffer_examples() {
        let prec = 10;
        let t = TruncatedSeries::identity(prec);
        let assoc = sheffer_sequence(&ShefferPair::associated(t).unwrap(), 6).unwrap();
        for (n, p) in assoc.iter().enumerate() {
            assert_eq!(*p, Polynomial::x_pow(n));
        }
        let g = euler_g(prec);
        assert_eq!(
            sheffer_sequence(&ShefferPair::appell(g.clone()).unwrap(), 8).unwrap(),
            appell_sequence(&g, 8).unwrap()
        );
        let f = &TruncatedSeries::identity(prec) + &TruncatedSeries::monomial(2, prec);
        let seq = sheffer_sequence(&ShefferPair::associated(f).unwrap(), 3).unwrap();
        assert_eq!(seq[1], Polynomial::x_pow(1));
        assert_eq!(seq[2], Polynomial::new(vec![int(0), int(-2), int(1)]));
        let g = euler_g(prec);
        let only = sheffer_sequence(&ShefferPair::appell(g).unwrap(), 0).unwrap();
        assert_eq!(only, vec![Polynomial::constant(int(1))]);
    }

    #[test]
    fn pair_validation() {
        assert_eq!(
            ShefferPair::new(TruncatedSeries::identity(3), TruncatedSeries::identity(3)),
            Err(Error::NotInvertible)
        );
        assert_eq!(
            ShefferPair::new(TruncatedSeries::one(3), TruncatedSeries::monomial(2, 3)),
            Err(Error::NotDelta(Some(2)))
        );
    }

    #[test]
    fn biorthogonality_diagonal() {
        let g = euler_g(8);
        let f = &TruncatedSeries::identity(8).scale(&int(2)) + &TruncatedSeries::monomial(3, 8);
        let pair = ShefferPair::new(g, f).unwrap();
        let seq = sheffer_sequence(&pair, 6).unwrap();
        let m = biorthogonality(&pair, &seq, 6, 6).unwrap();
        assert_eq!(m[3][3], int(6));
        assert_eq!(m[4][2], int(0));
        assert!(is_factorial_diagonal(&m));
    }

    #[test]
    fn expansion_examples() {
        let prec = 8;
        let pair = ShefferPair::appell(euler_g(prec)).unwrap();
        let seq = sheffer_sequence(&pair, prec).unwrap();
        let lambda = expand_functional(pair.g(), &seq).unwrap();
        assert_eq!(lambda[0], int(1));
        assert!(lambda[1..].iter().all(Zero::is_zero));
        let lambda = expand_functional(&(pair.g() * pair.f()), &seq).unwrap();
        assert_eq!(lambda[1], int(1));
        assert!(lambda.iter().enumerate().all(|(k, l)| k == 1 || l.is_zero()));
        let h = TruncatedSeries::exp(&int(1), prec);
        let lambda = expand_functional(&h, &seq).unwrap();
        assert_eq!(reconstruct_functional(&pair, &lambda), h);

        let mu = expand_polynomial(&seq[3], &pair, &seq).unwrap();
        assert!(mu.iter().enumerate().all(|(k, m)| *m == int((k == 3) as i64)));
        let x2 = Polynomial::x_pow(2);
        let mu = expand_polynomial(&x2, &pair, &seq).unwrap();
        assert_eq!(reconstruct_polynomial(&mu, &seq), x2);

        let plain = ShefferPair::associated(TruncatedSeries::identity(6)).unwrap();
        let plain_seq = sheffer_sequence(&plain, 6).unwrap();
        let mu = expand_polynomial(&Polynomial::x_pow(4), &plain, &plain_seq).unwrap();
        assert!(mu.iter().enumerate().all(|(k, m)| *m == int((k == 4) as i64)));
    }

    #[test]
    fn sheffer_identity_examples() {
        let prec = 8;
        let pair = ShefferPair::appell(euler_g(prec)).unwrap();
        let seq = sheffer_sequence(&pair, 4).unwrap();
        let c = sheffer_identity_check(&pair, &seq, 3, &rat(2, 5), &int(0)).unwrap();
        assert!(c.holds());
        let c = sheffer_identity_check(&pair, &seq, 2, &int(1), &int(1)).unwrap();
        assert_eq!(c.lhs, int(2));
        assert!(c.holds());
        let f = &TruncatedSeries::identity(prec) + &TruncatedSeries::monomial(2, prec);
        let pair = ShefferPair::associated(f).unwrap();
        let seq = sheffer_sequence(&pair, 2).unwrap();
        assert!(sheffer_identity_check(&pair, &seq, 2, &int(1), &int(1))
            .unwrap()
            .holds());
    }

    #[test]
    fn compositions_are_enumerated_once() {
        let mut seen = Vec::new();
        for_each_composition(3, 2, |c| seen.push(c.to_vec()));
        assert_eq!(seen, vec![vec![0, 3], vec![1, 2], vec![2, 1], vec![3, 0]]);
        let mut count = 0;
        for_each_composition(6, 3, |_| count += 1);
        assert_eq!(count, 28);
        let mut empty = 0;
        for_each_composition(0, 0, |_| empty += 1);
        assert_eq!(empty, 1);
    }

    #[test]
    fn multinomial_examples() {
        let f = s(&[(1, 1), (2, 1), (-1, 3), (1, 4)]);
        assert_eq!(
            multinomial_action(std::slice::from_ref(&f), 3).unwrap(),
            apply_functional(&f, &Polynomial::x_pow(3)).unwrap()
        );
        let e = TruncatedSeries::exp(&int(1), 4);
        assert_eq!(multinomial_action(&[e.clone(), e], 2).unwrap(), int(4));
        let h = euler_g(5).invert().unwrap();
        let both = multinomial_action(&[h.clone(), h.clone()], 3).unwrap();
        let direct = apply_functional(&(&h * &h), &Polynomial::x_pow(3)).unwrap();
        assert_eq!(both, direct);
        assert_eq!(product_action(&[h.clone(), h], 3).unwrap(), direct);
    }
}
