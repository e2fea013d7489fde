//! Weighted q-Euler numbers and polynomials.
//!
//! `E_{n,ζ}^q(x)` is the Appell sequence of
//! `g_q(t|ζ) = (qζ e^t + 1) / [2]_q`, i.e. the coefficients of
//! `[2]_q / (qζ e^t + 1) · e^{xt}`. The order-k family uses `g^k`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::check::Comparison;
use crate::error::{Error, Result};
use crate::numbers::{binomial, format_rational, multinomial, pow, q_bracket_neg, ExactRational, QWeight};
use crate::polynomials::Polynomial;
use crate::series::TruncatedSeries;
use crate::umbral::{appell_sequence, apply_operator, for_each_composition};

/// A weight together with its cached `g`-series at a fixed precision.
#[derive(Debug, Clone)]
pub struct QEulerContext {
    weight: QWeight,
    g: TruncatedSeries,
}

impl QEulerContext {
    /// `g_0 = (1 + qζ)/(1 + q)` and `g_k = qζ / ([2]_q k!)` for `k ≥ 1`.
    pub fn new(weight: QWeight, precision: usize) -> Result<Self> {
        let two_q = weight.two_q();
        let qz = weight.q_zeta();
        if two_q.is_zero() || (BigRational::one() + &qz).is_zero() {
            return Err(Error::InvalidWeight(weight.to_string()));
        }
        let e = TruncatedSeries::exp(&BigRational::one(), precision);
        let g = (&e.scale(&qz) + &TruncatedSeries::one(precision)).scale(&two_q.recip());
        Ok(QEulerContext { weight, g })
    }

    pub fn weight(&self) -> &QWeight {
        &self.weight
    }

    pub fn precision(&self) -> usize {
        self.g.precision()
    }

    pub fn g(&self) -> &TruncatedSeries {
        &self.g
    }

    /// `[2]_q / (qζ e^t + 1)`, the generating function at `x = 0`.
    pub fn generating_series(&self) -> TruncatedSeries {
        self.g.invert().expect("g has nonzero constant term")
    }

    /// `E_0 = [2]_q / (1 + qζ)`.
    pub fn e0(&self) -> ExactRational {
        self.weight.two_q() / (BigRational::one() + self.weight.q_zeta())
    }

    /// A context at the same precision for `(q^d, ζ^d)`.
    pub fn power_context(&self, d: u64) -> Result<Self> {
        Self::new(self.weight.power(d)?, self.precision())
    }
}

/// Numbers and polynomials of one family at one weight.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QEulerTable {
    pub weight: WeightRepr,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    pub numbers: Vec<String>,
    pub polynomials: Vec<Polynomial>,
    #[serde(skip)]
    values: Vec<ExactRational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightRepr {
    pub q: String,
    pub zeta: String,
}

impl From<&QWeight> for WeightRepr {
    fn from(w: &QWeight) -> Self {
        WeightRepr {
            q: format_rational(w.q()),
            zeta: format_rational(w.zeta()),
        }
    }
}

impl QEulerTable {
    fn from_polynomials(weight: &QWeight, order: Option<usize>, polynomials: Vec<Polynomial>) -> Self {
        let values: Vec<_> = polynomials.iter().map(|p| p.coeff(0)).collect();
        QEulerTable {
            weight: weight.into(),
            order,
            numbers: values.iter().map(format_rational).collect(),
            polynomials,
            values,
        }
    }

    pub fn number(&self, n: usize) -> &ExactRational {
        &self.values[n]
    }

    pub fn numbers(&self) -> &[ExactRational] {
        &self.values
    }

    pub fn polynomial(&self, n: usize) -> &Polynomial {
        &self.polynomials[n]
    }

    pub fn n_max(&self) -> usize {
        self.polynomials.len() - 1
    }
}

fn check_n(n: usize, available: usize) -> Result<()> {
    if n > available {
        Err(Error::InsufficientPrecision { needed: n, available })
    } else {
        Ok(())
    }
}

/// `E_0(x) .. E_{n_max}(x)` from the Appell construction.
pub fn qeuler_polynomials(ctx: &QEulerContext, n_max: usize) -> Result<QEulerTable> {
    let polys = appell_sequence(ctx.g(), n_max)?;
    Ok(QEulerTable::from_polynomials(ctx.weight(), None, polys))
}

/// `Σ_l C(n,l) x^l E_{n-l}` built from a list of numbers.
pub fn binomial_expansion(numbers: &[ExactRational], n: usize) -> Result<Polynomial> {
    check_n(n, numbers.len().saturating_sub(1))?;
    Ok(Polynomial::new(
        (0..=n)
            .map(|l| BigRational::from_integer(binomial(n, l)) * &numbers[n - l])
            .collect(),
    ))
}

/// The operator `g'(t)/g(t)`, truncated to `precision`.
fn log_derivative(ctx: &QEulerContext, precision: usize) -> Result<TruncatedSeries> {
    let g = ctx.g().truncate(precision + 1);
    if g.precision() <= precision {
        return Err(Error::InsufficientPrecision { needed: precision + 1, available: g.precision() });
    }
    Ok(&g.derivative() * &g.truncate(precision).invert()?)
}

/// `(x - g'/g) E_n(x)`: multiplication by `x` minus the operator `g'/g`.
pub fn theorem1_step(ctx: &QEulerContext, e_n: &Polynomial) -> Result<Polynomial> {
    let deg = e_n.degree().unwrap_or(0);
    let op = log_derivative(ctx, deg)?;
    Ok(&(&Polynomial::x_pow(1) * e_n) - &apply_operator(&op, e_n)?)
}

/// Iterates `E_{n+1} = (x - g'/g) E_n` from `E_0` to produce `E_0 .. E_{n_max}`.
pub fn theorem1_sequence(ctx: &QEulerContext, n_max: usize) -> Result<Vec<Polynomial>> {
    check_n(n_max, ctx.precision())?;
    let mut out = vec![Polynomial::constant(ctx.e0())];
    if n_max == 0 {
        return Ok(out);
    }
    let op = log_derivative(ctx, n_max - 1)?;
    for n in 0..n_max {
        let next = &(&Polynomial::x_pow(1) * &out[n]) - &apply_operator(&op, &out[n])?;
        out.push(next);
    }
    Ok(out)
}

/// `qζ E_n(x+1) + E_n(x)` against `[2]_q x^n`.
pub fn functional_equation_check(
    ctx: &QEulerContext,
    table: &QEulerTable,
    n: usize,
) -> Result<Comparison<Polynomial>> {
    check_n(n, table.n_max())?;
    let e = table.polynomial(n);
    let one = BigRational::one();
    let lhs = &e.shift(&one).scale(&ctx.weight().q_zeta()) + e;
    let rhs = Polynomial::x_pow(n).scale(&ctx.weight().two_q());
    Ok(Comparison::new(lhs, rhs))
}

/// `Σ_k C(n,k) E_{n-k}(y) x^k`, which should equal `E_n(x + y)`.
pub fn addition_formula(table: &QEulerTable, n: usize, y: &ExactRational) -> Result<Polynomial> {
    check_n(n, table.n_max())?;
    Ok(Polynomial::new(
        (0..=n)
            .map(|k| BigRational::from_integer(binomial(n, k)) * table.polynomial(n - k).evaluate(y))
            .collect(),
    ))
}

/// Both sides of the multiplication theorem at odd `d`:
/// `E_n(d x0)` against
/// `d^n / [d]_{-q} · Σ_{j<d} (-qζ)^j E^{(q^d, ζ^d)}_n(x0 + j/d)`.
pub fn distribution_check(
    ctx: &QEulerContext,
    n: usize,
    d: u64,
    x0: &ExactRational,
) -> Result<Comparison<ExactRational>> {
    if d == 0 || d.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("d = {d} must be odd and positive")));
    }
    check_n(n, ctx.precision())?;
    let base = qeuler_polynomials(ctx, n)?;
    let powered = qeuler_polynomials(&QEulerContext::new(ctx.weight().power(d)?, n)?, n)?;
    let d_rat = BigRational::from_integer(BigInt::from(d));
    let lhs = base.polynomial(n).evaluate(&(&d_rat * x0));

    let neg_qz = -ctx.weight().q_zeta();
    let e_n = powered.polynomial(n);
    let mut sum = BigRational::zero();
    let mut w = BigRational::one();
    for j in 0..d {
        let arg = x0 + BigRational::new(BigInt::from(j), BigInt::from(d));
        sum += &w * e_n.evaluate(&arg);
        w *= &neg_qz;
    }
    let rhs = pow(&d_rat, n as u64) / q_bracket_neg(d, ctx.weight().q())? * sum;
    Ok(Comparison::new(lhs, rhs))
}

/// Both sides of the scaling law: `E_n(αx)` against
/// `α^n · [g(t) / g(t/α)] E_n(x)`.
pub fn scaling_check(
    ctx: &QEulerContext,
    table: &QEulerTable,
    n: usize,
    alpha: &ExactRational,
) -> Result<Comparison<Polynomial>> {
    if alpha.is_zero() {
        return Err(Error::DivisionByZero("scaling at α = 0"));
    }
    check_n(n, table.n_max())?;
    let e = table.polynomial(n);
    let lhs = e.dilate(alpha);
    let g = ctx.g().truncate(n);
    let ratio = &g * &g.rescale(alpha)?.invert()?;
    let rhs = apply_operator(&ratio, e)?.scale(&pow(alpha, n as u64));
    Ok(Comparison::new(lhs, rhs))
}

/// The order-k family: Appell sequence of `g^k`.
pub fn order_k_table(ctx: &QEulerContext, k: usize, n_max: usize) -> Result<QEulerTable> {
    if k == 0 {
        return Err(Error::InvalidArgument("order k must be at least 1".into()));
    }
    let polys = appell_sequence(&ctx.g().pow(k), n_max)?;
    Ok(QEulerTable::from_polynomials(ctx.weight(), Some(k), polys))
}

/// `Σ_{i_1+...+i_k=n} C(n; i_1..i_k) E_{i_1} ... E_{i_k}` from the base numbers.
pub fn order_k_convolution(numbers: &[ExactRational], k: usize, n: usize) -> Result<ExactRational> {
    check_n(n, numbers.len().saturating_sub(1))?;
    let mut total = BigRational::zero();
    for_each_composition(n, k, |parts| {
        let mut term = BigRational::from_integer(multinomial(parts));
        for &i in parts {
            term *= &numbers[i];
        }
        total += term;
    });
    Ok(total)
}

/// `[2]_q Σ_{m=0}^{M} (-qζ)^m (m + x0)^{-s}`.
pub fn qzeta_partial(weight: &QWeight, s: i64, x0: &ExactRational, terms: u64) -> Result<ExactRational> {
    let neg_qz = -weight.q_zeta();
    let exponent = s.unsigned_abs();
    let mut w = BigRational::one();
    let mut sum = BigRational::zero();
    for m in 0..=terms {
        let base = x0 + BigRational::from_integer(BigInt::from(m));
        let term = if s > 0 {
            if base.is_zero() {
                return Err(Error::PoleAtNonpositive(m));
            }
            pow(&base.recip(), exponent)
        } else {
            pow(&base, exponent)
        };
        sum += &w * term;
        w *= &neg_qz;
    }
    Ok(weight.two_q() * sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::{int, rat};

    fn w(q: (i64, i64), z: (i64, i64)) -> QWeight {
        QWeight::new(rat(q.0, q.1), rat(z.0, z.1)).unwrap()
    }

    fn poly(v: &[(i64, i64)]) -> Polynomial {
        Polynomial::new(v.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    /// Classical Euler polynomials from `E_n(x+1) + E_n(x) = 2x^n`: writing
    /// `E_n = Σ a_j x^j`, the top coefficients are solved from the highest
    /// power down (the system is triangular with diagonal 2).
    fn classical_euler_oracle(n: usize) -> Polynomial {
        let mut a = vec![BigRational::zero(); n + 1];
        for j in (0..=n).rev() {
            // coefficient of x^j on the left: 2 a_j + Σ_{i>j} C(i,j) a_i
            let mut s = BigRational::zero();
            for (i, ai) in a.iter().enumerate().skip(j + 1) {
                s += BigRational::from_integer(binomial(i, j)) * ai;
            }
            let target = if j == n { int(2) } else { int(0) };
            a[j] = (target - s) / int(2);
        }
        Polynomial::new(a)
    }

    #[test]
    fn context_construction() {
        let ctx = QEulerContext::new(QWeight::classical(), 6).unwrap();
        assert_eq!(ctx.g().coeff(0), int(1));
        assert_eq!(ctx.g().coeff(1), rat(1, 2));
        let ctx = QEulerContext::new(w((2, 3), (3, 5)), 6).unwrap();
        assert_eq!(ctx.g().coeff(0), rat(21, 25));
        assert_eq!(ctx.g().coeff(3), rat(2, 5) / rat(5, 3) / int(6));
        assert!(QWeight::new(int(1), int(-1)).is_err());
    }

    #[test]
    fn classical_reduction() {
        let ctx = QEulerContext::new(QWeight::classical(), 12).unwrap();
        let table = qeuler_polynomials(&ctx, 10).unwrap();
        assert_eq!(*table.polynomial(1), poly(&[(-1, 2), (1, 1)]));
        assert_eq!(*table.polynomial(2), poly(&[(0, 1), (-1, 1), (1, 1)]));
        for n in 0..=10 {
            assert_eq!(*table.polynomial(n), classical_euler_oracle(n), "n = {n}");
        }
    }

    #[test]
    fn e0_is_forced() {
        for wt in [w((2, 3), (3, 5)), w((4, 1), (7, 1)), w((-1, 3), (5, 2))] {
            let ctx = QEulerContext::new(wt.clone(), 4).unwrap();
            let table = qeuler_polynomials(&ctx, 0).unwrap();
            assert_eq!(*table.number(0), wt.two_q() / (int(1) + wt.q_zeta()));
        }
        let ctx = QEulerContext::new(w((2, 3), (3, 5)), 4).unwrap();
        assert_eq!(ctx.e0(), rat(25, 21));
    }

    #[test]
    fn appell_property_and_binomial_relation() {
        let ctx = QEulerContext::new(w((2, 3), (3, 5)), 10).unwrap();
        let table = qeuler_polynomials(&ctx, 10).unwrap();
        for n in 1..=10 {
            assert_eq!(
                table.polynomial(n).derivative(),
                table.polynomial(n - 1).scale(&int(n as i64))
            );
            assert_eq!(binomial_expansion(table.numbers(), n).unwrap(), *table.polynomial(n));
        }
        for n in 0..=10 {
            assert_eq!(table.polynomial(n).evaluate(&int(0)), *table.number(n));
        }
    }

    #[test]
    fn theorem1_matches_appell() {
        let ctx = QEulerContext::new(QWeight::classical(), 4).unwrap();
        let e1 = theorem1_step(&ctx, &Polynomial::constant(int(1))).unwrap();
        assert_eq!(e1, poly(&[(-1, 2), (1, 1)]));
        let ctx = QEulerContext::new(w((2, 3), (3, 5)), 12).unwrap();
        let table = qeuler_polynomials(&ctx, 11).unwrap();
        let rec = theorem1_sequence(&ctx, 11).unwrap();
        assert_eq!(rec, table.polynomials);
        // leading coefficient is 1/g_0 = E_0, so monic only when 1 + qζ = [2]_q
        for (n, p) in rec.iter().enumerate() {
            assert_eq!(p.degree(), Some(n));
            assert_eq!(p.coeff(n), ctx.e0());
        }
    }

    #[test]
    fn functional_equation() {
        let ctx = QEulerContext::new(QWeight::classical(), 4).unwrap();
        let table = qeuler_polynomials(&ctx, 3).unwrap();
        let c = functional_equation_check(&ctx, &table, 3).unwrap();
        assert_eq!(c.rhs, Polynomial::x_pow(3).scale(&int(2)));
        assert!(c.holds());
        let ctx = QEulerContext::new(w((5, 2), (-1, 7)), 4).unwrap();
        let table = qeuler_polynomials(&ctx, 0).unwrap();
        assert!(functional_equation_check(&ctx, &table, 0).unwrap().holds());
    }

    #[test]
    fn addition_matches_shift() {
        let ctx = QEulerContext::new(QWeight::classical(), 4).unwrap();
        let table = qeuler_polynomials(&ctx, 2).unwrap();
        assert_eq!(addition_formula(&table, 2, &int(1)).unwrap(), poly(&[(0, 1), (1, 1), (1, 1)]));
        assert_eq!(addition_formula(&table, 2, &int(0)).unwrap(), *table.polynomial(2));
    }

    #[test]
    fn distribution_examples() {
        let ctx = QEulerContext::new(w((2, 3), (3, 5)), 8).unwrap();
        let c = distribution_check(&ctx, 5, 1, &rat(3, 4)).unwrap();
        assert!(c.holds());
        let c = distribution_check(&ctx, 2, 3, &rat(1, 2)).unwrap();
        assert!(c.holds(), "{c:?}");
        let classical = QEulerContext::new(QWeight::classical(), 8).unwrap();
        for n in 0..=6 {
            assert!(distribution_check(&classical, n, 5, &rat(-2, 7)).unwrap().holds());
        }
        assert!(distribution_check(&ctx, 2, 2, &int(0)).is_err());
        assert!(distribution_check(&ctx, 2, 0, &int(0)).is_err());
    }

    #[test]
    fn scaling_examples() {
        let ctx = QEulerContext::new(QWeight::classical(), 8).unwrap();
        let table = qeuler_polynomials(&ctx, 8).unwrap();
        let c = scaling_check(&ctx, &table, 2, &int(2)).unwrap();
        assert_eq!(c.lhs, poly(&[(0, 1), (-2, 1), (4, 1)]));
        assert!(c.holds());
        let c = scaling_check(&ctx, &table, 5, &int(1)).unwrap();
        assert!(c.holds());
        assert_eq!(
            scaling_check(&ctx, &table, 2, &int(0)),
            Err(Error::DivisionByZero("scaling at α = 0"))
        );
    }

    #[test]
    fn order_k_examples() {
        let ctx = QEulerContext::new(w((2, 3), (3, 5)), 8).unwrap();
        let base = qeuler_polynomials(&ctx, 8).unwrap();
        let k1 = order_k_table(&ctx, 1, 8).unwrap();
        assert_eq!(k1.polynomials, base.polynomials);
        let classical = QEulerContext::new(QWeight::classical(), 4).unwrap();
        let k2 = order_k_table(&classical, 2, 3).unwrap();
        assert_eq!(*k2.polynomial(1), poly(&[(-1, 1), (1, 1)]));
        assert_eq!(order_k_convolution(base.numbers(), 1, 5).unwrap(), *base.number(5));
        assert_eq!(
            order_k_convolution(base.numbers(), 2, 0).unwrap(),
            base.number(0) * base.number(0)
        );
        let k3 = order_k_table(&ctx, 3, 4).unwrap();
        assert_eq!(order_k_convolution(base.numbers(), 3, 4).unwrap(), *k3.number(4));
        assert!(order_k_table(&ctx, 0, 3).is_err());
    }

    #[test]
    fn qzeta_examples() {
        let wt = w((2, 3), (3, 5));
        let x0 = rat(3, 2);
        assert_eq!(qzeta_partial(&wt, 2, &x0, 0).unwrap(), wt.two_q() * rat(4, 9));
        assert_eq!(qzeta_partial(&wt, -3, &x0, 0).unwrap(), wt.two_q() * rat(27, 8));
        // s = 0: geometric partial sum
        let r = -wt.q_zeta();
        let geo = (int(1) - pow(&r, 6)) / (int(1) - &r);
        assert_eq!(qzeta_partial(&wt, 0, &x0, 5).unwrap(), wt.two_q() * geo);
        assert_eq!(
            qzeta_partial(&wt, 1, &int(-2), 5),
            Err(Error::PoleAtNonpositive(2))
        );
    }

    #[test]
    fn table_json_schema() {
        let ctx = QEulerContext::new(QWeight::classical(), 2).unwrap();
        let table = qeuler_polynomials(&ctx, 1).unwrap();
        let j = serde_json::to_value(&table).unwrap();
        assert_eq!(
            j,
            serde_json::json!({
                "weight": {"q": "1", "zeta": "1"},
                "numbers": ["1", "-1/2"],
                "polynomials": [["1"], ["-1/2", "1"]]
            })
        );
    }
}
