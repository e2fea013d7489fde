//! Truncated fermionic sums at level `p^m` and their p-adic convergence.
//!
//! The level-`m` sum of an integrand `f` is
//! `S_m = [p^m]_{-q}^{-1} Σ_{ξ < p^m} (-qζ)^ξ f(ξ)`. For `v_p(q-1) ≥ 1` and
//! `v_p(ζ-1) ≥ 1` these converge p-adically, and their limits are the
//! weighted q-Euler values.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numbers::{format_rational, padic_valuation, pow, q_bracket_neg, ExactRational, QWeight, Valuation};
use crate::polynomials::Polynomial;
use crate::qeuler::{order_k_table, qeuler_polynomials, QEulerContext};

pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone)]
pub struct PAdicExperiment {
    p: u64,
    weight: QWeight,
    levels: Vec<u32>,
    integrand: Polynomial,
    budget: u64,
}

fn level_size(p: u64, m: u32, folds: u32, budget: u64) -> Result<u64> {
    let needed = (p as u128).checked_pow(m * folds).unwrap_or(u128::MAX);
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded {
            needed,
            budget: budget as u128,
        });
    }
    Ok(p.pow(m))
}

impl PAdicExperiment {
    pub fn new(
        p: u64,
        weight: QWeight,
        levels: Vec<u32>,
        integrand: Polynomial,
        budget: u64,
    ) -> Result<Self> {
        if p == 2 {
            return Err(Error::InvalidArgument("p must be an odd prime".into()));
        }
        if !weight.is_padic_small(p)? {
            return Err(Error::InvalidWeight(format!(
                "{weight} does not satisfy v_{p}(q-1) >= 1 and v_{p}(zeta-1) >= 1"
            )));
        }
        if levels.is_empty() || levels.contains(&0) {
            return Err(Error::InvalidArgument("levels must be non-empty and at least 1".into()));
        }
        let top = *levels.iter().max().expect("non-empty");
        level_size(p, top, 1, budget)?;
        Ok(PAdicExperiment {
            p,
            weight,
            levels,
            integrand,
            budget,
        })
    }

    /// `q = 1 + p`, `ζ = 1 + 2p`.
    pub fn default_weight(p: u64) -> Result<QWeight> {
        let p = BigInt::from(p);
        QWeight::new(
            BigRational::from_integer(BigInt::one() + &p),
            BigRational::from_integer(BigInt::one() + BigInt::from(2) * &p),
        )
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn weight(&self) -> &QWeight {
        &self.weight
    }

    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    pub fn integrand(&self) -> &Polynomial {
        &self.integrand
    }

    pub fn with_integrand(&self, integrand: Polynomial) -> Self {
        PAdicExperiment {
            integrand,
            ..self.clone()
        }
    }

    /// Level-`m` sum of `ξ ↦ integrand(x0 + ξ)`.
    pub fn fermionic_sum(&self, m: u32, x0: &ExactRational) -> Result<ExactRational> {
        let size = level_size(self.p, m, 1, self.budget)?;
        let neg_qz = -self.weight.q_zeta();
        let mut w = BigRational::one();
        let mut sum = BigRational::zero();
        let mut arg = x0.clone();
        let one = BigRational::one();
        for _ in 0..size {
            let v = self.integrand.evaluate(&arg);
            if !v.is_zero() {
                sum += &w * v;
            }
            w *= &neg_qz;
            arg += &one;
        }
        Ok(sum / q_bracket_neg(size, self.weight.q())?)
    }

    /// `qζ S_m(f(·+1)) + S_m(f) - [2]_q f(0)`, which tends to 0.
    pub fn lemma1_check(&self, m: u32) -> Result<ExactRational> {
        let shifted = self.fermionic_sum(m, &BigRational::one())?;
        let plain = self.fermionic_sum(m, &BigRational::zero())?;
        let f0 = self.integrand.evaluate(&BigRational::zero());
        Ok(self.weight.q_zeta() * shifted + plain - self.weight.two_q() * f0)
    }

    /// `v_p(S_m - E_n(x0))` at each level, for the integrand `x^n`.
    pub fn convergence_report(&self, n: usize, x0: &ExactRational) -> Result<ConvergenceReport> {
        let ctx = QEulerContext::new(self.weight.clone(), n)?;
        let target = qeuler_polynomials(&ctx, n)?.polynomial(n).evaluate(x0);
        let moment = self.with_integrand(Polynomial::x_pow(n));
        let rows = self.rows(|m| Ok(moment.fermionic_sum(m, x0)? - &target))?;
        Ok(self.report(n, rows))
    }

    /// `v_p` of the level-shift defect at each level.
    pub fn lemma1_report(&self) -> Result<ConvergenceReport> {
        let rows = self.rows(|m| self.lemma1_check(m))?;
        let degree = self.integrand.degree().unwrap_or(0);
        Ok(self.report(degree, rows))
    }

    /// Level-by-level valuations, computed in parallel and returned in
    /// level order.
    fn rows(&self, value: impl Fn(u32) -> Result<ExactRational> + Sync) -> Result<Vec<ValuationRow>> {
        self.levels
            .par_iter()
            .map(|&m| {
                Ok(ValuationRow {
                    level: m,
                    valuation: padic_valuation(&value(m)?, self.p)?,
                })
            })
            .collect()
    }

    fn report(&self, moment: usize, rows: Vec<ValuationRow>) -> ConvergenceReport {
        ConvergenceReport {
            p: self.p,
            q: format_rational(self.weight.q()),
            zeta: format_rational(self.weight.zeta()),
            moment,
            rows,
        }
    }

    /// k-fold level-`m` sum of `(x0 + ξ_1 + ... + ξ_k)^n`, normalized by
    /// `[p^m]_{-q}^k`. Only the distribution of `Σ ξ_i` matters, so the
    /// `p^{km}` summands are folded into counts per total.
    pub fn iterated_fermionic_sum(
        &self,
        k: u32,
        m: u32,
        n: usize,
        x0: &ExactRational,
    ) -> Result<ExactRational> {
        if k == 0 {
            return Err(Error::InvalidArgument("fold count must be at least 1".into()));
        }
        let size = level_size(self.p, m, k, self.budget)? as usize;
        let mut counts: Vec<u128> = vec![1; size];
        for _ in 1..k {
            let mut next = vec![0u128; counts.len() + size - 1];
            // sliding window sum of width `size`
            let mut window = 0u128;
            for (s, slot) in next.iter_mut().enumerate() {
                if s < counts.len() {
                    window += counts[s];
                }
                if s >= size {
                    window -= counts[s - size];
                }
                *slot = window;
            }
            counts = next;
        }
        let neg_qz = -self.weight.q_zeta();
        let mut w = BigRational::one();
        let mut sum = BigRational::zero();
        for (s, &c) in counts.iter().enumerate() {
            let arg = x0 + BigRational::from_integer(BigInt::from(s));
            sum += &w * pow(&arg, n as u64) * BigRational::from_integer(BigInt::from(c));
            w *= &neg_qz;
        }
        let norm = pow(&q_bracket_neg(size as u64, self.weight.q())?, k as u64);
        Ok(sum / norm)
    }

    /// `v_p(iterated sum - E^{(k)}_n(x0))` at each level.
    pub fn iterated_report(&self, k: u32, n: usize, x0: &ExactRational) -> Result<ConvergenceReport> {
        let ctx = QEulerContext::new(self.weight.clone(), n)?;
        let target = order_k_table(&ctx, k as usize, n)?.polynomial(n).evaluate(x0);
        let rows = self.rows(|m| Ok(self.iterated_fermionic_sum(k, m, n, x0)? - &target))?;
        Ok(self.report(n, rows))
    }

    /// The level-`m` sum of `x^n` regrouped by residue class mod `p`:
    /// `p^n / [p]_{-q} Σ_{j<p} (-qζ)^j S'_{m-1}((x0 + j)/p)`, where `S'` uses
    /// the weight `(q^p, ζ^p)`. Equal to [`Self::fermionic_sum`] at every
    /// finite level.
    pub fn regrouped_sum(&self, m: u32, n: usize, x0: &ExactRational) -> Result<ExactRational> {
        if m == 0 {
            return Err(Error::InvalidArgument("regrouping needs level at least 1".into()));
        }
        let d = self.p;
        let coarse = PAdicExperiment {
            p: self.p,
            weight: self.weight.power(d)?,
            levels: vec![m - 1],
            integrand: Polynomial::x_pow(n),
            budget: self.budget,
        };
        let d_rat = BigRational::from_integer(BigInt::from(d));
        let neg_qz = -self.weight.q_zeta();
        let mut w = BigRational::one();
        let mut sum = BigRational::zero();
        for j in 0..d {
            let arg = (x0 + BigRational::from_integer(BigInt::from(j))) / &d_rat;
            sum += &w * coarse.fermionic_sum(m - 1, &arg)?;
            w *= &neg_qz;
        }
        Ok(pow(&d_rat, n as u64) / q_bracket_neg(d, self.weight.q())? * sum)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValuationRow {
    pub level: u32,
    pub valuation: Valuation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConvergenceReport {
    pub p: u64,
    pub q: String,
    pub zeta: String,
    pub moment: usize,
    pub rows: Vec<ValuationRow>,
}

impl ConvergenceReport {
    pub fn valuations(&self) -> Vec<Valuation> {
        self.rows.iter().map(|r| r.valuation).collect()
    }

    pub fn is_non_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[0].valuation <= w[1].valuation)
    }

    /// Every consecutive pair with both levels `≥ from` gains at least
    /// `step` in valuation. Two infinite valuations count as a gain.
    pub fn grows_on_tail(&self, from: u32, step: i64) -> bool {
        self.rows
            .windows(2)
            .filter(|w| w[0].level >= from)
            .all(|w| match (w[0].valuation, w[1].valuation) {
                (Valuation::Finite(a), Valuation::Finite(b)) => b - a >= step,
                (_, Valuation::Infinite) => true,
                (Valuation::Infinite, Valuation::Finite(_)) => false,
            })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("level,valuation\n");
        for r in &self.rows {
            out.push_str(&format!("{},{}\n", r.level, r.valuation));
        }
        out
    }
}
