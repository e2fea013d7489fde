use std::fmt::Write as _;

use serde::Serialize;
use serde_json::json;
use umbral_qeuler::numbers::{format_rational, int, rat, ExactRational};
use umbral_qeuler::padic_lab::{ConvergenceReport, PAdicExperiment};
use umbral_qeuler::qeuler::{
    addition_formula, binomial_expansion, distribution_check, functional_equation_check,
    order_k_convolution, order_k_table, qeuler_polynomials, qzeta_partial, scaling_check,
    theorem1_sequence, QEulerContext, QEulerTable, WeightRepr,
};
use umbral_qeuler::umbral::{
    biorthogonality, is_factorial_diagonal, multinomial_action, product_action,
    sheffer_identity_check, sheffer_sequence,
};
use umbral_qeuler::{Error, Polynomial, ShefferPair};

use crate::config::{OutputFormat, RunConfig, Task};

pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_INVALID_WEIGHT: u8 = 3;
pub const EXIT_BUDGET: u8 = 4;
pub const EXIT_OTHER: u8 = 5;

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidWeight(_) => EXIT_INVALID_WEIGHT,
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        Error::InvalidArgument(_) | Error::NotPrime(_) => EXIT_CONFIG,
        _ => EXIT_OTHER,
    }
}

pub struct Outcome {
    pub text: String,
    pub all_pass: bool,
}

pub fn run(config: &RunConfig) -> Result<Outcome, Error> {
    match &config.task {
        Task::Numbers => table_output(config, false),
        Task::Poly => table_output(config, true),
        Task::OrderK { ks } => order_k_output(config, ks),
        Task::Verify { ds, alphas, ks } => verify_output(config, ds, alphas, ks),
        Task::Zeta { moment, x0, terms } => zeta_output(config, *moment, x0, terms),
        Task::Padic { p, moment, levels, x0, folds } => {
            padic_output(config, *p, *moment, levels, x0, *folds)
        }
    }
}

fn json_text(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn context(config: &RunConfig) -> Result<QEulerContext, Error> {
    QEulerContext::new(config.weight.clone(), config.precision)
}

fn table_text(table: &QEulerTable, format: OutputFormat, polys: bool, label: &str) -> String {
    let mut out = String::new();
    match format {
        OutputFormat::Json => out = json_text(table),
        OutputFormat::Csv => {
            out.push_str(if polys { "n,coefficients\n" } else { "n,value\n" });
            for (n, p) in table.polynomials.iter().enumerate() {
                if polys {
                    let coeffs: Vec<String> = p.clone().into();
                    let _ = writeln!(out, "{n},\"{}\"", coeffs.join(" "));
                } else {
                    let _ = writeln!(out, "{n},{}", table.numbers[n]);
                }
            }
        }
        OutputFormat::Pretty => {
            let _ = writeln!(out, "# q={}, zeta={}", table.weight.q, table.weight.zeta);
            for (n, p) in table.polynomials.iter().enumerate() {
                if polys {
                    let _ = writeln!(out, "{label}_{n}(x) = {p}");
                } else {
                    let _ = writeln!(out, "{label}_{n} = {}", table.numbers[n]);
                }
            }
        }
    }
    out
}

fn table_output(config: &RunConfig, polys: bool) -> Result<Outcome, Error> {
    let table = qeuler_polynomials(&context(config)?, config.n_max)?;
    Ok(Outcome {
        text: table_text(&table, config.output, polys, "E"),
        all_pass: true,
    })
}

#[derive(Serialize)]
struct CheckRecord {
    identity: &'static str,
    params: String,
    result: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    lhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rhs: Option<String>,
}

#[derive(Default)]
struct Suite {
    checks: Vec<CheckRecord>,
}

impl Suite {
    fn record<T: std::fmt::Display + PartialEq>(&mut self, identity: &'static str, params: String, lhs: T, rhs: T) {
        let pass = lhs == rhs;
        self.checks.push(CheckRecord {
            identity,
            params,
            result: if pass { "pass" } else { "fail" },
            lhs: (!pass).then(|| lhs.to_string()),
            rhs: (!pass).then(|| rhs.to_string()),
        });
    }

    fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.result == "pass")
    }
}

struct Rat(ExactRational);

impl PartialEq for Rat {
    fn eq(&self, o: &Self) -> bool {
        self.0 == o.0
    }
}

impl std::fmt::Display for Rat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

fn suite_text(config: &RunConfig, suite: &Suite, extra: serde_json::Value) -> String {
    match config.output {
        OutputFormat::Json => json_text(&json!({
            "weight": WeightRepr::from(&config.weight),
            "extra": extra,
            "checks": suite.checks,
            "all_pass": suite.all_pass(),
        })),
        OutputFormat::Csv => {
            let mut out = String::from("identity,params,result\n");
            for c in &suite.checks {
                let _ = writeln!(out, "{},\"{}\",{}", c.identity, c.params, c.result);
            }
            out
        }
        OutputFormat::Pretty => {
            let mut out = format!("# {}\n", config.weight);
            if let Some(obj) = extra.as_object() {
                for (k, v) in obj {
                    let _ = writeln!(out, "# {k}: {v}");
                }
            }
            for c in &suite.checks {
                let _ = writeln!(out, "{:4} {:<22} {}", c.result.to_uppercase(), c.identity, c.params);
                if let (Some(l), Some(r)) = (&c.lhs, &c.rhs) {
                    let _ = writeln!(out, "     lhs = {l}\n     rhs = {r}");
                }
            }
            let passed = suite.checks.iter().filter(|c| c.result == "pass").count();
            let _ = writeln!(out, "# {passed}/{} checks passed", suite.checks.len());
            out
        }
    }
}

fn order_k_output(config: &RunConfig, ks: &[usize]) -> Result<Outcome, Error> {
    let ctx = context(config)?;
    let base = qeuler_polynomials(&ctx, config.n_max)?;
    let mut suite = Suite::default();
    let mut tables = Vec::new();
    for &k in ks {
        let table = order_k_table(&ctx, k, config.n_max)?;
        for n in 0..=config.n_max {
            let conv = order_k_convolution(base.numbers(), k, n)?;
            suite.record("multinomial-convolution", format!("k={k} n={n}"), Rat(table.number(n).clone()), Rat(conv));
        }
        tables.push(table);
    }
    let text = match config.output {
        OutputFormat::Json => json_text(&json!({
            "weight": WeightRepr::from(&config.weight),
            "tables": tables,
            "checks": suite.checks,
            "all_pass": suite.all_pass(),
        })),
        format => {
            let mut out = String::new();
            for t in &tables {
                let label = format!("E^({})", t.order.unwrap_or(1));
                out.push_str(&table_text(t, format, true, &label));
            }
            out.push_str(&suite_text(config, &suite, json!({})));
            out
        }
    };
    Ok(Outcome { text, all_pass: suite.all_pass() })
}

fn verify_output(
    config: &RunConfig,
    ds: &[u64],
    alphas: &[ExactRational],
    ks: &[usize],
) -> Result<Outcome, Error> {
    let n_max = config.n_max;
    let ctx = context(config)?;
    let table = qeuler_polynomials(&ctx, n_max)?;
    let mut s = Suite::default();

    for n in 1..=n_max {
        s.record(
            "appell-lowering",
            format!("n={n}"),
            table.polynomial(n).derivative(),
            table.polynomial(n - 1).scale(&int(n as i64)),
        );
    }
    for n in 0..=n_max {
        s.record("binomial-relation", format!("n={n}"), binomial_expansion(table.numbers(), n)?, table.polynomial(n).clone());
    }
    let rec = theorem1_sequence(&ctx, n_max)?;
    for (n, p) in rec.iter().enumerate() {
        s.record("log-derivative-recurrence", format!("n={n}"), p.clone(), table.polynomial(n).clone());
    }
    for n in 0..=n_max {
        let c = functional_equation_check(&ctx, &table, n)?;
        s.record("functional-equation", format!("n={n}"), c.lhs, c.rhs);
    }
    let y = rat(1, 3);
    for n in 0..=n_max {
        s.record("addition-formula", format!("n={n} y=1/3"), addition_formula(&table, n, &y)?, table.polynomial(n).shift(&y));
    }
    let pair = ShefferPair::appell(ctx.g().clone())?;
    let seq = sheffer_sequence(&pair, n_max)?;
    let (x0, y0) = (rat(1, 2), rat(-2, 3));
    for n in 0..=n_max {
        let c = sheffer_identity_check(&pair, &seq, n, &x0, &y0)?;
        s.record("sheffer-identity", format!("n={n} x=1/2 y=-2/3"), Rat(c.lhs), Rat(c.rhs));
    }
    let m = biorthogonality(&pair, &seq, n_max, n_max)?;
    s.record("biorthogonality", format!("{0}x{0}", n_max + 1), is_factorial_diagonal(&m), true);
    for &d in ds {
        for n in 0..=n_max {
            for x in [int(0), rat(1, 2), rat(-3, 4)] {
                let c = distribution_check(&ctx, n, d, &x)?;
                s.record("distribution", format!("d={d} n={n} x={}", format_rational(&x)), Rat(c.lhs), Rat(c.rhs));
            }
        }
    }
    for alpha in alphas {
        for n in 0..=n_max {
            let c = scaling_check(&ctx, &table, n, alpha)?;
            s.record("scaling", format!("alpha={} n={n}", format_rational(alpha)), c.lhs, c.rhs);
        }
    }
    for &k in ks {
        let tk = order_k_table(&ctx, k, n_max)?;
        for n in 0..=n_max {
            s.record("order-k-binomial", format!("k={k} n={n}"), binomial_expansion(tk.numbers(), n)?, tk.polynomial(n).clone());
            s.record(
                "order-k-convolution",
                format!("k={k} n={n}"),
                Rat(order_k_convolution(table.numbers(), k, n)?),
                Rat(tk.number(n).clone()),
            );
            if n > 0 {
                s.record(
                    "order-k-lowering",
                    format!("k={k} n={n}"),
                    tk.polynomial(n).derivative(),
                    tk.polynomial(n - 1).scale(&int(n as i64)),
                );
            }
        }
    }
    let gf = ctx.generating_series();
    for copies in 1..=3usize {
        let fs = vec![gf.clone(); copies];
        for n in 0..=n_max {
            s.record(
                "multinomial-theorem",
                format!("m={copies} n={n}"),
                Rat(multinomial_action(&fs, n)?),
                Rat(product_action(&fs, n)?),
            );
        }
    }
    let all_pass = s.all_pass();
    let extra = json!({ "numbers": table.numbers });
    Ok(Outcome { text: suite_text(config, &s, extra), all_pass })
}

fn zeta_output(config: &RunConfig, moment: usize, x0: &ExactRational, terms: &[u64]) -> Result<Outcome, Error> {
    let ctx = QEulerContext::new(config.weight.clone(), config.precision.max(moment))?;
    let target = qeuler_polynomials(&ctx, moment)?.polynomial(moment).evaluate(x0);
    let mut rows = Vec::new();
    let mut errors = Vec::new();
    for &m in terms {
        let partial = qzeta_partial(&config.weight, -(moment as i64), x0, m)?;
        let err = &partial - &target;
        rows.push(json!({
            "terms": m,
            "partial_sum": format_rational(&partial),
            "error": format_rational(&err),
        }));
        errors.push(abs(err));
    }
    let decreasing = errors.windows(2).all(|w| w[1] < w[0]);
    let text = match config.output {
        OutputFormat::Json => json_text(&json!({
            "weight": WeightRepr::from(&config.weight),
            "s": -(moment as i64),
            "x0": format_rational(x0),
            "target": format_rational(&target),
            "rows": rows,
            "error_decreasing": decreasing,
        })),
        OutputFormat::Csv => {
            let mut out = String::from("terms,partial_sum,error\n");
            for r in &rows {
                let _ = writeln!(out, "{},{},{}", r["terms"], r["partial_sum"].as_str().unwrap_or(""), r["error"].as_str().unwrap_or(""));
            }
            out
        }
        OutputFormat::Pretty => {
            let mut out = format!(
                "# {}, s={}, x0={}, target E_{moment}(x0) = {}\n",
                config.weight,
                -(moment as i64),
                format_rational(x0),
                format_rational(&target)
            );
            for r in &rows {
                let _ = writeln!(out, "M={:<4} error = {}", r["terms"], r["error"].as_str().unwrap_or(""));
            }
            let _ = writeln!(out, "# error strictly decreasing: {}", if decreasing { "pass" } else { "fail" });
            out
        }
    };
    Ok(Outcome { text, all_pass: decreasing })
}

fn abs(r: ExactRational) -> ExactRational {
    if r < int(0) {
        -r
    } else {
        r
    }
}

fn padic_output(
    config: &RunConfig,
    p: u64,
    moment: usize,
    levels: &[u32],
    x0: &ExactRational,
    folds: u32,
) -> Result<Outcome, Error> {
    let exp = PAdicExperiment::new(p, config.weight.clone(), levels.to_vec(), Polynomial::x_pow(moment), config.budget)?;
    let report: ConvergenceReport = if folds == 1 {
        exp.convergence_report(moment, x0)?
    } else {
        exp.iterated_report(folds, moment, x0)?
    };
    let lemma = exp.lemma1_report()?;
    let all_pass = report.is_non_decreasing() && lemma.is_non_decreasing();
    let text = match config.output {
        OutputFormat::Json => json_text(&report),
        OutputFormat::Csv => report.to_csv(),
        OutputFormat::Pretty => {
            let mut out = format!("# p={p}, {}, moment={moment}, k={folds}, x0={}\n", config.weight, format_rational(x0));
            out.push_str("# level  v_p(S_m - E_n)  v_p(lemma defect)\n");
            for (r, l) in report.rows.iter().zip(&lemma.rows) {
                let _ = writeln!(out, "{:>7}  {:>14}  {:>17}", r.level, r.valuation.to_string(), l.valuation.to_string());
            }
            let _ = writeln!(out, "# non-decreasing: {}", if all_pass { "pass" } else { "fail" });
            out
        }
    };
    Ok(Outcome { text, all_pass })
}
