use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;
use umbral_qeuler::numbers::{int, parse_rational, ExactRational};
use umbral_qeuler::padic_lab::{PAdicExperiment, DEFAULT_BUDGET};
use umbral_qeuler::QWeight;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] umbral_qeuler::Error),
}

#[derive(Debug, Parser)]
#[command(name = "qeuler", version, about = "Exact weighted q-Euler polynomials and umbral identities")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Weighted q-Euler numbers.
    Numbers(Common),
    /// Weighted q-Euler polynomials.
    Poly(Common),
    /// Order-k polynomials with the multinomial cross-check.
    OrderK {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "1,2,3")]
        k: String,
    },
    /// Run the identity suite at one weight.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "1,3,5")]
        d: String,
        #[arg(long, default_value = "2,-1,1/3", allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, default_value = "1,2,3")]
        k: String,
    },
    /// Partial sums of the weighted q-Zeta function at s = -moment.
    Zeta {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2)]
        moment: usize,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        x0: String,
        /// Truncation points M, as a list or an inclusive range `a..b`.
        #[arg(long, default_value = "20..60")]
        terms: String,
    },
    /// p-adic valuation report for the truncated fermionic sums.
    Padic {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long, default_value_t = 0)]
        moment: usize,
        #[arg(long, default_value = "1..6")]
        levels: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        x0: String,
        /// Fold count of the iterated sum (order k).
        #[arg(long, default_value_t = 1)]
        k: u32,
        /// Maximum number of summands per level.
        #[arg(long, env = "QEULER_BUDGET", default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// q as `a/b` or an integer; defaults to 1 (or 1+p for `padic`).
    #[arg(long, allow_hyphen_values = true)]
    q: Option<String>,
    /// zeta as `a/b` or an integer; defaults to 1 (or 1+2p for `padic`).
    #[arg(long, allow_hyphen_values = true)]
    zeta: Option<String>,
    #[arg(long, default_value_t = 10)]
    n_max: usize,
    #[arg(long, default_value_t = 32)]
    precision: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Pretty)]
    output: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Clone)]
pub enum Task {
    Numbers,
    Poly,
    OrderK { ks: Vec<usize> },
    Verify { ds: Vec<u64>, alphas: Vec<ExactRational>, ks: Vec<usize> },
    Zeta { moment: usize, x0: ExactRational, terms: Vec<u64> },
    Padic { p: u64, moment: usize, levels: Vec<u32>, x0: ExactRational, folds: u32 },
}

/// A validated invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub task: Task,
    pub weight: QWeight,
    pub n_max: usize,
    pub precision: usize,
    pub output: OutputFormat,
    pub budget: u64,
}

fn parse_list<T>(s: &str, what: &str, item: impl Fn(&str) -> Option<T>) -> Result<Vec<T>, ConfigError> {
    let v = s
        .split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| item(x).ok_or_else(|| ConfigError::Invalid(format!("bad {what} entry {x:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    if v.is_empty() {
        return Err(ConfigError::Invalid(format!("{what} list is empty")));
    }
    Ok(v)
}

/// `"1..6"` (inclusive) or `"1,2,5"`.
pub fn parse_int_range<T>(s: &str, what: &str) -> Result<Vec<T>, ConfigError>
where
    T: std::str::FromStr + TryFrom<u64>,
{
    if let Some((a, b)) = s.split_once("..") {
        let bad = || ConfigError::Invalid(format!("bad {what} range {s:?}"));
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        let b: u64 = b.trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        return (a..=b).map(|x| T::try_from(x).map_err(|_| bad())).collect();
    }
    parse_list(s, what, |x| x.parse().ok())
}

fn weight(common: &Common, default: impl FnOnce() -> Result<QWeight, ConfigError>) -> Result<QWeight, ConfigError> {
    match (&common.q, &common.zeta) {
        (None, None) => default(),
        (q, z) => Ok(QWeight::parse(
            q.as_deref().unwrap_or("1"),
            z.as_deref().unwrap_or("1"),
        )?),
    }
}

impl Cli {
    pub fn into_config(self) -> Result<RunConfig, ConfigError> {
        let classical = || Ok(QWeight::classical());
        let (common, task, weight, budget) = match self.command {
            Command::Numbers(c) => {
                let w = weight(&c, classical)?;
                (c, Task::Numbers, w, DEFAULT_BUDGET)
            }
            Command::Poly(c) => {
                let w = weight(&c, classical)?;
                (c, Task::Poly, w, DEFAULT_BUDGET)
            }
            Command::OrderK { common, k } => {
                let ks: Vec<usize> = parse_int_range(&k, "k")?;
                if ks.contains(&0) {
                    return Err(ConfigError::Invalid("k must be at least 1".into()));
                }
                let w = weight(&common, classical)?;
                (common, Task::OrderK { ks }, w, DEFAULT_BUDGET)
            }
            Command::Verify { common, d, alpha, k } => {
                let ds: Vec<u64> = parse_int_range(&d, "d")?;
                if ds.iter().any(|d| d % 2 == 0) {
                    return Err(ConfigError::Invalid("d must be odd".into()));
                }
                let alphas = parse_list(&alpha, "alpha", |x| parse_rational(x).ok())?;
                if alphas.iter().any(|a| *a == int(0)) {
                    return Err(ConfigError::Invalid("alpha must be nonzero".into()));
                }
                let ks: Vec<usize> = parse_int_range(&k, "k")?;
                if ks.contains(&0) {
                    return Err(ConfigError::Invalid("k must be at least 1".into()));
                }
                let w = weight(&common, classical)?;
                (common, Task::Verify { ds, alphas, ks }, w, DEFAULT_BUDGET)
            }
            Command::Zeta { common, moment, x0, terms } => {
                let x0 = parse_rational(&x0)?;
                let terms = parse_int_range(&terms, "terms")?;
                let w = weight(&common, classical)?;
                (common, Task::Zeta { moment, x0, terms }, w, DEFAULT_BUDGET)
            }
            Command::Padic { common, p, moment, levels, x0, k, budget } => {
                let levels: Vec<u32> = parse_int_range(&levels, "levels")?;
                let x0 = parse_rational(&x0)?;
                if k == 0 {
                    return Err(ConfigError::Invalid("k must be at least 1".into()));
                }
                let w = weight(&common, || Ok(PAdicExperiment::default_weight(p)?))?;
                let task = Task::Padic { p, moment, levels, x0, folds: k };
                (common, task, w, budget)
            }
        };
        if common.n_max > common.precision {
            return Err(ConfigError::Invalid(format!(
                "n-max {} exceeds precision {}",
                common.n_max, common.precision
            )));
        }
        Ok(RunConfig {
            task,
            weight,
            n_max: common.n_max,
            precision: common.precision,
            output: common.output,
            budget,
        })
    }
}
