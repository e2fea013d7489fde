//! Exact umbral calculus over `Q` and the weighted q-Euler family.
//!
//! Everything is computed in exact rational arithmetic: truncated power
//! series act on polynomials both as functionals and as operators, Appell
//! and Sheffer sequences are expanded from their generating functions, and
//! the weighted q-Euler polynomials, their order-k versions and the
//! identities between them are checked by exact equality. [`padic_lab`]
//! evaluates the fermionic sums at finite level and measures their p-adic
//! convergence.

mod check;
mod error;

pub mod numbers;
pub mod padic_lab;
pub mod polynomials;
pub mod qeuler;
pub mod series;
pub mod umbral;

pub use check::Comparison;
pub use error::{Error, Result};
pub use numbers::{ExactRational, QWeight, Valuation};
pub use polynomials::Polynomial;
pub use series::{Order, TruncatedSeries};
pub use umbral::ShefferPair;
