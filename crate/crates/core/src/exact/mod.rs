//! Exact integers and rationals, certified interval arithmetic, and the
//! log-linear number form used for tuned coefficients.

pub mod combinatorics;
pub mod decimal;
pub mod dyadic;
pub mod elementary;
pub mod endpoint;
pub mod interval;
pub mod loglinear;

pub use combinatorics::{binomial, binomial_row, log2_binomial};
pub use dyadic::Dyadic;
pub use elementary::{certified_context, const_enclosure, const_enclosure_named, fast_context, Constant, MathContext};
pub use endpoint::{Endpoint, Round};
pub use interval::Interval;
pub use loglinear::LogLinearNumber;

/// Enclosure of a log-linear value with width at most `2^(−precision)`.
pub fn eval_loglinear(x: &LogLinearNumber, precision: u32) -> crate::CertifiedInterval {
    x.enclose_certified(precision)
}
