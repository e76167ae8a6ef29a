//! Certified verification of the Gaussian-form upper bound
//!
//! ```text
//! C(n, k) ≤ 2^n / sqrt(πn/2) · exp(−2(k − n/2)²/n + 23/(18n))
//! ```
//!
//! together with its applications: counting continuations of Boolean
//! functions to bent functions, the Latin dependence of Walsh–Hadamard
//! spectra, and bounded sum-of-squares representation counts. A small LP
//! tuner recovers optimal coefficients for the bound's quadratic form.
//!
//! Interval arithmetic is generic over the endpoint scalar ([`Endpoint`]):
//! `f64` with outward nudging serves as a fast first pass and [`Dyadic`]
//! provides arbitrary precision when a comparison is not yet decided.

pub mod bent;
pub mod bound;
pub mod error;
pub mod exact;
pub mod latin;
pub mod lp;
pub mod squares;
pub mod verdict;

pub use error::{Error, Result};
pub use exact::{Dyadic, Endpoint, Interval, LogLinearNumber, MathContext, Round};
pub use verdict::{BoundVerdict, PrecisionPolicy, Status};

/// Arbitrary-precision integer used for every combinatorial count.
pub type ExactInt = num_bigint::BigInt;
/// Arbitrary-precision rational, always reduced with a positive denominator.
pub type ExactRational = num_rational::BigRational;
/// Interval with exact dyadic endpoints.
pub type CertifiedInterval = Interval<Dyadic>;
/// Hardware-precision interval used for first-pass screening.
pub type FastInterval = Interval<f64>;
