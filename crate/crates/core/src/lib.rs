//! Exact coefficient polynomials of the large-`a` expansions of the Kummer
//! functions `M(a, b, z²)` and `U(a, b, z²)` in modified Bessel functions,
//! together with independent floating-point oracles that check the
//! expansions on the whole Riemann surface of the logarithm.
//!
//! Layout:
//!
//! - [`ratpoly`]: exact rationals, parameter polynomials, z-polynomials and
//!   truncated power series.
//! - [`olver`]: the `A_s`/`B_s` recursion for an even polynomial `f`, the
//!   lowered coefficients `a_s`/`b_s`, the normalizer series `F(u, ±μ)` and
//!   the basis shift.
//! - [`temme`]: the generating-function route to the same coefficients,
//!   generalized Bernoulli polynomials, and gamma-ratio coefficients.
//! - [`special`]: Bessel `I`/`K`, Kummer `M`/`U`, `ln Γ`, log-scaled complex
//!   values and Riemann-surface points.
//! - [`expansion`]: both sides of the expansions, discrepancy measurement
//!   and decay sweeps.
//! - [`identities`]: the exact identity suite behind `verify`.

pub mod error;
pub mod expansion;
pub mod identities;
pub mod olver;
pub mod ratpoly;
pub mod special;
pub mod temme;

pub use error::{Error, Result};
