//! Exact arithmetic: big rationals, polynomials in one formal parameter
//! (`mu` or `b`), polynomials in `z` over those, and truncated power series.
//!
//! Nothing in this module touches floating point except the final
//! [`CoeffPoly::evaluate`] bridge.

mod coeff;
mod param;
pub mod rational;
mod series;

pub use coeff::{z_poly, CoeffPoly, Parity};
pub use param::{param_poly_from_json, parse_param_poly, Param, ParamPoly};
pub use rational::{format_rational, parse_rational};
pub use series::{SeriesVar, TruncSeries};

pub use num_rational::BigRational;

/// `p ↦ ∫₀ᶻ p`.
pub fn integrate_from_zero(p: &CoeffPoly) -> CoeffPoly {
    p.integrate_from_zero()
}

/// `p ↦ p / z`, failing when the constant term is nonzero.
pub fn divide_by_z(p: &CoeffPoly) -> crate::Result<CoeffPoly> {
    p.divide_by_z()
}

/// `mu ↦ b - 1`.
pub fn mu_as_b() -> ParamPoly {
    ParamPoly::from_ints(Param::B, &[-1, 1])
}

/// `b ↦ mu + 1`.
pub fn b_as_mu() -> ParamPoly {
    ParamPoly::from_ints(Param::Mu, &[1, 1])
}

/// `mu ↦ -mu`.
pub fn neg_mu() -> ParamPoly {
    ParamPoly::from_ints(Param::Mu, &[0, -1])
}
