use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Slack for angles that land on a base-range boundary up to rounding.
const ANGLE_SLACK: f64 = 1e-12;

/// A point `r·e^{iθ}` on the Riemann surface of the logarithm; `θ` keeps
/// the full winding.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RiemannPoint {
    pub r: f64,
    pub theta: f64,
}

/// A point reduced to a base sheet: `θ = base_theta + period·m`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Reduced {
    pub base: Complex64,
    pub base_theta: f64,
    pub m: i64,
}

impl RiemannPoint {
    pub fn new(r: f64, theta: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::Domain(format!(
                "modulus must be positive and finite, got {r}"
            )));
        }
        if !theta.is_finite() {
            return Err(Error::Domain(format!("angle must be finite, got {theta}")));
        }
        Ok(RiemannPoint { r, theta })
    }

    /// `ln r + iθ`.
    pub fn ln(&self) -> Complex64 {
        Complex64::new(self.r.ln(), self.theta)
    }

    /// The principal-sheet value.
    pub fn value(&self) -> Complex64 {
        Complex64::from_polar(self.r, self.theta)
    }

    pub fn mul(&self, o: &RiemannPoint) -> RiemannPoint {
        RiemannPoint {
            r: self.r * o.r,
            theta: self.theta + o.theta,
        }
    }

    pub fn square(&self) -> RiemannPoint {
        RiemannPoint {
            r: self.r * self.r,
            theta: 2.0 * self.theta,
        }
    }

    /// `self^p = exp(p·ln self)` as a complex logarithm.
    pub fn ln_pow(&self, p: Complex64) -> Complex64 {
        p * self.ln()
    }

    /// Rotates by `m` half-turns.
    pub fn rotate_half_turns(&self, m: i64) -> RiemannPoint {
        RiemannPoint {
            r: self.r,
            theta: self.theta + PI * m as f64,
        }
    }

    fn reduce(&self, upper: f64, period: f64) -> Reduced {
        let m = ((self.theta - upper) / period - ANGLE_SLACK).ceil() as i64;
        let base_theta = self.theta - period * m as f64;
        Reduced {
            base: Complex64::from_polar(self.r, base_theta),
            base_theta,
            m,
        }
    }

    /// `θ = θ₀ + π·m` with `θ₀ ∈ (-π/2, π/2]`.
    pub fn reduce_half_turns(&self) -> Reduced {
        self.reduce(PI / 2.0, PI)
    }

    /// `θ = θ₀ + 2π·m` with `θ₀ ∈ (-π, π]`.
    pub fn reduce_full_turns(&self) -> Reduced {
        self.reduce(PI, 2.0 * PI)
    }
}
