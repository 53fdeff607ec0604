//! Floating-point kernels used as independent oracles: Bessel `I`/`K` and
//! Kummer `M`/`U` on the Riemann surface, `ln Γ`, and the log-scaled
//! complex values they return.

pub mod bessel;
pub mod dd;
pub mod gamma;
pub mod kummer;
pub mod logc;
pub mod precision;
pub mod quad;
pub mod riemann;

pub use bessel::{bessel_i, bessel_k, bessel_k_reflection};
pub use gamma::{cos_pi, log_gamma, log_gamma_ratio, sin_pi, sin_ratio};
pub use kummer::{apply_monodromy, kummer_m, kummer_u, kummer_u_connection, kummer_u_scaled};
pub use logc::LogComplex;
pub use precision::{Mode, Precision};
pub use riemann::RiemannPoint;
