//! Special functions on complex arguments: log-gamma, the regularized Gauss
//! series, modified Bessel functions and Gauss-Legendre quadrature.

mod bessel;
mod gamma;
mod hyp;
pub mod quad;

pub use bessel::{bessel_i, bessel_k, BESSEL_ARG_LIMIT};
pub use gamma::{gamma, is_nonpositive_integer, log_gamma, rgamma, sin_pi, GammaRatio};
pub use hyp::{ln_reg_hyp2f1, reg_hyp2f1, tail_series, HYP_GUARD};

/// Natural log of `cosh r`, stable for large `|r|`.
pub fn ln_cosh(r: f64) -> f64 {
    let a = r.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}
