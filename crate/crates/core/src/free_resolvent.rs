//! The resolvent kernel of the Laplacian on the upper half-plane as a
//! function of the point-pair invariant.

use crate::error::{Error, Result};
use crate::geometry::{sigma, HPoint};
use crate::specfun::{is_nonpositive_integer, log_gamma, tail_series, HYP_GUARD};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Kernels are only evaluated for `sigma > 1 + DIAG_GUARD`.
pub const DIAG_GUARD: f64 = HYP_GUARD;

fn check(s: Complex64, x: f64) -> Result<()> {
    if is_nonpositive_integer(s) {
        return Err(Error::Pole {
            what: "free resolvent",
            at: s,
        });
    }
    if !(x > 1.0 + DIAG_GUARD) {
        return Err(Error::NearDiagonal { sigma: x });
    }
    Ok(())
}

/// `g_s` at a fixed spectral parameter, with the gamma prefactor computed
/// once.
#[derive(Debug, Clone, Copy)]
pub struct FreeResolvent {
    s: Complex64,
    ln_pre: Complex64,
}

impl FreeResolvent {
    pub fn new(s: Complex64) -> Result<Self> {
        if is_nonpositive_integer(s) {
            return Err(Error::Pole {
                what: "free resolvent",
                at: s,
            });
        }
        Ok(FreeResolvent {
            s,
            ln_pre: log_gamma(s)? * 2.0 - (4.0 * PI).ln(),
        })
    }

    pub fn eval(&self, x: f64) -> Result<Complex64> {
        check(self.s, x)?;
        let one = Complex64::new(1.0, 0.0);
        let f = tail_series(self.s, self.s, self.s * 2.0, 1.0, one / x)?;
        Ok((self.ln_pre - self.s * x.ln()).exp() * f)
    }
}

/// `g_s(x) = Gamma(s)^2 / (4 pi) x^{-s} F(s, s; 2s; 1/x)` with `F` the
/// regularized Gauss function.
pub fn g_s(s: Complex64, x: f64) -> Result<Complex64> {
    FreeResolvent::new(s)?.eval(x)
}

/// The free kernel `R_H(s; z, w) = g_s(sigma(z, w))`.
pub fn free_kernel(s: Complex64, z: &HPoint, w: &HPoint) -> Result<Complex64> {
    g_s(s, sigma(z, w))
}

/// Tail of the series for `g_s(x)` from index `n` on; `g_tail(s, 0, x)` is
/// `g_s(x)` itself.
pub fn g_tail(s: Complex64, n: u32, x: f64) -> Result<Complex64> {
    let a = s + n as f64;
    if is_nonpositive_integer(a) {
        return Err(Error::Pole {
            what: "free resolvent tail",
            at: s,
        });
    }
    if !(x > 1.0 + DIAG_GUARD) {
        return Err(Error::NearDiagonal { sigma: x });
    }
    let one = Complex64::new(1.0, 0.0);
    let log_fact: f64 = (2..=n).map(|k| (k as f64).ln()).sum();
    let pre = (log_gamma(a)? * 2.0 - log_fact - a * x.ln()).exp() / (4.0 * PI);
    Ok(pre * tail_series(a, a, s * 2.0 + n as f64, n as f64 + 1.0, one / x)?)
}
