//! Per-mode scattering data of the funnel: the Poisson mode, the scattering
//! coefficient and the functional equation tying the Dirichlet Green's
//! function at `s` and `1 - s` together.

use crate::error::{Error, Result};
use crate::model_kernels::cylinder::omega;
use crate::model_kernels::funnel::{ln_beta, ln_v0};
use crate::model_kernels::funnel_mode;
use crate::specfun::{rgamma, GammaRatio};
use num_complex::Complex64;

/// Poisson mode `E(s; r) = beta v0(s; r) / (ell Gamma(s + 1/2))`.
pub fn poisson_mode(s: Complex64, kappa: f64, r: f64, ell: f64) -> Result<Complex64> {
    if r < 0.0 {
        return Err(Error::domain("Poisson mode needs r >= 0"));
    }
    let iwk = Complex64::new(0.0, omega(ell) * kappa);
    let lb = ln_beta(s, iwk)?;
    match ln_v0(s, iwk, r)? {
        Some(v) => Ok((lb + v).exp() * rgamma(s + 0.5) / ell),
        None => Ok(Complex64::new(0.0, 0.0)),
    }
}

/// Scattering coefficient
/// `S = Gamma(1/2 - s) Gamma(A+) Gamma(A-) / (Gamma(s - 1/2) Gamma(B+) Gamma(B-))`,
/// `A+- = (s +- i w kappa + 1)/2`, `B+- = (2 - s +- i w kappa)/2`.
///
/// Coinciding poles are resolved as limits in `s`.
pub fn scattering_coeff(s: Complex64, kappa: f64, ell: f64) -> Result<Complex64> {
    // even in kappa; using |kappa| keeps the evaluation order, so +-kappa agree bitwise
    let iwk = Complex64::new(0.0, omega(ell) * kappa.abs());
    let mut g = GammaRatio::default();
    g.push(-s + 0.5, -1.0, 1);
    g.push((s + iwk + 1.0) / 2.0, 0.5, 1);
    g.push((s - iwk + 1.0) / 2.0, 0.5, 1);
    g.push(s - 0.5, 1.0, -1);
    g.push((-s + iwk + 2.0) / 2.0, -0.5, -1);
    g.push((-s - iwk + 2.0) / 2.0, -0.5, -1);
    g.value().ok_or(Error::Pole {
        what: "scattering coefficient",
        at: s,
    })
}

/// The functional equation
/// `v(s) - v(1-s) = c_norm (2s - 1) ell E(1-s; r) S(s) E(1-s; r')`
/// for the funnel mode `v`, with `c_norm` fixed from one reference point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionalEquation {
    pub ell: f64,
    pub c_norm: Complex64,
}

/// `(s, kappa, r, r')` used to calibrate `c_norm`.
pub const REFERENCE_POINT: (Complex64, f64, f64, f64) = (Complex64::new(0.7, 0.4), 0.5, 0.8, 1.6);

impl FunctionalEquation {
    pub fn calibrate(ell: f64) -> Result<Self> {
        let (s, kappa, r, r2) = REFERENCE_POINT;
        Ok(FunctionalEquation {
            ell,
            c_norm: Self::estimate(s, kappa, r, r2, ell)?,
        })
    }

    fn sides(s: Complex64, kappa: f64, r: f64, r2: f64, ell: f64) -> Result<(Complex64, Complex64)> {
        let one = Complex64::new(1.0, 0.0);
        let lhs = funnel_mode(s, kappa, r, r2, ell)? - funnel_mode(one - s, kappa, r, r2, ell)?;
        let rhs = (s * 2.0 - 1.0)
            * ell
            * poisson_mode(one - s, kappa, r, ell)?
            * scattering_coeff(s, kappa, ell)?
            * poisson_mode(one - s, kappa, r2, ell)?;
        Ok((lhs, rhs))
    }

    /// The ratio of the two sides at one point.
    pub fn estimate(s: Complex64, kappa: f64, r: f64, r2: f64, ell: f64) -> Result<Complex64> {
        let (lhs, rhs) = Self::sides(s, kappa, r, r2, ell)?;
        if rhs == Complex64::new(0.0, 0.0) {
            return Err(Error::domain("functional equation degenerates at this point"));
        }
        Ok(lhs / rhs)
    }

    /// Absolute residual of the equation with the calibrated constant.
    pub fn residual(&self, s: Complex64, kappa: f64, r: f64, r2: f64) -> Result<f64> {
        let (lhs, rhs) = Self::sides(s, kappa, r, r2, self.ell)?;
        Ok((lhs - self.c_norm * rhs).norm())
    }
}

pub fn functional_equation_residual(s: Complex64, kappa: f64, r: f64, r2: f64, ell: f64) -> Result<f64> {
    FunctionalEquation::calibrate(ell)?.residual(s, kappa, r, r2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn exact_zero_and_pole() {
        assert_eq!(scattering_coeff(c(2.0, 0.0), 0.0, 1.0).unwrap(), c(0.0, 0.0));
        assert!(scattering_coeff(c(-1.0, 0.0), 0.0, 1.0).is_err());
    }

    #[test]
    fn inversion() {
        let (s, k, l) = (c(0.3, 1.2), 0.75, 1.7);
        let p = scattering_coeff(s, k, l).unwrap() * scattering_coeff(c(1.0, 0.0) - s, k, l).unwrap();
        assert!((p - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn c_norm_equals_length() {
        for &ell in &[1.0, 1.5, 2.0] {
            let f = FunctionalEquation::calibrate(ell).unwrap();
            assert!((f.c_norm - c(ell, 0.0)).norm() < 1e-9, "{ell}: {}", f.c_norm);
        }
    }

    #[test]
    fn poisson_reflection() {
        let (s, k, r, l) = (c(0.35, 0.6), 0.5, 1.1, 1.0);
        let a = poisson_mode(c(1.0, 0.0) - s, k, r, l).unwrap() * scattering_coeff(s, k, l).unwrap();
        let b = -poisson_mode(s, k, r, l).unwrap();
        assert!((a - b).norm() < 1e-12 * b.norm());
    }
}
