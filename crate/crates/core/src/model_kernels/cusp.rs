//! The parabolic cusp `<z -> z + 1> \ H`, coordinates `x = phi / 2 pi`,
//! `y = e^r`.

use super::cylinder::check_images_domain;
use super::{fourier_sum, require_unitary, DiagonalKernel, ImagesConfig};
use crate::error::{Error, Result};
use crate::free_resolvent::FreeResolvent;
use crate::geometry::{reduce_cusp, sigma, CylCoord, HPoint};
use crate::specfun::{bessel_i, bessel_k};
use crate::twist::TwistSpec;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Radial Green's function of the cusp mode with frequency `kappa`:
/// `sqrt(y y') I_{s-1/2}(|kappa| y_<) K_{s-1/2}(|kappa| y_>)`, and
/// `y_<^s y_>^{1-s} / (2s - 1)` for `kappa = 0`.
pub fn cusp_mode(s: Complex64, kappa: f64, y: f64, y2: f64) -> Result<Complex64> {
    if !(y > 0.0 && y2 > 0.0) {
        return Err(Error::domain("cusp heights must be positive"));
    }
    let (lo, hi) = if y <= y2 { (y, y2) } else { (y2, y) };
    if kappa == 0.0 {
        if s == Complex64::new(0.5, 0.0) {
            return Err(Error::Pole {
                what: "cusp zero mode",
                at: s,
            });
        }
        let one = Complex64::new(1.0, 0.0);
        return Ok((s * lo.ln() + (one - s) * hi.ln()).exp() / (s * 2.0 - 1.0));
    }
    let nu = s - 0.5;
    let k = kappa.abs();
    let i = bessel_i(nu, k * lo)?;
    let kk = bessel_k(nu, k * hi)?;
    Ok(i * kk * (lo * hi).sqrt())
}

/// Cusp kernel by its Fourier expansion
/// `sum_k e^{2 pi i kappa (x - x')} u_{2 pi kappa}(y, y')`, `kappa = k + theta_j`.
pub fn cusp_kernel(
    s: Complex64,
    twist: &TwistSpec,
    c1: &CylCoord,
    c2: &CylCoord,
    k_max: usize,
) -> Result<DiagonalKernel> {
    require_unitary(twist, "cusp kernel")?;
    let dx = (c1.phi - c2.phi) / (2.0 * PI);
    let (y1, y2) = (c1.r.exp(), c2.r.exp());
    let rate = 2.0 * PI * (y1 - y2).abs();
    let values = twist
        .angles
        .iter()
        .enumerate()
        .map(|(j, a)| {
            let sum = fourier_sum(k_max, rate, |k| {
                let kappa = k as f64 + a.theta;
                Ok(Complex64::from_polar(1.0, 2.0 * PI * kappa * dx) * cusp_mode(s, 2.0 * PI * kappa, y1, y2)?)
            })?;
            Ok(sum * twist.power(j, c1.winding - c2.winding))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DiagonalKernel { values })
}

/// Cusp kernel by the image sum `sum_k lambda^k g_s(sigma(z, w + k))`.
pub fn cusp_images(
    s: Complex64,
    twist: &TwistSpec,
    z: &HPoint,
    w: &HPoint,
    cfg: &ImagesConfig,
) -> Result<DiagonalKernel> {
    require_unitary(twist, "cusp image sum")?;
    check_images_domain(s, 0.5)?;
    let (z0, nz) = reduce_cusp(z);
    let (w0, nw) = reduce_cusp(w);
    let g = FreeResolvent::new(s)?;
    let m = twist.angles.len();
    let g0 = g.eval(sigma(&z0, &w0))?;
    let mut sums = vec![g0; m];
    let mut l1 = g0.norm();
    let p = 2.0 * s.re - 1.0;
    let mut converged = false;
    for k in 1..=cfg.max_images as i64 {
        let gp = g.eval(sigma(&z0, &w0.shift(k as f64)))?;
        let gm = g.eval(sigma(&z0, &w0.shift(-(k as f64))))?;
        for (j, v) in sums.iter_mut().enumerate() {
            *v += twist.power(j, k) * gp + twist.power(j, -k) * gm;
        }
        l1 += gp.norm() + gm.norm();
        // terms decay like |k|^{-2 Re s}
        let tail = (gp.norm() + gm.norm()) * k as f64 / p;
        if tail <= cfg.tail_tol * l1 && k > 2 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Truncation {
            what: "cusp image sum",
            limit: cfg.max_images,
            tail: f64::NAN,
        });
    }
    for (j, v) in sums.iter_mut().enumerate() {
        *v *= twist.power(j, nz - nw);
    }
    Ok(DiagonalKernel { values: sums })
}
