//! The hyperbolic cylinder `<z -> e^ell z> \ H`.

use super::{fourier_sum, require_unitary, DiagonalKernel, ImagesConfig, CONVERGENCE_MARGIN};
use crate::error::{Error, Result};
use crate::free_resolvent::FreeResolvent;
use crate::geometry::{cyl_to_plane, reduce_cylinder, sigma, CylCoord, HPoint};
use crate::specfun::{is_nonpositive_integer, ln_cosh, ln_reg_hyp2f1, log_gamma};
use crate::twist::TwistSpec;
use num_complex::Complex64;
use std::f64::consts::{LN_2, PI};

pub(crate) fn check_images_domain(s: Complex64, growth: f64) -> Result<()> {
    if s.re <= growth + CONVERGENCE_MARGIN {
        return Err(Error::domain(format!(
            "image sum needs Re s > {}, got {}",
            growth + CONVERGENCE_MARGIN,
            s.re
        )));
    }
    Ok(())
}

/// `sum_k lambda_j^k g_s(sigma(z, e^{k ell} w))` for each angle class, with
/// no reduction of the arguments.
pub fn cyl_images_sum(
    s: Complex64,
    ell: f64,
    twist: &TwistSpec,
    z: &HPoint,
    w: &HPoint,
    cfg: &ImagesConfig,
) -> Result<DiagonalKernel> {
    let growth = twist.max_log_abs() / ell;
    check_images_domain(s, growth)?;
    let q = (-(s.re - growth) * ell).exp();
    let m = twist.angles.len();
    let g = FreeResolvent::new(s)?;
    let g0 = g.eval(sigma(z, w))?;
    let mut sums = vec![g0; m];
    let mut l1 = vec![g0.norm(); m];
    let mut prev = (g0.norm(), g0.norm());
    for k in 1..=cfg.max_images as i64 {
        let gp = g.eval(sigma(z, &w.scale((k as f64 * ell).exp())))?;
        let gm = g.eval(sigma(z, &w.scale((-(k as f64) * ell).exp())))?;
        let mut done = true;
        for (j, a) in twist.angles.iter().enumerate() {
            let (tp, tm) = (twist.power(j, k) * gp, twist.power(j, -k) * gm);
            sums[j] += tp + tm;
            l1[j] += tp.norm() + tm.norm();
            let mut tail = 0.0;
            for (t, last, rho) in [(gp.norm(), prev.0, a.log_abs), (gm.norm(), prev.1, -a.log_abs)] {
                let ratio = if last > 0.0 { t / last } else { 0.0 };
                let qe = q.max(ratio * rho.exp());
                if qe >= 1.0 {
                    tail = f64::INFINITY;
                } else {
                    tail += t * (k as f64 * rho).exp() * qe / (1.0 - qe);
                }
            }
            if !(tail <= cfg.tail_tol * l1[j]) {
                done = false;
            }
        }
        prev = (gp.norm(), gm.norm());
        if done {
            return Ok(DiagonalKernel { values: sums });
        }
    }
    Err(Error::Truncation {
        what: "cylinder image sum",
        limit: cfg.max_images,
        tail: f64::NAN,
    })
}

/// Cylinder kernel by the image sum, after moving both points into the
/// fundamental annulus `1 <= |z| < e^ell`.
pub fn cyl_kernel_images(
    s: Complex64,
    ell: f64,
    twist: &TwistSpec,
    z: &HPoint,
    w: &HPoint,
    cfg: &ImagesConfig,
) -> Result<DiagonalKernel> {
    let (z0, jz) = reduce_cylinder(z, ell);
    let (w0, jw) = reduce_cylinder(w, ell);
    let mut k = cyl_images_sum(s, ell, twist, &z0, &w0, cfg)?;
    for (j, v) in k.values.iter_mut().enumerate() {
        *v *= twist.power(j, jz - jw);
    }
    Ok(k)
}

pub(crate) fn omega(ell: f64) -> f64 {
    2.0 * PI / ell
}

/// `log` of `cosh(r)^{-s} F(s + i w k, s - i w k; s + 1/2; (1 - tanh r)/2)`.
pub(crate) fn ln_v(s: Complex64, iwk: Complex64, r: f64) -> Result<Option<Complex64>> {
    let z = 1.0 / (1.0 + (2.0 * r).exp());
    let f = ln_reg_hyp2f1(s + iwk, s - iwk, s + 0.5, Complex64::new(z, 0.0))?;
    Ok(f.map(|f| f - s * ln_cosh(r)))
}

/// The mode solution `v(s; r) = cosh(r)^{-s} F(s + i w kappa, s - i w kappa; s + 1/2; (1 - tanh r)/2)`,
/// regularized, which decays like `2^s e^{-s r} / Gamma(s + 1/2)` as `r -> inf`.
pub fn cyl_mode_solution(s: Complex64, kappa: f64, r: f64, ell: f64) -> Result<Complex64> {
    let iwk = Complex64::new(0.0, omega(ell) * kappa);
    Ok(ln_v(s, iwk, r)?.map_or(Complex64::new(0.0, 0.0), |v| v.exp()))
}

/// Radial Green's function of the cylinder mode with frequency `kappa`:
/// `a_kappa v(-r_<) v(r_>)` with `a_kappa = 2^{-2s} Gamma(s + i w kappa) Gamma(s - i w kappa)`.
pub fn cyl_mode(s: Complex64, kappa: f64, r: f64, r2: f64, ell: f64) -> Result<Complex64> {
    let iwk = Complex64::new(0.0, omega(ell) * kappa);
    if is_nonpositive_integer(s + iwk) || is_nonpositive_integer(s - iwk) {
        return Err(Error::Pole {
            what: "cylinder mode",
            at: s,
        });
    }
    let (lo, hi) = if r <= r2 { (r, r2) } else { (r2, r) };
    let ln_a = -s * (2.0 * LN_2) + (log_gamma(s + iwk)? + log_gamma(s - iwk)?);
    match (ln_v(s, iwk, -lo)?, ln_v(s, iwk, hi)?) {
        (Some(a), Some(b)) => Ok((ln_a + a + b).exp()),
        _ => Ok(Complex64::new(0.0, 0.0)),
    }
}

/// Cylinder kernel by its Fourier expansion
/// `(1/ell) sum_k e^{i (phi - phi') kappa} v_kappa(r, r')`, `kappa = k + theta_j`.
pub fn cyl_kernel_fourier(
    s: Complex64,
    ell: f64,
    twist: &TwistSpec,
    c1: &CylCoord,
    c2: &CylCoord,
    k_max: usize,
) -> Result<DiagonalKernel> {
    require_unitary(twist, "Fourier expansion")?;
    mode_synthesis(twist, c1, c2, k_max, ell, |kappa| cyl_mode(s, kappa, c1.r, c2.r, ell))
}

/// `(1/ell) sum_k e^{i (phi - phi') kappa} m(kappa)` per class, times the
/// winding phase.
pub(crate) fn mode_synthesis<F>(
    twist: &TwistSpec,
    c1: &CylCoord,
    c2: &CylCoord,
    k_max: usize,
    ell: f64,
    mode: F,
) -> Result<DiagonalKernel>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let dphi = c1.phi - c2.phi;
    let rate = omega(ell) * (c1.r - c2.r).abs();
    let values = twist
        .angles
        .iter()
        .enumerate()
        .map(|(j, a)| {
            let sum = fourier_sum(k_max, rate, |k| {
                let kappa = k as f64 + a.theta;
                Ok(Complex64::from_polar(1.0, dphi * kappa) * mode(kappa)?)
            })?;
            Ok(sum / ell * twist.power(j, c1.winding - c2.winding))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DiagonalKernel { values })
}

/// Plane point of a cylinder coordinate.
pub fn plane_point(c: &CylCoord, ell: f64) -> HPoint {
    cyl_to_plane(c, ell)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn images_match_fourier() {
        let s = Complex64::new(2.0, 0.3);
        let t = TwistSpec::unitary(&[(0.25, 1), (0.5, 1)]).unwrap();
        let (c1, c2) = (CylCoord::new(0.3, 1.0), CylCoord::new(1.4, 4.0));
        let a = cyl_kernel_images(
            s,
            1.0,
            &t,
            &plane_point(&c1, 1.0),
            &plane_point(&c2, 1.0),
            &ImagesConfig::default(),
        )
        .unwrap();
        let b = cyl_kernel_fourier(s, 1.0, &t, &c1, &c2, 500).unwrap();
        assert!(a.max_rel_diff(&b) < 1e-10, "{:?} {:?}", a, b);
    }

    #[test]
    fn mode_is_symmetric() {
        let s = Complex64::new(1.1, -0.4);
        let a = cyl_mode(s, 0.7, -0.4, 1.2, 2.0).unwrap();
        let b = cyl_mode(s, 0.7, 1.2, -0.4, 2.0).unwrap();
        assert_eq!(a, b);
        assert_eq!(cyl_mode(s, -0.7, -0.4, 1.2, 2.0).unwrap(), a);
    }

    #[test]
    fn pole_reported() {
        assert!(matches!(
            cyl_mode(Complex64::new(-1.0, 0.0), 0.0, 0.0, 1.0, 1.0),
            Err(Error::Pole { .. })
        ));
    }
}
