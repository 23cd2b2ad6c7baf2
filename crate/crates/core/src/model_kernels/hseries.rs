//! The image-sum remainder `H(s; z, w) = sum_{k != 0} lambda^k sigma(z, e^{k ell} w)^{-s}`.

use super::cylinder::check_images_domain;
use super::{DiagonalKernel, ImagesConfig};
use crate::error::{Error, Result};
use crate::geometry::{hyperbolic_distance, sigma, HPoint};
use crate::twist::TwistSpec;
use num_complex::Complex64;

pub fn h_series_direct(
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
    let mut sums = vec![Complex64::new(0.0, 0.0); twist.angles.len()];
    for k in 1..=cfg.max_images as i64 {
        let tp = (-s * sigma(z, &w.scale((k as f64 * ell).exp())).ln()).exp();
        let tm = (-s * sigma(z, &w.scale((-(k as f64) * ell).exp())).ln()).exp();
        let mut done = true;
        for (j, v) in sums.iter_mut().enumerate() {
            let (a, b) = (twist.power(j, k) * tp, twist.power(j, -k) * tm);
            *v += a + b;
            let tail = (a.norm() + b.norm()) * q / (1.0 - q);
            if !(tail <= cfg.tail_tol * v.norm()) {
                done = false;
            }
        }
        if done && k > 2 {
            return Ok(DiagonalKernel { values: sums });
        }
    }
    Err(Error::Truncation {
        what: "image remainder",
        limit: cfg.max_images,
        tail: f64::NAN,
    })
}

/// Envelope `(4 e^{d(z,w)})^{Re s} sum_{k != 0} e^{-(Re s - C)|k| ell}`, with
/// `C = max |log |lambda_j|| / ell`, bounding every entry of `H`.
pub fn h_series_bound(s: Complex64, ell: f64, twist: &TwistSpec, z: &HPoint, w: &HPoint) -> Result<f64> {
    let growth = twist.max_log_abs() / ell;
    check_images_domain(s, growth)?;
    let q = (-(s.re - growth) * ell).exp();
    let d = hyperbolic_distance(z, w);
    Ok((4.0 * d.exp()).powf(s.re) * 2.0 * q / (1.0 - q))
}
