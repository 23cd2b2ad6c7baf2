//! Adaptive Gauss-Legendre quadrature for complex-valued integrands.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::sync::OnceLock;

const ORDER: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            rel_tol: 1e-13,
            abs_tol: 1e-300,
            max_depth: 60,
        }
    }
}

/// Nodes and weights on `[-1, 1]`, from Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

fn rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(ORDER))
}

fn panel<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Complex64 {
    let (m, h) = ((a + b) / 2.0, (b - a) / 2.0);
    rule().iter().map(|&(x, w)| f(m + h * x) * w).sum::<Complex64>() * h
}

fn adapt<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, whole: Complex64, tol: f64, depth: u32) -> Result<Complex64> {
    let m = (a + b) / 2.0;
    let (l, r) = (panel(f, a, m), panel(f, m, b));
    let err = (l + r - whole).norm();
    if err <= tol {
        return Ok(l + r);
    }
    if depth == 0 {
        return Err(Error::Quadrature { estimate: err });
    }
    let t = tol * std::f64::consts::FRAC_1_SQRT_2;
    Ok(adapt(f, a, m, l, t, depth - 1)? + adapt(f, m, b, r, t, depth - 1)?)
}

/// Integrates `f` over `[a, b]`, bisecting panels until the Gauss-Legendre
/// estimate on each half agrees with the whole.
pub fn integrate<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<Complex64> {
    let whole = panel(&f, a, b);
    let tol = (cfg.rel_tol * whole.norm()).max(cfg.abs_tol);
    adapt(&f, a, b, whole, tol, cfg.max_depth)
}

/// Integrates over consecutive panels given by `breaks` with a tolerance set
/// by a first coarse pass over the whole range.
pub fn integrate_panels<F: Fn(f64) -> Complex64>(f: F, breaks: &[f64], cfg: &QuadConfig) -> Result<Complex64> {
    let coarse: Vec<Complex64> = breaks.windows(2).map(|w| panel(&f, w[0], w[1])).collect();
    let scale: f64 = coarse.iter().map(|v| v.norm()).sum();
    let tol = (cfg.rel_tol * scale).max(cfg.abs_tol) / coarse.len().max(1) as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for (w, c) in breaks.windows(2).zip(coarse) {
        total += adapt(&f, w[0], w[1], c, tol, cfg.max_depth)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        let s: f64 = gauss_legendre(20).iter().map(|p| p.1).sum();
        assert!((s - 2.0).abs() < 1e-14);
    }

    #[test]
    fn integrates_sqrt_singularity() {
        let v = integrate(|x| Complex64::new(x.sqrt(), 0.0), 0.0, 1.0, &QuadConfig::default()).unwrap();
        assert!((v.re - 2.0 / 3.0).abs() < 1e-12);
    }
}
