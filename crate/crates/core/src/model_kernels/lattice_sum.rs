//! The twisted lattice sum `S_xi(s; a, b) = sum_k xi^k ((k + a)^2 + b^2)^{-s}`
//! with `xi = e^{2 pi i lambda}`, directly and through its Poisson-dual
//! integral representation which continues it to all `s`.

use crate::error::{Error, Result};
use crate::specfun::quad::{integrate_panels, QuadConfig};
use crate::specfun::{is_nonpositive_integer, log_gamma, rgamma};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::OnceLock;

/// The direct sum is used only for `Re s > 1/2 + DIRECT_MARGIN`.
pub const DIRECT_MARGIN: f64 = 0.1;
const EM_TERMS: usize = 30;

fn check_params(lambda: f64, b: f64) -> Result<()> {
    if !(0.0..1.0).contains(&lambda) {
        return Err(Error::domain(format!("lambda = {lambda} outside [0, 1)")));
    }
    if !(b > 0.0) || !b.is_finite() {
        return Err(Error::domain(format!("b = {b} must be positive")));
    }
    Ok(())
}

/// `B_{2m} / (2m)` for `m = 1..=EM_TERMS`, from `zeta(2m)`.
fn bernoulli_over_index() -> &'static [f64] {
    static B: OnceLock<Vec<f64>> = OnceLock::new();
    B.get_or_init(|| {
        (1..=EM_TERMS)
            .map(|m| {
                let p = 2 * m as i32;
                let zeta: f64 = if m == 1 {
                    PI * PI / 6.0
                } else {
                    (1..2000).rev().map(|n| (n as f64).powi(-p)).sum()
                };
                let fact: f64 = (1..p).map(|k| k as f64).product();
                let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
                sign * 2.0 * zeta * fact / (2.0 * PI).powi(p)
            })
            .collect()
    })
}

/// Tail `sum_{m >= 0} e^{i alpha m} h(K + m)`, `h(x) = ((x + c)^2 + b^2)^{-s}`,
/// by Euler-Maclaurin applied to the phased summand.
fn phased_tail(alpha: f64, s: Complex64, c: f64, b: f64, k: f64) -> Result<Complex64> {
    let x = k + c;
    let n = 2 * EM_TERMS;
    // Taylor coefficients of h(K + t) = w(t)^{-s}, w = w0 + w1 t + t^2
    let (w0, w1) = (x * x + b * b, 2.0 * x);
    let beta = -s;
    let mut g = vec![Complex64::new(0.0, 0.0); n + 1];
    g[0] = (beta * w0.ln()).exp();
    for m in 1..=n {
        let mf = m as f64;
        let mut acc = (beta - (mf - 1.0)) * w1 * g[m - 1];
        if m >= 2 {
            acc += (beta * 2.0 - (mf - 2.0)) * g[m - 2];
        }
        g[m] = acc / (w0 * mf);
    }
    // Taylor coefficients of e^{i alpha t} h(K + t)
    let ia = Complex64::new(0.0, alpha);
    let mut pw = vec![Complex64::new(1.0, 0.0); n + 1];
    for m in 1..=n {
        pw[m] = pw[m - 1] * ia / m as f64;
    }
    let taylor = |q: usize| (0..=q).map(|i| pw[q - i] * g[i]).sum::<Complex64>();

    let mut sum = phased_integral(alpha, s, x, b)? + g[0] * 0.5;
    for (m, bm) in bernoulli_over_index().iter().enumerate() {
        let t = taylor(2 * m + 1) * *bm;
        sum -= t;
        if t.norm() < 1e-18 * sum.norm() {
            break;
        }
    }
    Ok(sum)
}

/// `int_0^inf e^{i alpha t} ((X + t)^2 + b^2)^{-s} dt`.
fn phased_integral(alpha: f64, s: Complex64, x: f64, b: f64) -> Result<Complex64> {
    if alpha == 0.0 {
        // binomial expansion in (b / X)^2
        let mut sum = Complex64::new(0.0, 0.0);
        let mut coef = Complex64::new(1.0, 0.0);
        let r = b * b;
        for j in 0..400 {
            let jf = j as f64;
            let p = s * 2.0 + 2.0 * jf;
            let t = coef * ((Complex64::new(1.0, 0.0) - p) * x.ln()).exp() / (p - 1.0);
            sum += t;
            if t.norm() < 1e-18 * sum.norm() {
                return Ok(sum);
            }
            coef *= (-s - jf) / (jf + 1.0) * r;
        }
        return Err(Error::NonConvergence {
            what: "lattice tail integral",
            terms: 400,
        });
    }
    // rotate onto x = X + i sgn(alpha) t where the phase decays
    let sg = alpha.signum();
    let a = alpha.abs();
    let f = |t: f64| {
        let z = Complex64::new(x, sg * t);
        Complex64::new(0.0, sg) * (-a * t - s * (z * z + b * b).ln()).exp()
    };
    let breaks: Vec<f64> = [0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 50.0]
        .iter()
        .map(|v| v / a)
        .collect();
    integrate_panels(f, &breaks, &QuadConfig::default())
}

fn phase(lambda: f64, k: i64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * (k as f64 * lambda).rem_euclid(1.0))
}

/// `S_xi` by explicit summation of the central terms plus Euler-Maclaurin
/// tails. Requires `Re s > 1/2 + DIRECT_MARGIN`.
pub fn s_xi_direct(lambda: f64, s: Complex64, a: f64, b: f64) -> Result<Complex64> {
    check_params(lambda, b)?;
    if s.re <= 0.5 + DIRECT_MARGIN {
        return Err(Error::domain(format!(
            "direct lattice sum needs Re s > {}",
            0.5 + DIRECT_MARGIN
        )));
    }
    let k = (2.0 * (a.abs() + b)).ceil() as i64 + 24;
    let h = |u: f64| (-s * (u * u + b * b).ln()).exp();
    let mut sum = Complex64::new(0.0, 0.0);
    for j in (1 - k)..k {
        sum += phase(lambda, j) * h(j as f64 + a);
    }
    let lp = if lambda <= 0.5 { lambda } else { lambda - 1.0 };
    let alpha = 2.0 * PI * lp;
    let kf = k as f64;
    sum += phase(lambda, k) * phased_tail(alpha, s, a, b, kf)?;
    sum += phase(lambda, -k) * phased_tail(-alpha, s, -a, b, kf)?;
    Ok(sum)
}

/// `S_xi` through
/// `sqrt(pi) b^{1-2s} / Gamma(s) [Gamma(s - 1/2) [lambda = 0] + int_0^inf e^{-u} u^{s - 3/2} f(u) du]`
/// with `f(u) = sum_{k + lambda != 0} exp(-pi^2 b^2 (k + lambda)^2 / u - 2 pi i a (k + lambda))`.
/// Valid for every `s`; poles at `s = 1/2 - n` when `lambda = 0`.
pub fn s_xi_continued(lambda: f64, s: Complex64, a: f64, b: f64, cfg: &QuadConfig) -> Result<Complex64> {
    check_params(lambda, b)?;
    let head = if lambda == 0.0 {
        let arg = s - 0.5;
        if is_nonpositive_integer(arg) {
            return Err(Error::Pole {
                what: "lattice sum",
                at: s,
            });
        }
        log_gamma(arg)?.exp()
    } else {
        Complex64::new(0.0, 0.0)
    };
    let pb2 = (PI * b).powi(2);
    let f = |u: f64| {
        let reach = (48.0 * u).sqrt() / (PI * b) + 1.0;
        let lo = (-reach - lambda).floor() as i64;
        let hi = (reach - lambda).ceil() as i64;
        let mut acc = Complex64::new(0.0, 0.0);
        for k in lo..=hi {
            let m = k as f64 + lambda;
            if m == 0.0 {
                continue;
            }
            acc += Complex64::from_polar((-pb2 * m * m / u).exp(), -2.0 * PI * a * m);
        }
        acc * (-u + (s - 1.5) * u.ln()).exp()
    };
    let mut upper: f64 = 30.0;
    while -upper + (s.re - 1.5) * upper.ln() + (1.0 + upper.sqrt() / (PI.sqrt() * b)).ln() > -42.0 {
        upper += 5.0;
    }
    let m_min = if lambda == 0.0 { 1.0 } else { lambda.min(1.0 - lambda) };
    let mut lower = pb2 * m_min * m_min / 90.0;
    let mut breaks = vec![upper];
    while lower < upper {
        breaks.push(lower.max(0.0));
        lower *= 2.0;
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let integral = integrate_panels(f, &breaks, cfg)?;
    let pre = ((Complex64::new(1.0, 0.0) - s * 2.0) * b.ln()).exp() * PI.sqrt() * rgamma(s);
    Ok(pre * (head + integral))
}
