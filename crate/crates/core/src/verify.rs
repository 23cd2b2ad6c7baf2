//! A compact cross-oracle suite: each check compares two independent
//! evaluations of the same quantity on a fixed grid and reports whether they
//! agree within a pinned tolerance.

use crate::error::Result;
use crate::free_resolvent::g_s;
use crate::geometry::{cyl_to_plane, hyperbolic_distance, sigma, CylCoord, HPoint};
use crate::model_kernels::{
    cusp_images, cusp_kernel, cusp_mode, cyl_images_sum, cyl_kernel_fourier, cyl_kernel_images, cyl_mode,
    funnel_kernel, funnel_kernel_fourier, funnel_mode, s_xi_continued, s_xi_direct, ImagesConfig,
};
use crate::resonances::{cusp_resonances, cylinder_resonances, funnel_resonances};
use crate::scattering::{scattering_coeff, FunctionalEquation};
use crate::specfun::quad::QuadConfig;
use crate::specfun::{gamma, log_gamma};
use crate::twist::{TwistAngle, TwistSpec};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn example_twist() -> TwistSpec {
    TwistSpec::unitary(&[(0.25, 1), (0.5, 1)]).expect("valid angles")
}

fn max_of(check: &'static str, worst: f64, tol: f64) -> CheckOutcome {
    CheckOutcome {
        name: check,
        passed: worst <= tol,
        detail: format!("max deviation {worst:.2e} (tolerance {tol:.0e})"),
    }
}

fn gamma_reflection() -> Result<CheckOutcome> {
    let mut worst = 0.0f64;
    for re in [-2.7, -0.3, 0.2, 0.45, 1.3] {
        for im in [-3.0, -0.4, 0.7, 5.0] {
            let z = c(re, im);
            let lhs = gamma(z)? * gamma(c(1.0, 0.0) - z)?;
            let rhs = PI / (z * PI).sin();
            worst = worst.max((lhs - rhs).norm() / rhs.norm());
            let lhs = log_gamma(z + 1.0)? - log_gamma(z)?;
            let d = lhs - z.ln();
            let wrapped = c(d.re, d.im - (d.im / (2.0 * PI)).round() * 2.0 * PI);
            worst = worst.max(wrapped.norm() / z.ln().norm().max(1.0));
        }
    }
    Ok(max_of("gamma reflection and recurrence", worst, 1e-12))
}

fn example_lattice() -> Result<CheckOutcome> {
    let ell = 1.0;
    let set = cylinder_resonances(ell, &example_twist(), 6.0)?;
    let mut ok = true;
    let mut total = 0u64;
    for r in &set.resonances {
        let q = (r.im * 2.0 * ell / PI).round() as i64;
        let on = r.re.fract() == 0.0 && r.re <= 0.0 && (r.im - PI * q as f64 / (2.0 * ell)).abs() < 1e-12;
        let want = if q.rem_euclid(4) == 0 {
            0
        } else if q.rem_euclid(2) == 1 {
            1
        } else {
            2
        };
        ok &= on && r.mult == want;
        total += r.mult as u64;
    }
    let mut expected = 0u64;
    for n in 0..=6i64 {
        for q in -8i64..=8 {
            let im = PI * q as f64 / (2.0 * ell);
            if q.rem_euclid(4) != 0 && ((n * n) as f64 + im * im) < 36.0 {
                expected += if q.rem_euclid(2) == 1 { 1 } else { 2 };
            }
        }
    }
    Ok(CheckOutcome {
        name: "diag(i,-1) cylinder lattice",
        passed: ok && total == expected,
        detail: format!("total multiplicity {total}, expected {expected}"),
    })
}

fn untwisted_count() -> Result<CheckOutcome> {
    let set = cylinder_resonances(2.0 * PI, &TwistSpec::trivial(1), 5.0)?;
    let n = set.count(5.0)?;
    Ok(CheckOutcome {
        name: "untwisted cylinder N(5)",
        passed: n == 78,
        detail: format!("N(5) = {n}"),
    })
}

fn cusp_point() -> Result<CheckOutcome> {
    let twist = TwistSpec::unitary(&[(0.0, 3), (0.3, 1)])?;
    let set = cusp_resonances(&twist)?;
    let got: Vec<_> = set.resonances.iter().map(|r| (r.re, r.im, r.mult)).collect();
    Ok(CheckOutcome {
        name: "cusp resonance multiplicity",
        passed: got == vec![(0.5, 0.0, 3)],
        detail: format!("{got:?}"),
    })
}

fn kernel_agreement() -> Result<CheckOutcome> {
    let s = c(2.0, 0.3);
    let twist = example_twist();
    let cfg = ImagesConfig::default();
    let mut worst = 0.0f64;
    let pairs = [(0.3, 1.0, 1.4, 4.0), (-1.2, 0.2, 0.5, 5.9), (0.8, 3.0, 2.0, 0.1)];
    for &(r1, p1, r2, p2) in &pairs {
        let (c1, c2) = (CylCoord::new(r1, p1), CylCoord::new(r2, p2));
        let a = cyl_kernel_images(s, 1.0, &twist, &cyl_to_plane(&c1, 1.0), &cyl_to_plane(&c2, 1.0), &cfg)?;
        let b = cyl_kernel_fourier(s, 1.0, &twist, &c1, &c2, 2000)?;
        worst = worst.max(a.max_rel_diff(&b));
        let (f1, f2) = (CylCoord::new(r1.abs(), p1), CylCoord::new(r2.abs(), p2));
        let a = funnel_kernel(s, 1.0, &twist, &f1, &f2, &cfg)?;
        let b = funnel_kernel_fourier(s, 1.0, &twist, &f1, &f2, 2000)?;
        worst = worst.max(a.max_rel_diff(&b));
    }
    let cusp_twist = TwistSpec::unitary(&[(0.0, 1), (0.25, 1), (0.5, 1)])?;
    let cusp_cfg = ImagesConfig {
        tail_tol: 1e-10,
        ..Default::default()
    };
    for &(x1, y1, x2, y2) in &[(0.1, 0.7, 0.65, 1.9), (0.9, 2.2, 0.3, 1.0)] {
        let a = cusp_images(s, &cusp_twist, &HPoint::new(x1, y1)?, &HPoint::new(x2, y2)?, &cusp_cfg)?;
        let (c1, c2) = (
            CylCoord::new(f64::ln(y1), 2.0 * PI * x1),
            CylCoord::new(f64::ln(y2), 2.0 * PI * x2),
        );
        let b = cusp_kernel(s, &cusp_twist, &c1, &c2, 2000)?;
        worst = worst.max(a.max_rel_diff(&b));
    }
    Ok(max_of("images vs Fourier kernels", worst, 1e-6))
}

fn radial_residual<F: Fn(f64) -> Result<Complex64>>(f: F, s: Complex64, wk: f64, r: f64) -> Result<f64> {
    let h = 1e-3;
    let (fm, f0, fp) = (f(r - h)?, f(r)?, f(r + h)?);
    let t = [
        (fp - f0 * 2.0 + fm) / (h * h),
        (fp - fm) / (2.0 * h) * r.tanh(),
        -f0 * (wk / r.cosh()).powi(2),
        f0 * s * (c(1.0, 0.0) - s),
    ];
    Ok(t.iter().sum::<Complex64>().norm() / t.iter().map(|v| v.norm()).sum::<f64>())
}

fn mode_odes() -> Result<CheckOutcome> {
    let mut worst = 0.0f64;
    for (s, kappa, ell) in [
        (c(0.7, 0.4), 0.25, 1.0),
        (c(2.1, -1.0), -1.5, 2.3),
        (c(1.3, 0.0), 1.0, 0.8),
    ] {
        let wk = 2.0 * PI / ell * kappa;
        for (r, r2) in [(0.3, 1.2), (1.5, 0.4), (-0.9, 0.6)] {
            worst = worst.max(radial_residual(|x| cyl_mode(s, kappa, x, r2, ell), s, wk, r)?);
            let (fr, fr2) = (f64::abs(r), f64::abs(r2));
            worst = worst.max(radial_residual(|x| funnel_mode(s, kappa, x, fr2, ell), s, wk, fr)?);
        }
    }
    Ok(max_of("mode ODE residuals", worst, 1e-4))
}

fn lattice_sum_dual() -> Result<CheckOutcome> {
    let quad = QuadConfig::default();
    let mut worst = 0.0f64;
    for s in [c(0.75, 0.0), c(2.0, 2.0)] {
        for (lambda, a, b) in [(0.0, 0.3, 1.0), (0.25, -0.45, 0.5), (0.5, 0.0, 1.7)] {
            let d = s_xi_direct(lambda, s, a, b)?;
            let k = s_xi_continued(lambda, s, a, b, &quad)?;
            worst = worst.max((d - k).norm() / d.norm());
        }
    }
    Ok(max_of("lattice sum direct vs continued", worst, 1e-8))
}

fn scattering() -> Result<CheckOutcome> {
    let mut worst = 0.0f64;
    for s in [c(0.3, 1.1), c(-1.7, -0.6), c(2.4, 2.9)] {
        for kappa in [-2.5, 0.0, 0.75] {
            for ell in [0.6, 1.0, 2.7] {
                let a = scattering_coeff(s, kappa, ell)? * scattering_coeff(c(1.0, 0.0) - s, kappa, ell)?;
                worst = worst.max((a - 1.0).norm());
            }
        }
    }
    let fe = FunctionalEquation::calibrate(1.0)?;
    for s in [c(0.3, 0.4), c(1.4, 0.9), c(-0.6, 0.5)] {
        for (r, r2) in [(0.2, 0.9), (1.0, 0.4)] {
            worst = worst.max(fe.residual(s, 0.75, r, r2)?);
        }
    }
    Ok(max_of("scattering inversion and functional equation", worst, 1e-6))
}

fn kernel_pde() -> Result<CheckOutcome> {
    let mut worst = 0.0f64;
    let pts = [
        ((0.1, 0.9), (-0.6, 1.8)),
        ((0.5, 1.5), (0.4, 0.5)),
        ((-0.8, 1.1), (0.7, 1.3)),
    ];
    for (s, &((zx, zy), (wx, wy))) in [c(0.8, 0.5), c(2.2, -0.3), c(1.5, 0.0)].into_iter().zip(&pts) {
        let w = HPoint::new(wx, wy)?;
        debug_assert!(hyperbolic_distance(&HPoint::new(zx, zy)?, &w) > 0.5);
        let g = |x: f64, y: f64| g_s(s, sigma(&HPoint { x, y }, &w));
        let h = 1e-3;
        let g0 = g(zx, zy)?;
        let gxx = (g(zx + h, zy)? - g0 * 2.0 + g(zx - h, zy)?) / (h * h);
        let gyy = (g(zx, zy + h)? - g0 * 2.0 + g(zx, zy - h)?) / (h * h);
        let t = [-gxx * zy * zy, -gyy * zy * zy, -g0 * s * (c(1.0, 0.0) - s)];
        worst = worst.max(t.iter().sum::<Complex64>().norm() / t.iter().map(|v| v.norm()).sum::<f64>());
    }
    Ok(max_of("free kernel Laplacian residual", worst, 1e-4))
}

fn symmetries() -> Result<CheckOutcome> {
    let (s, ell) = (c(2.0, 0.3), 1.0);
    let cfg = ImagesConfig::default();
    let unitary = example_twist();
    let mut twist = unitary.clone();
    twist.angles.push(TwistAngle {
        theta: 0.1,
        mult: 1,
        log_abs: 0.3,
    });
    let z = cyl_to_plane(&CylCoord::new(0.4, 1.3), ell);
    let w = cyl_to_plane(&CylCoord::new(-1.1, 4.2), ell);
    let base = cyl_images_sum(s, ell, &twist, &z, &w, &cfg)?;
    let moved = cyl_images_sum(s, ell, &twist, &z.scale(ell.exp()), &w, &cfg)?;
    let mut worst = 0.0f64;
    for j in 0..twist.angles.len() {
        let v = base.values[j];
        worst = worst.max((moved.values[j] - twist.eigenvalue(j) * v).norm() / v.norm());
    }
    let u = cyl_images_sum(s, ell, &unitary, &z, &w, &cfg)?;
    let v = cyl_images_sum(s.conj(), ell, &unitary, &w, &z, &cfg)?;
    for (a, b) in u.values.iter().zip(&v.values) {
        worst = worst.max((a.conj() - b).norm() / a.norm());
    }
    Ok(max_of("kernel equivariance and conjugate symmetry", worst, 1e-8))
}

fn log_slope<F: Fn(Complex64) -> Result<Complex64>>(f: F, s0: Complex64) -> Result<f64> {
    let (e1, e2) = (1e-3, 1e-5);
    let (a, b) = (f(s0 + e1)?.norm(), f(s0 + e2)?.norm());
    Ok((a.ln() - b.ln()) / (f64::ln(e1) - f64::ln(e2)))
}

fn pole_witnesses() -> Result<CheckOutcome> {
    let twist = example_twist();
    let mut worst = 0.0f64;
    let mut n = 0;
    let (r, r2) = (0.35, 1.2);
    for (ell, funnel) in [(1.0, false), (2.0, true)] {
        let w = 2.0 * PI / ell;
        let set = if funnel {
            funnel_resonances(ell, &twist, 3.0)?
        } else {
            cylinder_resonances(ell, &twist, 3.0)?
        };
        for p in set.resonances.iter().take(4) {
            let kappa = p.im / w;
            let k = if funnel {
                log_slope(|s| funnel_mode(s, kappa, r, r2, ell), p.location())?
            } else {
                log_slope(|s| cyl_mode(s, kappa, r, r2, ell), p.location())?
            };
            worst = worst.max((k + 1.0).abs());
            n += 1;
        }
    }
    let k = log_slope(|s| cusp_mode(s, 0.0, 0.7, 1.9), c(0.5, 0.0))?;
    worst = worst.max((k + 1.0).abs());
    n += 1;
    let mut out = max_of("pole witnesses", worst, 0.1);
    out.detail = format!("{n} poles, max |slope + 1| {worst:.2e}");
    Ok(out)
}

/// Runs every check. A check that fails with an error is reported as failed
/// with the error text.
type CheckFn = fn() -> Result<CheckOutcome>;

pub fn run_suite() -> Vec<CheckOutcome> {
    let checks: [(&'static str, CheckFn); 11] = [
        ("gamma reflection and recurrence", gamma_reflection),
        ("diag(i,-1) cylinder lattice", example_lattice),
        ("untwisted cylinder N(5)", untwisted_count),
        ("cusp resonance multiplicity", cusp_point),
        ("images vs Fourier kernels", kernel_agreement),
        ("mode ODE residuals", mode_odes),
        ("lattice sum direct vs continued", lattice_sum_dual),
        ("scattering inversion and functional equation", scattering),
        ("free kernel Laplacian residual", kernel_pde),
        ("kernel equivariance and conjugate symmetry", symmetries),
        ("pole witnesses", pole_witnesses),
    ];
    checks
        .iter()
        .map(|&(name, f)| {
            f().unwrap_or_else(|e| CheckOutcome {
                name,
                passed: false,
                detail: e.to_string(),
            })
        })
        .collect()
}
