use super::gamma::{is_nonpositive_integer, rgamma};
use crate::error::{Error, Result};
use num_complex::Complex64;

/// Series are refused once `|z| >= 1 / (1 + HYP_GUARD)`.
pub const HYP_GUARD: f64 = 1e-3;
const REL_TOL: f64 = 1e-15;
const MAX_TERMS: usize = 100_000;

fn poch(a: Complex64, n: usize) -> Complex64 {
    (0..n).fold(Complex64::new(1.0, 0.0), |p, k| p * (a + k as f64))
}

/// Partial sums are rescaled by this factor whenever they grow past it, so
/// that series whose terms exceed the double range can still be summed.
const RESCALE: f64 = 1e200;

/// `sum_m (a)_m (b)_m / (d)_m * z^m / Gamma(c + m)` for real `d >= 1`.
///
/// With `d = 1` this is the regularized Gauss series. When `c` is a
/// non-positive integer `-n` the first `n + 1` terms vanish identically and
/// the sum starts at `m = n + 1`.
pub fn tail_series(a: Complex64, b: Complex64, c: Complex64, d: f64, z: Complex64) -> Result<Complex64> {
    let (sum, ln_scale) = scaled_series(a, b, c, d, z)?;
    if ln_scale == 0.0 {
        return Ok(sum);
    }
    let v = sum * ln_scale.exp();
    if !v.re.is_finite() || !v.im.is_finite() {
        return Err(Error::Overflow {
            what: "hypergeometric series",
            arg: ln_scale,
            limit: f64::MAX.ln(),
        });
    }
    Ok(v)
}

/// `(sum, l)` with the series equal to `sum * e^l`.
fn scaled_series(a: Complex64, b: Complex64, c: Complex64, d: f64, z: Complex64) -> Result<(Complex64, f64)> {
    let az = z.norm();
    if !(az < 1.0 / (1.0 + HYP_GUARD)) {
        return Err(Error::NonConvergence {
            what: "hypergeometric series (|z| too close to 1)",
            terms: 0,
        });
    }
    let m0 = if is_nonpositive_integer(c) {
        (-c.re) as usize + 1
    } else {
        0
    };
    let dm0: f64 = (0..m0).map(|k| d + k as f64).product();
    let mut t = poch(a, m0) * poch(b, m0) / dm0 * z.powu(m0 as u32) * rgamma(c + m0 as f64);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut ln_scale = 0.0;
    let mut m = m0;
    for _ in 0..MAX_TERMS {
        sum += t;
        let mf = m as f64;
        let num = (a + mf) * (b + mf);
        if num == Complex64::new(0.0, 0.0) || t == Complex64::new(0.0, 0.0) && m > m0 {
            return Ok((sum, ln_scale));
        }
        let mut next = t * num * z / ((d + mf) * (c + mf));
        // ratio bound on the remaining terms from the next ratio and |z|
        let m1 = mf + 1.0;
        let rho = ((a + m1) * (b + m1) * z / ((d + m1) * (c + m1))).norm();
        let q = rho.max(az);
        if q < 1.0 && m > m0 + 1 {
            let tail = next.norm() / (1.0 - q);
            if tail <= REL_TOL * sum.norm() || t == Complex64::new(0.0, 0.0) {
                return Ok((sum + next, ln_scale));
            }
        }
        if next.norm() > RESCALE {
            next /= RESCALE;
            sum /= RESCALE;
            ln_scale += RESCALE.ln();
        }
        t = next;
        m += 1;
        if !t.re.is_finite() || !t.im.is_finite() {
            return Err(Error::NonConvergence {
                what: "hypergeometric series (overflow)",
                terms: m - m0,
            });
        }
    }
    Err(Error::NonConvergence {
        what: "hypergeometric series",
        terms: MAX_TERMS,
    })
}

/// Logarithm of the regularized Gauss series, or `None` where it vanishes.
/// Works when the value itself is outside the double range.
pub fn ln_reg_hyp2f1(a: Complex64, b: Complex64, c: Complex64, z: Complex64) -> Result<Option<Complex64>> {
    let (sum, ln_scale) = scaled_series(a, b, c, 1.0, z)?;
    Ok((sum != Complex64::new(0.0, 0.0)).then(|| sum.ln() + ln_scale))
}

/// Regularized Gauss hypergeometric function `2F1(a, b; c; z) / Gamma(c)`
/// by its power series, for `|z| < 1 / (1 + HYP_GUARD)`.
pub fn reg_hyp2f1(a: Complex64, b: Complex64, c: Complex64, z: Complex64) -> Result<Complex64> {
    tail_series(a, b, c, 1.0, z)
}
