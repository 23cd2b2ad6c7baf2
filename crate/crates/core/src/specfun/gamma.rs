use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

const LANCZOS_G: f64 = 671.0 / 128.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_C0: f64 = 0.999_999_999_999_997_1;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// True when `z` is exactly one of 0, -1, -2, ...
pub fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

/// `sin(pi z)` with the integer part removed exactly before scaling by pi.
pub fn sin_pi(z: Complex64) -> Complex64 {
    let n = z.re.round();
    let f = Complex64::new(z.re - n, z.im);
    let v = (f * PI).sin();
    if n.rem_euclid(2.0) == 1.0 {
        -v
    } else {
        v
    }
}

fn ln_sin_pi(z: Complex64) -> Complex64 {
    if z.im.abs() < 20.0 {
        return sin_pi(z).ln();
    }
    // sin(pi z) = (e^{i pi z} - e^{-i pi z}) / 2i with one exponential negligible
    let (w, flip) = if z.im > 0.0 { (z, false) } else { (z.conj(), true) };
    let n = w.re.round();
    let f = Complex64::new(w.re - n, w.im);
    let i = Complex64::i();
    let mut v =
        -i * PI * f - std::f64::consts::LN_2 + i * (PI / 2.0) + (-(Complex64::new(0.0, 2.0 * PI) * f).exp()).ln_1p_c();
    if n.rem_euclid(2.0) == 1.0 {
        v += i * PI;
    }
    if flip {
        v.conj()
    } else {
        v
    }
}

trait Ln1p {
    fn ln_1p_c(self) -> Complex64;
}

impl Ln1p for Complex64 {
    fn ln_1p_c(self) -> Complex64 {
        if self.norm() < 1e-8 {
            self - self * self / 2.0
        } else {
            (Complex64::new(1.0, 0.0) + self).ln()
        }
    }
}

fn lanczos_ln_gamma(z: Complex64) -> Complex64 {
    let mut ser = Complex64::new(LANCZOS_C0, 0.0);
    let mut y = z;
    for c in LANCZOS {
        y += 1.0;
        ser += c / y;
    }
    let t = z + LANCZOS_G;
    (z + 0.5) * t.ln() - t + LN_SQRT_2PI + ser.ln() - z.ln()
}

/// Logarithm of the gamma function.
///
/// For `Re z >= 1/2` this is the branch continuous from the positive real
/// axis. Left of that line the reflection formula is used and the imaginary
/// part is only fixed modulo `2 pi`.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(z) {
        return Err(Error::Pole { what: "gamma", at: z });
    }
    if z.re >= 0.5 {
        Ok(lanczos_ln_gamma(z))
    } else {
        let one = Complex64::new(1.0, 0.0);
        Ok(PI.ln() - ln_sin_pi(z) - lanczos_ln_gamma(one - z))
    }
}

pub fn gamma(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && z.re > 0.0 && z.re.fract() == 0.0 && z.re <= 20.0 {
        let mut f = 1.0;
        for k in 2..(z.re as u32) {
            f *= k as f64;
        }
        return Ok(Complex64::new(f, 0.0));
    }
    Ok(log_gamma(z)?.exp())
}

/// `1 / Gamma(z)`, entire, exactly zero at the poles of gamma.
pub fn rgamma(z: Complex64) -> Complex64 {
    if is_nonpositive_integer(z) {
        return Complex64::new(0.0, 0.0);
    }
    if z.re >= 0.5 {
        (-lanczos_ln_gamma(z)).exp()
    } else {
        // 1/Gamma(z) = sin(pi z) Gamma(1 - z) / pi keeps the zeros accurate
        let one = Complex64::new(1.0, 0.0);
        let w = one - z;
        if z.im.abs() < 20.0 {
            sin_pi(z) * lanczos_ln_gamma(w).exp() / PI
        } else {
            (ln_sin_pi(z) + lanczos_ln_gamma(w) - PI.ln()).exp()
        }
    }
}

/// A product of gamma values carried as a logarithm together with a pole
/// order, so that ratios with coinciding poles can be evaluated as limits.
///
/// Each factor `Gamma(a(s))^{+-1}` contributes `log|residue-free part|` and
/// `+-1` to the order when `a(s)` sits exactly on a pole. Near a pole
/// `Gamma(a) ~ (-1)^n / (n! (a + n))`, and `a + n = a'(s) (s - s0)`, so the
/// `(s - s0)` factors cancel between numerator and denominator when the orders
/// agree, leaving the ratio of the regular parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaRatio {
    pub log: Complex64,
    pub order: i32,
}

impl Default for GammaRatio {
    fn default() -> Self {
        GammaRatio {
            log: Complex64::new(0.0, 0.0),
            order: 0,
        }
    }
}

impl GammaRatio {
    /// Multiplies by `Gamma(arg)^power`; `slope` is `d arg / d s`.
    pub fn push(&mut self, arg: Complex64, slope: f64, power: i32) {
        if is_nonpositive_integer(arg) {
            let n = -arg.re;
            let mut log_fact = 0.0;
            let mut k = 2.0;
            while k <= n {
                log_fact += f64::ln(k);
                k += 1.0;
            }
            let sign = if n.rem_euclid(2.0) == 1.0 {
                Complex64::new(0.0, PI)
            } else {
                Complex64::new(0.0, 0.0)
            };
            // residue (-1)^n / n! divided by the slope of the argument
            let reg = sign - log_fact - Complex64::new(slope, 0.0).ln();
            self.log += reg * power as f64;
            self.order += power;
        } else {
            let lg = log_gamma(arg).expect("argument is not a pole");
            self.log += lg * power as f64;
        }
    }

    pub fn value(&self) -> Option<Complex64> {
        match self.order {
            0 => Some(self.log.exp()),
            o if o < 0 => Some(Complex64::new(0.0, 0.0)),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn half_integer_value() {
        let v = log_gamma(c(0.5, 0.0)).unwrap();
        assert!((v.re - 0.5 * PI.ln()).abs() < 1e-15);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn factorials() {
        for n in 1..15u32 {
            let f: f64 = (1..n).map(|k| k as f64).product();
            let v = log_gamma(c(n as f64, 0.0)).unwrap().re.exp();
            assert!((v - f).abs() <= 1e-13 * f, "n={n}");
        }
    }

    #[test]
    fn poles() {
        assert!(log_gamma(c(-3.0, 0.0)).is_err());
        assert_eq!(rgamma(c(-3.0, 0.0)), c(0.0, 0.0));
        assert_eq!(rgamma(c(0.0, 0.0)), c(0.0, 0.0));
    }

    #[test]
    fn rgamma_near_pole_is_linear() {
        // 1/Gamma(-2 + e) ~ (-1)^2 2! e
        let e = 1e-9;
        let v = rgamma(c(-2.0 + e, 0.0));
        assert!((v.re / (2.0 * e) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn large_imaginary_reflection() {
        let z = c(-0.3, 80.0);
        let lhs = log_gamma(z).unwrap() + log_gamma(c(1.0, 0.0) - z).unwrap();
        let rhs = PI.ln() - ln_sin_pi(z);
        let d = lhs - rhs;
        assert!(d.re.abs() < 1e-10);
        assert!((d.im / (2.0 * PI)).fract().abs() < 1e-10 || (d.im / (2.0 * PI)).fract().abs() > 1.0 - 1e-10);
    }

    #[test]
    fn gamma_ratio_limit() {
        // Gamma(a s) / Gamma(b s) at s = 0 tends to b / a
        let mut g = GammaRatio::default();
        g.push(c(0.0, 0.0), 2.0, 1);
        g.push(c(0.0, 0.0), 3.0, -1);
        let v = g.value().unwrap();
        assert!((v - c(1.5, 0.0)).norm() < 1e-15);
    }
}
