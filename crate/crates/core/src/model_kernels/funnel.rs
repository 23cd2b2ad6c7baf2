//! The hyperbolic funnel: the half `r >= 0` of the cylinder with a Dirichlet
//! condition at the closed geodesic `r = 0`.

use super::cylinder::{cyl_kernel_images, ln_v, mode_synthesis, omega};
use super::{require_unitary, DiagonalKernel, ImagesConfig};
use crate::error::{Error, Result};
use crate::geometry::{cyl_to_plane, CylCoord};
use crate::specfun::{is_nonpositive_integer, ln_cosh, ln_reg_hyp2f1, log_gamma};
use crate::twist::TwistSpec;
use num_complex::Complex64;
use std::f64::consts::LN_2;

fn check_radii(r: f64, r2: f64) -> Result<()> {
    if r < 0.0 || r2 < 0.0 {
        return Err(Error::domain(format!(
            "funnel radii must be non-negative, got {r}, {r2}"
        )));
    }
    Ok(())
}

/// Funnel kernel by reflection: `R_C(z, z') - R_C(z, -conj z')`.
pub fn funnel_kernel(
    s: Complex64,
    ell: f64,
    twist: &TwistSpec,
    c1: &CylCoord,
    c2: &CylCoord,
    cfg: &ImagesConfig,
) -> Result<DiagonalKernel> {
    check_radii(c1.r, c2.r)?;
    let z = cyl_to_plane(c1, ell);
    let direct = cyl_kernel_images(s, ell, twist, &z, &cyl_to_plane(c2, ell), cfg)?;
    let mirror = cyl_kernel_images(s, ell, twist, &z, &cyl_to_plane(&c2.mirrored(), ell), cfg)?;
    Ok(DiagonalKernel {
        values: direct.values.iter().zip(&mirror.values).map(|(a, b)| a - b).collect(),
    })
}

/// `log v0(s; r)`, the mode solution vanishing at `r = 0`:
/// `tanh r cosh(r)^{-s} F((s + i w k + 1)/2, (s - i w k + 1)/2; 3/2; tanh^2 r)`.
pub(crate) fn ln_v0(s: Complex64, iwk: Complex64, r: f64) -> Result<Option<Complex64>> {
    if r == 0.0 {
        return Ok(None);
    }
    let t = r.tanh();
    let f = ln_reg_hyp2f1(
        (s + iwk + 1.0) / 2.0,
        (s - iwk + 1.0) / 2.0,
        Complex64::new(1.5, 0.0),
        Complex64::new(t * t, 0.0),
    )?;
    Ok(f.map(|f| f + t.ln() - s * ln_cosh(r)))
}

/// `log beta`, `beta = Gamma((s + i w k + 1)/2) Gamma((s - i w k + 1)/2) / 2`.
pub(crate) fn ln_beta(s: Complex64, iwk: Complex64) -> Result<Complex64> {
    let (ap, am) = ((s + iwk + 1.0) / 2.0, (s - iwk + 1.0) / 2.0);
    if is_nonpositive_integer(ap) || is_nonpositive_integer(am) {
        return Err(Error::Pole {
            what: "funnel mode",
            at: s,
        });
    }
    Ok((log_gamma(ap)? + log_gamma(am)?) - LN_2)
}

/// Radial Dirichlet Green's function `beta v0(r_<) v(r_>)` of the funnel.
pub fn funnel_mode(s: Complex64, kappa: f64, r: f64, r2: f64, ell: f64) -> Result<Complex64> {
    check_radii(r, r2)?;
    let iwk = Complex64::new(0.0, omega(ell) * kappa);
    let lb = ln_beta(s, iwk)?;
    let (lo, hi) = if r <= r2 { (r, r2) } else { (r2, r) };
    match (ln_v0(s, iwk, lo)?, ln_v(s, iwk, hi)?) {
        (Some(a), Some(b)) => Ok((lb + a + b).exp()),
        _ => Ok(Complex64::new(0.0, 0.0)),
    }
}

/// Funnel kernel by its Fourier expansion.
pub fn funnel_kernel_fourier(
    s: Complex64,
    ell: f64,
    twist: &TwistSpec,
    c1: &CylCoord,
    c2: &CylCoord,
    k_max: usize,
) -> Result<DiagonalKernel> {
    require_unitary(twist, "Fourier expansion")?;
    check_radii(c1.r, c2.r)?;
    mode_synthesis(twist, c1, c2, k_max, ell, |kappa| {
        funnel_mode(s, kappa, c1.r, c2.r, ell)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn images_match_fourier() {
        let s = Complex64::new(2.0, 0.3);
        let t = TwistSpec::unitary(&[(0.25, 1)]).unwrap();
        let (c1, c2) = (CylCoord::new(0.3, 1.0), CylCoord::new(1.4, 4.0));
        let a = funnel_kernel(s, 1.0, &t, &c1, &c2, &ImagesConfig::default()).unwrap();
        let b = funnel_kernel_fourier(s, 1.0, &t, &c1, &c2, 500).unwrap();
        assert!(a.max_rel_diff(&b) < 1e-10, "{:?} {:?}", a, b);
    }

    #[test]
    fn dirichlet_at_geodesic() {
        let v = funnel_mode(Complex64::new(1.5, 0.2), 0.5, 0.0, 1.0, 1.0).unwrap();
        assert_eq!(v, Complex64::new(0.0, 0.0));
        assert!(funnel_mode(Complex64::new(1.5, 0.2), 0.5, -0.1, 1.0, 1.0).is_err());
    }
}
