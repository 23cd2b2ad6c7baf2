//! Browser bindings for the demo page. Every export returns a flat `f64`
//! array so the page can plot it without any glue objects.

use num_complex::Complex64;
use resonance_lab::geometry::{cyl_to_plane, CylCoord};
use resonance_lab::model_kernels::{cyl_kernel_fourier, cyl_kernel_images, cyl_mode, funnel_mode, ImagesConfig};
use resonance_lab::resonances::{cylinder_resonances, funnel_resonances};
use resonance_lab::twist::{TwistAngle, TwistSpec};
use resonance_lab::Error;
use wasm_bindgen::prelude::*;

fn twist(thetas: &[f64], mults: &[u32]) -> Result<TwistSpec, String> {
    if thetas.len() != mults.len() || thetas.is_empty() {
        return Err("need one multiplicity per angle".into());
    }
    let angles = thetas
        .iter()
        .zip(mults)
        .map(|(&t, &mult)| TwistAngle {
            theta: t.rem_euclid(1.0),
            mult,
            log_abs: 0.0,
        })
        .collect();
    TwistSpec::new(angles).map_err(|e| e.to_string())
}

/// Resonances of a cylinder (`funnel = false`) or funnel with a unitary
/// twist, as `[re, im, mult, ...]`.
#[wasm_bindgen]
pub fn resonance_lattice(
    funnel: bool,
    ell: f64,
    thetas: &[f64],
    mults: &[u32],
    radius: f64,
) -> Result<Vec<f64>, String> {
    let t = twist(thetas, mults)?;
    let set = if funnel {
        funnel_resonances(ell, &t, radius)
    } else {
        cylinder_resonances(ell, &t, radius)
    }
    .map_err(|e| e.to_string())?;
    Ok(set
        .resonances
        .iter()
        .flat_map(|r| [r.re, r.im, r.mult as f64])
        .collect())
}

/// The radial mode with frequency `kappa` against its second argument
/// `r2`, sampled at `n` points, as `[r, re, im, ...]`.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn mode_profile(
    funnel: bool,
    ell: f64,
    s_re: f64,
    s_im: f64,
    kappa: f64,
    r2: f64,
    r_max: f64,
    n: usize,
) -> Result<Vec<f64>, String> {
    let s = Complex64::new(s_re, s_im);
    let r_min = if funnel { 0.0 } else { -r_max };
    let mut out = Vec::with_capacity(3 * n);
    for i in 0..n {
        let r = r_min + (r_max - r_min) * i as f64 / (n.max(2) - 1) as f64;
        let v = if funnel {
            funnel_mode(s, kappa, r, r2, ell)
        } else {
            cyl_mode(s, kappa, r, r2, ell)
        }
        .map_err(|e| e.to_string())?;
        out.extend([r, v.re, v.im]);
    }
    Ok(out)
}

/// The cylinder kernel for one angle class along `r` at fixed angle, from
/// the image sum and from the Fourier expansion, as
/// `[r, |images|, |fourier|, ...]`. Points too close to the source, or at
/// the source radius where the Fourier side does not converge, are skipped.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn kernel_slice(
    ell: f64,
    theta: f64,
    s_re: f64,
    s_im: f64,
    r2: f64,
    phi: f64,
    r_max: f64,
    n: usize,
) -> Result<Vec<f64>, String> {
    let s = Complex64::new(s_re, s_im);
    let t = twist(&[theta], &[1])?;
    let src = CylCoord::new(r2, 0.0);
    let cfg = ImagesConfig::default();
    let mut out = Vec::with_capacity(3 * n);
    for i in 0..n {
        let r = -r_max + 2.0 * r_max * i as f64 / (n.max(2) - 1) as f64;
        let c = CylCoord::new(r, phi);
        let Ok(a) = cyl_kernel_images(s, ell, &t, &cyl_to_plane(&c, ell), &cyl_to_plane(&src, ell), &cfg) else {
            continue;
        };
        let b = match cyl_kernel_fourier(s, ell, &t, &c, &src, 20_000) {
            Ok(b) => b,
            Err(Error::Truncation { .. }) => continue,
            Err(e) => return Err(e.to_string()),
        };
        out.extend([r, a.values[0].norm(), b.values[0].norm()]);
    }
    Ok(out)
}
