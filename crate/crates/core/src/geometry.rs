//! Upper half-plane points, Mobius maps, the point-pair invariant and the
//! coordinate charts of the hyperbolic cylinder and the parabolic cusp.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// A point `x + iy` of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HPoint {
    pub x: f64,
    pub y: f64,
}

impl HPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(Error::domain(format!(
                "point {x} + {y}i is not in the upper half-plane"
            )));
        }
        Ok(HPoint { x, y })
    }

    /// Polar radius `|z|`.
    pub fn abs(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn scale(&self, t: f64) -> HPoint {
        HPoint {
            x: self.x * t,
            y: self.y * t,
        }
    }

    pub fn shift(&self, t: f64) -> HPoint {
        HPoint {
            x: self.x + t,
            y: self.y,
        }
    }

    /// The reflection `z -> -conj(z)`.
    pub fn reflect(&self) -> HPoint {
        HPoint { x: -self.x, y: self.y }
    }
}

/// A real Mobius transformation `z -> (az + b)/(cz + d)` with `ad - bc = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mobius {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl Mobius {
    /// Builds the map, rescaling to unit determinant. Fails unless `ad - bc > 0`.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !(det > 0.0) {
            return Err(Error::domain(format!("Mobius determinant {det} is not positive")));
        }
        let k = det.sqrt().recip();
        Ok(Mobius {
            a: a * k,
            b: b * k,
            c: c * k,
            d: d * k,
        })
    }

    /// Dilation `z -> e^t z`.
    pub fn dilation(t: f64) -> Self {
        let h = (t / 2.0).exp();
        Mobius {
            a: h,
            b: 0.0,
            c: 0.0,
            d: 1.0 / h,
        }
    }

    pub fn translation(t: f64) -> Self {
        Mobius {
            a: 1.0,
            b: t,
            c: 0.0,
            d: 1.0,
        }
    }

    pub fn apply(&self, z: &HPoint) -> HPoint {
        // (az+b)/(cz+d) = ((az+b)(c zbar + d)) / |cz+d|^2
        let (x, y) = (z.x, z.y);
        let den = (self.c * x + self.d).powi(2) + (self.c * y).powi(2);
        let re = (self.a * x + self.b) * (self.c * x + self.d) + self.a * self.c * y * y;
        HPoint {
            x: re / den,
            y: y / den,
        }
    }
}

/// Point-pair invariant `sigma(z, w) = ((x - x')^2 + (y + y')^2) / (4 y y')`,
/// equal to `cosh^2(d(z, w) / 2)`.
pub fn sigma(z: &HPoint, w: &HPoint) -> f64 {
    ((z.x - w.x).powi(2) + (z.y + w.y).powi(2)) / (4.0 * z.y * w.y)
}

pub fn hyperbolic_distance(z: &HPoint, w: &HPoint) -> f64 {
    2.0 * sigma(z, w).sqrt().max(1.0).acosh()
}

/// Coordinates `(r, phi)` on a model end. The angle is kept in `[0, 2 pi)`
/// and the number of full turns removed from it is kept in `winding`, so that
/// twist phases can be applied exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylCoord {
    pub r: f64,
    pub phi: f64,
    pub winding: i64,
}

impl CylCoord {
    pub fn new(r: f64, phi: f64) -> Self {
        let turns = (phi / (2.0 * PI)).floor();
        let mut p = phi - turns * 2.0 * PI;
        let mut w = turns as i64;
        if p >= 2.0 * PI {
            p -= 2.0 * PI;
            w += 1;
        }
        if p < 0.0 {
            p = 0.0;
        }
        CylCoord { r, phi: p, winding: w }
    }

    /// The unreduced angle `phi + 2 pi winding`.
    pub fn angle(&self) -> f64 {
        self.phi + 2.0 * PI * self.winding as f64
    }

    /// Same point of the end with `r` negated.
    pub fn mirrored(&self) -> CylCoord {
        CylCoord { r: -self.r, ..*self }
    }
}

/// The hyperbolic cylinder chart `z = e^{phi/omega} (e^r + i)/(e^r - i)`,
/// `omega = 2 pi / ell`. The full angle including windings is used.
pub fn cyl_to_plane(c: &CylCoord, ell: f64) -> HPoint {
    let omega = 2.0 * PI / ell;
    let rad = (c.angle() / omega).exp();
    // (e^r + i)/(e^r - i) = tanh r + i / cosh r
    HPoint {
        x: c.r.tanh() * rad,
        y: rad / c.r.cosh(),
    }
}

/// Inverse of [`cyl_to_plane`]; the winding counts the fundamental annuli
/// `e^{k ell} <= |z| < e^{(k+1) ell}`.
pub fn plane_to_cyl(z: &HPoint, ell: f64) -> CylCoord {
    let omega = 2.0 * PI / ell;
    let arg = z.y.atan2(z.x);
    let r = -(arg / 2.0).tan().ln();
    CylCoord::new(r, omega * z.abs().ln())
}

/// Splits a point as `z = e^{j ell} z0` with `1 <= |z0| < e^ell`.
pub fn reduce_cylinder(z: &HPoint, ell: f64) -> (HPoint, i64) {
    let mut j = (z.abs().ln() / ell).floor() as i64;
    let mut z0 = z.scale((-(j as f64) * ell).exp());
    if z0.abs() >= ell.exp() {
        z0 = z0.scale((-ell).exp());
        j += 1;
    } else if z0.abs() < 1.0 {
        z0 = z0.scale(ell.exp());
        j -= 1;
    }
    (z0, j)
}

/// Splits a point as `z = z0 + n` with `0 <= Re z0 < 1`.
pub fn reduce_cusp(z: &HPoint) -> (HPoint, i64) {
    let n = z.x.floor();
    (HPoint { x: z.x - n, y: z.y }, n as i64)
}

/// The cusp chart `z = phi / 2 pi + i e^r`.
pub fn cusp_to_plane(c: &CylCoord) -> HPoint {
    HPoint {
        x: c.angle() / (2.0 * PI),
        y: c.r.exp(),
    }
}

/// Radial profile `cosh r` of the funnel metric `dr^2 + rho^2 dphi^2 / omega^2`.
pub fn rho_funnel(r: f64) -> f64 {
    r.cosh()
}

/// Radial profile `e^r` of the cusp metric.
pub fn rho_cusp(r: f64) -> f64 {
    r.exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_on_diagonal_is_one() {
        let z = HPoint::new(0.3, 1.7).unwrap();
        assert!((sigma(&z, &z) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn chart_round_trip() {
        let ell = 1.3;
        for &(r, phi) in &[(0.0, 0.0), (-2.5, 1.0), (1.7, 6.0), (0.4, 9.5), (0.1, -3.0)] {
            let c = CylCoord::new(r, phi);
            let back = plane_to_cyl(&cyl_to_plane(&c, ell), ell);
            assert!((back.r - r).abs() < 1e-12, "{r} {phi}");
            assert!((back.angle() - phi).abs() < 1e-12, "{r} {phi}");
            assert_eq!(back.winding, c.winding);
        }
    }

    #[test]
    fn mirror_is_reflection() {
        let c = CylCoord::new(0.8, 2.2);
        let a = cyl_to_plane(&c.mirrored(), 2.0);
        let b = cyl_to_plane(&c, 2.0).reflect();
        assert!((a.x - b.x).abs() < 1e-14 && (a.y - b.y).abs() < 1e-14);
    }

    #[test]
    fn winding_bookkeeping() {
        let c = CylCoord::new(0.0, 2.0 * PI + 0.5);
        assert_eq!(c.winding, 1);
        assert!((c.phi - 0.5).abs() < 1e-15);
        assert_eq!(CylCoord::new(0.0, -0.1).winding, -1);
    }

    #[test]
    fn mobius_preserves_sigma() {
        let m = Mobius::new(2.0, 1.0, 0.5, 1.5).unwrap();
        let z = HPoint::new(0.2, 0.9).unwrap();
        let w = HPoint::new(-1.1, 2.3).unwrap();
        let a = sigma(&z, &w);
        let b = sigma(&m.apply(&z), &m.apply(&w));
        assert!((a - b).abs() < 1e-13 * a);
        assert!(Mobius::new(1.0, 2.0, 3.0, 4.0).is_err());
    }
}
