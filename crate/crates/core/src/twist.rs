//! Twists of the fundamental group action, stored in eigenbasis form as a
//! list of angle classes `lambda_j = exp(rho_j + 2 pi i theta_j)` with
//! multiplicities.

use crate::error::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Angles closer than this (on the circle) are merged into one class.
pub const ANGLE_CLUSTER_TOL: f64 = 1e-9;

fn is_zero(v: &f64) -> bool {
    *v == 0.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwistAngle {
    pub theta: f64,
    pub mult: u32,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub log_abs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwistSpec {
    pub angles: Vec<TwistAngle>,
}

/// A Fourier mode: frequency offset `k` in angle class `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModeIndex {
    pub k: i64,
    pub j: usize,
}

impl TwistSpec {
    pub fn new(angles: Vec<TwistAngle>) -> Result<Self> {
        let t = TwistSpec { angles };
        t.validate()?;
        Ok(t)
    }

    /// The trivial twist of dimension `dim`.
    pub fn trivial(dim: u32) -> Self {
        TwistSpec {
            angles: vec![TwistAngle {
                theta: 0.0,
                mult: dim,
                log_abs: 0.0,
            }],
        }
    }

    /// A unitary twist from `(theta, mult)` pairs.
    pub fn unitary(classes: &[(f64, u32)]) -> Result<Self> {
        TwistSpec::new(
            classes
                .iter()
                .map(|&(theta, mult)| TwistAngle {
                    theta,
                    mult,
                    log_abs: 0.0,
                })
                .collect(),
        )
    }

    pub fn validate(&self) -> Result<()> {
        if self.angles.is_empty() {
            return Err(Error::Spec("twist has no angle classes".into()));
        }
        for a in &self.angles {
            if !(0.0..1.0).contains(&a.theta) || !a.log_abs.is_finite() {
                return Err(Error::Spec(format!("angle {} outside [0, 1)", a.theta)));
            }
            if a.mult == 0 {
                return Err(Error::Spec("multiplicity must be at least 1".into()));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> u32 {
        self.angles.iter().map(|a| a.mult).sum()
    }

    pub fn is_unitary(&self) -> bool {
        self.angles.iter().all(|a| a.log_abs == 0.0)
    }

    /// Largest `|log |lambda_j||`.
    pub fn max_log_abs(&self) -> f64 {
        self.angles.iter().map(|a| a.log_abs.abs()).fold(0.0, f64::max)
    }

    /// Multiplicity of the eigenvalue 1.
    pub fn trivial_multiplicity(&self) -> u32 {
        self.angles
            .iter()
            .filter(|a| a.theta == 0.0 && a.log_abs == 0.0)
            .map(|a| a.mult)
            .sum()
    }

    pub fn eigenvalue(&self, j: usize) -> Complex64 {
        let a = &self.angles[j];
        Complex64::from_polar(a.log_abs.exp(), 2.0 * PI * a.theta)
    }

    /// `lambda_j^n`, reducing `n theta_j` modulo 1 before forming the phase.
    pub fn power(&self, j: usize, n: i64) -> Complex64 {
        let a = &self.angles[j];
        let turns = (n as f64 * a.theta).rem_euclid(1.0);
        Complex64::from_polar((n as f64 * a.log_abs).exp(), 2.0 * PI * turns)
    }

    /// The frequency `k + theta_j` of a mode.
    pub fn kappa(&self, m: ModeIndex) -> Result<f64> {
        let a = self
            .angles
            .get(m.j)
            .ok_or_else(|| Error::domain(format!("angle class {} out of range", m.j)))?;
        Ok(m.k as f64 + a.theta)
    }

    /// Dense diagonal matrix of the twist in its eigenbasis.
    pub fn matrix(&self) -> DMatrix<Complex64> {
        let diag: Vec<Complex64> = self
            .angles
            .iter()
            .enumerate()
            .flat_map(|(j, a)| std::iter::repeat_n(self.eigenvalue(j), a.mult as usize))
            .collect();
        DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag))
    }
}

/// Unitary defect `||U* U - I||_F`.
pub fn unitary_defect(u: &DMatrix<Complex64>) -> f64 {
    let n = u.nrows();
    (u.adjoint() * u - DMatrix::<Complex64>::identity(n, n)).norm()
}

/// Eigen-angle classes of a unitary matrix, clustered at
/// [`ANGLE_CLUSTER_TOL`] with wrap-around at 1.
pub fn eigen_angles(u: &DMatrix<Complex64>, tol: f64) -> Result<TwistSpec> {
    if u.nrows() != u.ncols() || u.nrows() == 0 {
        return Err(Error::domain("twist matrix must be square and non-empty"));
    }
    let defect = unitary_defect(u);
    if defect > tol {
        return Err(Error::NonUnitary { defect });
    }
    // for a normal matrix the complex Schur form is diagonal
    let t = nalgebra::Schur::try_new(u.clone(), 1e-14, 10_000)
        .ok_or(Error::NonConvergence {
            what: "Schur decomposition",
            terms: 10_000,
        })?
        .unpack()
        .1;
    let mut thetas: Vec<f64> = (0..u.nrows())
        .map(|i| {
            let th = t[(i, i)].arg() / (2.0 * PI);
            let th = th.rem_euclid(1.0);
            if !(ANGLE_CLUSTER_TOL..=1.0 - ANGLE_CLUSTER_TOL).contains(&th) {
                0.0
            } else {
                th
            }
        })
        .collect();
    thetas.sort_by(f64::total_cmp);
    let mut groups: Vec<Vec<f64>> = Vec::new();
    for th in thetas {
        match groups.last_mut() {
            Some(g) if th - g[g.len() - 1] <= ANGLE_CLUSTER_TOL => g.push(th),
            _ => groups.push(vec![th]),
        }
    }
    let angles = groups
        .into_iter()
        .map(|g| {
            let mean = g.iter().sum::<f64>() / g.len() as f64;
            // classes that touch zero are snapped to it
            let theta = if g[0] == 0.0 { 0.0 } else { mean };
            TwistAngle {
                theta,
                mult: g.len() as u32,
                log_abs: 0.0,
            }
        })
        .collect();
    TwistSpec::new(angles)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diag_i_minus_one() {
        let u = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(0.0, 1.0),
            Complex64::new(-1.0, 0.0),
        ]));
        let t = eigen_angles(&u, 1e-12).unwrap();
        assert_eq!(t.angles.len(), 2);
        assert!((t.angles[0].theta - 0.25).abs() < 1e-15);
        assert!((t.angles[1].theta - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_unitary() {
        let u = DMatrix::from_element(2, 2, Complex64::new(1.0, 0.0));
        assert!(matches!(eigen_angles(&u, 1e-10), Err(Error::NonUnitary { .. })));
    }

    #[test]
    fn power_phase_is_exact_for_rational_angles() {
        let t = TwistSpec::unitary(&[(0.25, 1)]).unwrap();
        assert!((t.power(0, 4) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((t.power(0, -1) - Complex64::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn json_shape() {
        let t: TwistSpec = serde_json::from_str(r#"{"angles":[{"theta":0.25,"mult":2}]}"#).unwrap();
        assert_eq!(t.dim(), 2);
        assert_eq!(
            serde_json::to_string(&t).unwrap(),
            r#"{"angles":[{"theta":0.25,"mult":2}]}"#
        );
    }
}
