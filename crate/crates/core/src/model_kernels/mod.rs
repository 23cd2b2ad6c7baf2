//! Twisted resolvent kernels of the three model ends, each by an image sum
//! and by a Fourier mode expansion, plus the twisted Epstein-type lattice
//! sum and the image-sum remainder.

pub mod cusp;
pub mod cylinder;
pub mod funnel;
pub mod hseries;
pub mod lattice_sum;

use crate::error::{Error, Result};
use crate::twist::TwistSpec;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub use cusp::{cusp_images, cusp_kernel, cusp_mode};
pub use cylinder::{cyl_images_sum, cyl_kernel_fourier, cyl_kernel_images, cyl_mode, cyl_mode_solution};
pub use funnel::{funnel_kernel, funnel_kernel_fourier, funnel_mode};
pub use hseries::{h_series_bound, h_series_direct};
pub use lattice_sum::{s_xi_continued, s_xi_direct};

/// Image sums require `Re s` to exceed the twist growth rate by this much.
pub const CONVERGENCE_MARGIN: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImagesConfig {
    pub max_images: usize,
    pub tail_tol: f64,
}

impl Default for ImagesConfig {
    fn default() -> Self {
        ImagesConfig {
            max_images: 200_000,
            tail_tol: 1e-13,
        }
    }
}

/// Fourier sums stop once two consecutive mode pairs fall below this
/// fraction of the running sum.
pub const FOURIER_TOL: f64 = 1e-15;

/// A kernel that is diagonal in the eigenbasis of the twist, one value per
/// angle class.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalKernel {
    pub values: Vec<Complex64>,
}

impl DiagonalKernel {
    /// Expands to the full `dim V x dim V` matrix.
    pub fn dense(&self, twist: &TwistSpec) -> DMatrix<Complex64> {
        let d: Vec<Complex64> = self
            .values
            .iter()
            .zip(&twist.angles)
            .flat_map(|(v, a)| std::iter::repeat_n(*v, a.mult as usize))
            .collect();
        DMatrix::from_diagonal(&DVector::from_vec(d))
    }

    /// Largest entrywise relative difference to another kernel.
    pub fn max_rel_diff(&self, other: &DiagonalKernel) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm() / a.norm().max(b.norm()).max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max)
    }
}

fn require_unitary(twist: &TwistSpec, what: &str) -> Result<()> {
    if twist.is_unitary() {
        Ok(())
    } else {
        Err(Error::domain(format!("{what} needs a unitary twist")))
    }
}

/// Sums `t(k) + t(-k)` for `k = 0, 1, ...` until two consecutive pairs are
/// below `FOURIER_TOL` of the running sum. The terms decay like `e^{-rate |k|}`;
/// when that cannot reach `FOURIER_TOL` well within `k_max` (a small radial
/// gap) the sum fails up front instead of running every mode.
pub(crate) fn fourier_sum<F>(k_max: usize, rate: f64, mut term: F) -> Result<Complex64>
where
    F: FnMut(i64) -> Result<Complex64>,
{
    if !(-FOURIER_TOL.ln() <= 2.0 * k_max as f64 * rate) {
        return Err(Error::Truncation {
            what: "Fourier mode sum",
            limit: k_max,
            tail: f64::NAN,
        });
    }
    let mut sum = term(0)?;
    let mut quiet = 0;
    for k in 1..=k_max as i64 {
        let (a, b) = (term(k)?, term(-k)?);
        sum += a + b;
        if a.norm() + b.norm() <= FOURIER_TOL * sum.norm() {
            quiet += 1;
            if quiet >= 2 {
                return Ok(sum);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::Truncation {
        what: "Fourier mode sum",
        limit: k_max,
        tail: f64::NAN,
    })
}
