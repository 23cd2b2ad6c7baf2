// `!(a < b)` is used on purpose so that NaN lands on the rejecting branch
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod free_resolvent;
pub mod geometry;
pub mod model_kernels;
pub mod resonances;
pub mod scattering;
pub mod specfun;
pub mod twist;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
