//! Hilbert–Schmidt geometry of complex matrices: inner products and operator
//! angles, matrix absolute values and polar decompositions, a registry of
//! norm inequalities relating `X`, `Y`, `|X|` and `|X*|`, and seeded tools
//! for testing them at scale.
//!
//! The numerical core is generic over [`scalar::Real`] (`f32` or `f64`);
//! the aliases below fix it to `f64`. The random lab and the CLI work in
//! `f64` only.

pub mod cli;
pub mod error;
pub mod geometry;
pub mod inequality;
pub mod lab;
pub mod matrix;
pub mod scalar;
pub mod spectral;

pub use error::{Error, Result};
pub use geometry::{angle, cos_angle, hs_inner, hs_norm, sin_angle, theta};
pub use inequality::{check, InequalityId};
pub use scalar::Real;
pub use spectral::{abs_adjoint, abs_op, franca_abs_2x2, hermitian_eig, polar};

pub use num_complex::Complex64;

pub type ComplexMatrix = matrix::Matrix<f64>;
pub type ComplexVector = matrix::Vector<f64>;
pub type AngleReport = geometry::AngleReport<f64>;
pub type InequalityReport = inequality::InequalityReport<f64>;
pub type PolarParts = spectral::PolarParts<f64>;
pub type HermitianEigen = spectral::HermitianEigen<f64>;
