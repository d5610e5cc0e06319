//! Real scalar abstraction shared by every numeric routine in the crate.
//!
//! All matrix code is written against [`Real`], so the same algorithms run in
//! `f64` (the default, see the aliases at the crate root) and `f32`. Each
//! implementation carries its own working tolerances: the `f64` values are the
//! documented defaults, the `f32` ones are scaled to single precision.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Default
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Jacobi stops once the off-diagonal Frobenius mass drops below
    /// `JACOBI_TOL * scale`.
    const JACOBI_TOL: Self;
    /// Eigenvalues of a Gram matrix in `[-CLAMP_TOL * max, 0)` are treated as 0.
    const CLAMP_TOL: Self;
    /// Singular values at or below `RANK_TOL * sigma_max` are treated as 0.
    const RANK_TOL: Self;
    /// Relative tolerance for the Hermitian precondition of the eigensolver.
    const HERMITIAN_TOL: Self;
    /// Sweep budget for the Jacobi eigensolver.
    const MAX_SWEEPS: usize = 100;

    /// Converts an `f64` literal; exact for `f64`, rounded for `f32`.
    fn lit(x: f64) -> Self;

    fn as_f64(self) -> f64;
}

impl Real for f64 {
    const JACOBI_TOL: Self = 1e-14;
    const CLAMP_TOL: Self = 1e-12;
    const RANK_TOL: Self = 1e-10;
    const HERMITIAN_TOL: Self = 1e-10;

    #[inline]
    fn lit(x: f64) -> Self {
        x
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self
    }
}

impl Real for f32 {
    const JACOBI_TOL: Self = 1e-6;
    const CLAMP_TOL: Self = 1e-5;
    const RANK_TOL: Self = 1e-4;
    const HERMITIAN_TOL: Self = 1e-4;

    #[inline]
    fn lit(x: f64) -> Self {
        x as f32
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self as f64
    }
}
