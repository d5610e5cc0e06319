//! Hilbert–Schmidt geometry: inner product, norm, operator angle and the
//! weak orthogonality / parallelism predicates built on it.
//!
//! For non-zero `X`, `Y` of equal shape the angle `Θ ∈ [0, π]` is defined by
//! `cos Θ = Re⟨X, Y⟩ / (‖X‖₂ ‖Y‖₂)` with `⟨X, Y⟩ = Tr(Y* X)`.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Real;

/// Default tolerance of [`is_weak_orthogonal`] and [`is_weak_parallel`].
pub const DEFAULT_PREDICATE_TOL: f64 = 1e-8;

/// `⟨X, Y⟩ = Tr(Y* X)`.
///
/// Accumulated as the diagonal of `Y* X`, column by column.
pub fn hs_inner<T: Real>(x: &Matrix<T>, y: &Matrix<T>) -> Result<Complex<T>> {
    x.require_same_shape(y, "hs_inner")?;
    let mut acc = Complex::new(T::zero(), T::zero());
    for j in 0..x.cols() {
        let mut diag = Complex::new(T::zero(), T::zero());
        for i in 0..x.rows() {
            diag = diag + y[(i, j)].conj() * x[(i, j)];
        }
        acc = acc + diag;
    }
    Ok(acc)
}

/// `‖X‖₂ = √(Σ |x_ij|²)`.
pub fn hs_norm<T: Real>(x: &Matrix<T>) -> T {
    hs_norm_sqr(x).sqrt()
}

/// `‖X‖₂²`, accumulated in the same order as [`hs_inner`] so that
/// `hs_inner(X, X).re == hs_norm_sqr(X)` bit for bit.
pub fn hs_norm_sqr<T: Real>(x: &Matrix<T>) -> T {
    let mut acc = T::zero();
    for j in 0..x.cols() {
        let mut diag = T::zero();
        for i in 0..x.rows() {
            diag = diag + x[(i, j)].norm_sqr();
        }
        acc = acc + diag;
    }
    acc
}

/// `‖X‖₂ ‖Y‖₂` as `√(‖X‖₂² ‖Y‖₂²)`, which is exact when `X = ±Y`.
pub(crate) fn norm_product<T: Real>(nx2: T, ny2: T) -> T {
    let p = nx2 * ny2;
    if p.is_normal() {
        p.sqrt()
    } else {
        nx2.sqrt() * ny2.sqrt()
    }
}

/// Everything known about the angle between two operators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngleReport<T: Real> {
    pub cos: T,
    pub sin: T,
    #[serde(with = "crate::geometry::complex_json")]
    pub inner: Complex<T>,
    pub norm_x: T,
    pub norm_y: T,
}

impl<T: Real> AngleReport<T> {
    /// The angle itself, in `[0, π]`.
    pub fn theta(&self) -> T {
        self.sin.atan2(self.cos)
    }
}

/// Squared norms of both operands, rejecting zero matrices.
fn nonzero_norms<T: Real>(x: &Matrix<T>, y: &Matrix<T>, op: &'static str) -> Result<(T, T)> {
    x.require_same_shape(y, op)?;
    let nx2 = hs_norm_sqr(x);
    let ny2 = hs_norm_sqr(y);
    if nx2 == T::zero() {
        return Err(Error::ZeroOperand { op, which: "X" });
    }
    if ny2 == T::zero() {
        return Err(Error::ZeroOperand { op, which: "Y" });
    }
    Ok((nx2, ny2))
}

/// Computes `cos Θ`, `sin Θ`, `⟨X, Y⟩` and both norms.
///
/// The sine is evaluated as `‖x̂ − ŷ‖ ‖x̂ + ŷ‖ / 2` on the normalized operands,
/// which equals `√(1 − cos²Θ)` but stays accurate near `Θ = 0` and `Θ = π`.
pub fn angle<T: Real>(x: &Matrix<T>, y: &Matrix<T>) -> Result<AngleReport<T>> {
    let (nx2, ny2) = nonzero_norms(x, y, "angle")?;
    let (nx, ny) = (nx2.sqrt(), ny2.sqrt());
    let inner = hs_inner(x, y)?;
    let cos = (inner.re / norm_product(nx2, ny2)).max(-T::one()).min(T::one());

    let (ix, iy) = (nx.recip(), ny.recip());
    let (mut dm, mut dp) = (T::zero(), T::zero());
    for (a, b) in x.as_slice().iter().zip(y.as_slice()) {
        let (a, b) = (*a * ix, *b * iy);
        dm = dm + (a - b).norm_sqr();
        dp = dp + (a + b).norm_sqr();
    }
    let sin = (dm.sqrt() * dp.sqrt() * T::lit(0.5)).min(T::one());

    Ok(AngleReport {
        cos,
        sin,
        inner,
        norm_x: nx,
        norm_y: ny,
    })
}

pub fn cos_angle<T: Real>(x: &Matrix<T>, y: &Matrix<T>) -> Result<T> {
    let (nx2, ny2) = nonzero_norms(x, y, "cos_angle")?;
    let re = hs_inner(x, y)?.re;
    Ok((re / norm_product(nx2, ny2)).max(-T::one()).min(T::one()))
}

pub fn sin_angle<T: Real>(x: &Matrix<T>, y: &Matrix<T>) -> Result<T> {
    Ok(angle(x, y)?.sin)
}

/// `Θ_{X,Y}` in radians.
pub fn theta<T: Real>(x: &Matrix<T>, y: &Matrix<T>) -> Result<T> {
    Ok(angle(x, y)?.theta())
}

/// `X ⊥_w Y`: `|cos Θ| ≤ tol`.
pub fn is_weak_orthogonal<T: Real>(x: &Matrix<T>, y: &Matrix<T>, tol: T) -> Result<bool> {
    Ok(cos_angle(x, y)?.abs() <= tol)
}

/// `X ∥_w Y`: `sin Θ ≤ tol`.
pub fn is_weak_parallel<T: Real>(x: &Matrix<T>, y: &Matrix<T>, tol: T) -> Result<bool> {
    Ok(sin_angle(x, y)? <= tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value<T: Real>(self) -> T {
        match self {
            Sign::Plus => T::one(),
            Sign::Minus => -T::one(),
        }
    }
}

/// Right-hand side of the cosine theorem,
/// `‖X‖₂² + ‖Y‖₂² ± 2‖X‖₂‖Y‖₂ cos Θ`, which equals `‖X ± Y‖₂²`.
pub fn cosine_expansion<T: Real>(x: &Matrix<T>, y: &Matrix<T>, sign: Sign) -> Result<T> {
    let a = angle(x, y)?;
    let two = T::lit(2.0);
    Ok(a.norm_x * a.norm_x + a.norm_y * a.norm_y + sign.value::<T>() * two * a.norm_x * a.norm_y * a.cos)
}

pub(crate) mod complex_json {
    use num_complex::Complex;
    use serde::ser::SerializeStruct;
    use serde::Serializer;

    use crate::scalar::Real;

    pub fn serialize<S: Serializer, T: Real>(z: &Complex<T>, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Complex", 2)?;
        st.serialize_field("re", &z.re)?;
        st.serialize_field("im", &z.im)?;
        st.end()
    }
}
