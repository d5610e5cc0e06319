//! Dense complex matrices and vectors.
//!
//! Storage is row-major. Every constructor rejects non-finite entries, so all
//! downstream routines may assume finite input. Arithmetic through the
//! `std::ops` operators panics on shape mismatch; the named methods
//! ([`Matrix::matmul`], [`Matrix::add`], ...) return [`Error::ShapeMismatch`]
//! instead.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Dense `rows x cols` complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

/// Complex column vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector<T> {
    data: Vec<Complex<T>>,
}

fn check_finite<T: Real>(z: &Complex<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

impl<T: Real> Matrix<T> {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(Error::Malformed(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(k) = data.iter().position(|z| !check_finite(z)) {
            return Err(Error::NonFinite {
                row: k / cols,
                col: k % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix with zero imaginary part from row-major reals.
    pub fn from_real(rows: usize, cols: usize, re: &[T]) -> Result<Self> {
        Self::new(
            rows,
            cols,
            re.iter().map(|&x| Complex::new(x, T::zero())).collect(),
        )
    }

    /// Builds a matrix from separate real and imaginary row arrays.
    pub fn from_parts(re: &[Vec<T>], im: &[Vec<T>]) -> Result<Self> {
        let rows = re.len();
        let cols = re.first().map_or(0, Vec::len);
        if im.len() != rows {
            return Err(Error::Malformed(format!(
                "`re` has {rows} rows but `im` has {}",
                im.len()
            )));
        }
        let mut data = Vec::with_capacity(rows * cols);
        for (i, (r, m)) in re.iter().zip(im).enumerate() {
            if r.len() != cols || m.len() != cols {
                return Err(Error::Malformed(format!(
                    "row {i} has {} real and {} imaginary entries, expected {cols}",
                    r.len(),
                    m.len()
                )));
            }
            data.extend(r.iter().zip(m).map(|(&a, &b)| Complex::new(a, b)));
        }
        Self::new(rows, cols, data)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::new(T::zero(), T::zero()); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                Complex::new(T::one(), T::zero())
            } else {
                Complex::new(T::zero(), T::zero())
            }
        })
    }

    /// Diagonal matrix with the given real diagonal.
    pub fn diag_real(d: &[T]) -> Self {
        let n = d.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                Complex::new(d[i], T::zero())
            } else {
                Complex::new(T::zero(), T::zero())
            }
        })
    }

    /// Diagonal matrix with the given complex diagonal.
    pub fn diag(d: &[Complex<T>]) -> Self {
        let n = d.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                d[i]
            } else {
                Complex::new(T::zero(), T::zero())
            }
        })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    #[inline]
    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vector<T> {
        Vector {
            data: (0..self.rows).map(|i| self[(i, j)]).collect(),
        }
    }

    pub fn require_square(&self, op: &'static str) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                op,
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn require_same_shape(&self, other: &Self, op: &'static str) -> Result<()> {
        if self.shape() == other.shape() {
            Ok(())
        } else {
            Err(Error::ShapeMismatch {
                op,
                left: self.shape(),
                right: other.shape(),
            })
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn trace(&self) -> Result<Complex<T>> {
        let n = self.require_square("trace")?;
        Ok((0..n).map(|i| self[(i, i)]).fold(Complex::new(T::zero(), T::zero()), |acc, z| acc + z))
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch {
                op: "matmul",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d = *d + a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.require_same_shape(rhs, "add")?;
        Ok(self.zip_with(rhs, |a, b| a + b))
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.require_same_shape(rhs, "sub")?;
        Ok(self.zip_with(rhs, |a, b| a - b))
    }

    pub fn scale(&self, gamma: Complex<T>) -> Self {
        self.map(|z| gamma * z)
    }

    pub fn scale_real(&self, alpha: T) -> Self {
        self.map(|z| z * alpha)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &Vector<T>) -> Result<Vector<T>> {
        if v.dim() != self.cols {
            return Err(Error::ShapeMismatch {
                op: "apply",
                left: self.shape(),
                right: (v.dim(), 1),
            });
        }
        let data = (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(&v.data)
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (&a, &b)| acc + a * b)
            })
            .collect();
        Ok(Vector { data })
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(Complex<T>, Complex<T>) -> Complex<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.shape(), other.shape(), "max_abs_diff: shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    /// `(X + X*) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * T::lit(0.5)
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == T::zero() && z.im == T::zero())
    }

    /// Converts to another scalar precision.
    pub fn cast<U: Real>(&self) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|z| Complex::new(U::lit(z.re.as_f64()), U::lit(z.im.as_f64())))
                .collect(),
        }
    }
}

/// Rank-one operator `a ⊗ b`, acting as `c ↦ [c, b] a`; entries `a_i conj(b_j)`.
pub fn rank_one<T: Real>(a: &Vector<T>, b: &Vector<T>) -> Matrix<T> {
    Matrix::from_fn(a.dim(), b.dim(), |i, j| a.data[i] * b.data[j].conj())
}

impl<T: Real> Vector<T> {
    pub fn new(data: Vec<Complex<T>>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::EmptyMatrix { rows: 0, cols: 1 });
        }
        if let Some(k) = data.iter().position(|z| !check_finite(z)) {
            return Err(Error::NonFinite { row: k, col: 0 });
        }
        Ok(Self { data })
    }

    /// Standard basis vector `e_k` in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut data = vec![Complex::new(T::zero(), T::zero()); dim];
        data[k] = Complex::new(T::one(), T::zero());
        Self { data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.data.len()
    }

    #[inline]
    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    /// Inner product `[self, other] = Σ self_i conj(other_i)`, linear in the first slot.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        assert_eq!(self.dim(), other.dim(), "inner: dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (&a, &b)| acc + a * b.conj())
    }

    pub fn norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn scale(&self, gamma: Complex<T>) -> Self {
        Self {
            data: self.data.iter().map(|&z| gamma * z).collect(),
        }
    }

    /// The vector as a `dim x 1` matrix.
    pub fn to_column(&self) -> Matrix<T> {
        Matrix {
            rows: self.dim(),
            cols: 1,
            data: self.data.clone(),
        }
    }
}

impl<T: Real> Index<usize> for Vector<T> {
    type Output = Complex<T>;

    fn index(&self, i: usize) -> &Complex<T> {
        &self.data[i]
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = Complex<T>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> Mul for &Matrix<T> {
    type Output = Matrix<T>;

    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

impl<T: Real> Add for &Matrix<T> {
    type Output = Matrix<T>;

    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        Matrix::add(self, rhs).expect("matrix sum shape mismatch")
    }
}

impl<T: Real> Sub for &Matrix<T> {
    type Output = Matrix<T>;

    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        Matrix::sub(self, rhs).expect("matrix difference shape mismatch")
    }
}

impl<T: Real> Neg for &Matrix<T> {
    type Output = Matrix<T>;

    fn neg(self) -> Matrix<T> {
        self.map(|z| -z)
    }
}

impl<T: Real> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:>12.6e}{:+.6e}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Wire form of a matrix: `{"rows", "cols", "re": [[..]], "im": [[..]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl<T: Real> From<&Matrix<T>> for MatrixJson {
    fn from(m: &Matrix<T>) -> Self {
        let part = |f: fn(&Complex<T>) -> T| {
            (0..m.rows)
                .map(|i| (0..m.cols).map(|j| f(&m[(i, j)]).as_f64()).collect())
                .collect()
        };
        MatrixJson {
            rows: m.rows,
            cols: m.cols,
            re: part(|z| z.re),
            im: part(|z| z.im),
        }
    }
}

impl<T: Real> TryFrom<MatrixJson> for Matrix<T> {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<Self> {
        if j.re.len() != j.rows || j.im.len() != j.rows {
            return Err(Error::Malformed(format!(
                "declared {} rows, `re` has {} and `im` has {}",
                j.rows,
                j.re.len(),
                j.im.len()
            )));
        }
        if let Some(i) = (0..j.rows).find(|&i| j.re[i].len() != j.cols || j.im[i].len() != j.cols) {
            return Err(Error::Malformed(format!(
                "row {i} does not have the declared {} columns",
                j.cols
            )));
        }
        let conv = |rows: &[Vec<f64>]| -> Vec<Vec<T>> {
            rows.iter()
                .map(|r| r.iter().map(|&x| T::lit(x)).collect())
                .collect()
        };
        Matrix::from_parts(&conv(&j.re), &conv(&j.im))
    }
}

impl<T: Real> Serialize for Matrix<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from(self).serialize(s)
    }
}

impl<'de, T: Real> Deserialize<'de> for Matrix<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = MatrixJson::deserialize(d)?;
        Matrix::try_from(j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = Matrix<f64>;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn lcg_matrix(n: usize, seed: u64) -> M {
        let mut s = seed;
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        M::from_fn(n, n, |_, _| c(next(), next()))
    }

    /// Gauss-Jordan inverse with partial pivoting; used only as a test oracle.
    fn gauss_jordan_inverse(a: &M) -> M {
        let n = a.rows();
        let mut w = a.clone();
        let mut inv = M::identity(n);
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&p, &q| w[(p, col)].norm().total_cmp(&w[(q, col)].norm()))
                .unwrap();
            for j in 0..n {
                let t = w[(col, j)];
                w[(col, j)] = w[(piv, j)];
                w[(piv, j)] = t;
                let t = inv[(col, j)];
                inv[(col, j)] = inv[(piv, j)];
                inv[(piv, j)] = t;
            }
            let d = w[(col, col)];
            for j in 0..n {
                w[(col, j)] /= d;
                inv[(col, j)] /= d;
            }
            for r in 0..n {
                if r != col {
                    let f = w[(r, col)];
                    for j in 0..n {
                        w[(r, j)] = w[(r, j)] - f * w[(col, j)];
                        inv[(r, j)] = inv[(r, j)] - f * inv[(col, j)];
                    }
                }
            }
        }
        inv
    }

    #[test]
    fn rejects_non_finite_and_bad_shapes() {
        assert!(matches!(
            M::from_real(1, 2, &[1.0, f64::NAN]),
            Err(Error::NonFinite { row: 0, col: 1 })
        ));
        assert!(matches!(
            M::from_real(2, 2, &[1.0, f64::INFINITY, 0.0, 0.0]),
            Err(Error::NonFinite { .. })
        ));
        assert!(M::from_real(2, 2, &[1.0]).is_err());
        assert!(M::from_real(0, 2, &[]).is_err());
    }

    #[test]
    fn adjoint_examples() {
        let i2 = M::identity(2);
        assert_eq!(i2.adjoint(), i2);
        let x = M::from_real(2, 2, &[0.0, 0.0, -1.0, 0.0]).unwrap();
        assert_eq!(x.adjoint(), M::from_real(2, 2, &[0.0, -1.0, 0.0, 0.0]).unwrap());
        let g = lcg_matrix(4, 7);
        assert_eq!(g.adjoint().adjoint(), g);
        let r = M::from_fn(2, 3, |i, j| c(i as f64, j as f64));
        assert_eq!(r.adjoint().shape(), (3, 2));
        assert_eq!(r.adjoint()[(2, 1)], c(1.0, -2.0));
    }

    #[test]
    fn trace_examples() {
        assert_eq!(M::identity(2).trace().unwrap(), c(2.0, 0.0));
        let m = M::from_real(2, 2, &[4.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(m.trace().unwrap(), c(4.0, 0.0));
        let a = lcg_matrix(5, 1);
        let b = lcg_matrix(5, 2);
        let d = (&a * &b).trace().unwrap() - (&b * &a).trace().unwrap();
        assert!(d.norm() < 1e-13);
        assert_eq!(a.adjoint().trace().unwrap(), a.trace().unwrap().conj());
        assert!(matches!(
            M::zeros(2, 3).trace(),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn matmul_examples() {
        let g = lcg_matrix(3, 3);
        assert_eq!(M::identity(3).matmul(&g).unwrap(), g);
        let up = M::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        let down = M::from_real(2, 2, &[0.0, 0.0, 1.0, 0.0]).unwrap();
        assert_eq!(
            up.matmul(&down).unwrap(),
            M::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0]).unwrap()
        );
        assert!(matches!(
            M::zeros(2, 3).matmul(&M::zeros(2, 3)),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn matmul_against_gauss_jordan_inverse() {
        // diagonally dominant, hence well conditioned
        let g = &lcg_matrix(4, 11) + &M::identity(4).scale_real(4.0);
        let inv = gauss_jordan_inverse(&g);
        let prod = g.matmul(&inv).unwrap();
        assert!(prod.max_abs_diff(&M::identity(4)) < 1e-12);
    }

    #[test]
    fn add_and_scale_examples() {
        let x = lcg_matrix(3, 5);
        assert!(x.add(&x.scale(c(-1.0, 0.0))).unwrap().is_zero());
        let s2 = 2f64.sqrt();
        let xm = M::from_real(2, 2, &[0.0, 0.0, -1.0, 0.0]).unwrap();
        let z = M::from_real(2, 2, &[0.0, 0.0, 1.0 - s2, (8f64.sqrt() - 2.0).sqrt()]).unwrap();
        let sum = xm.add(&z).unwrap();
        let want = M::from_real(2, 2, &[0.0, 0.0, -s2, (8f64.sqrt() - 2.0).sqrt()]).unwrap();
        assert!(sum.max_abs_diff(&want) < 1e-15);
        assert_eq!(
            M::identity(2).scale(c(0.0, 1.0)),
            M::diag(&[c(0.0, 1.0), c(0.0, 1.0)])
        );
        assert!(x.add(&M::zeros(2, 2)).is_err());
    }

    #[test]
    fn rank_one_examples() {
        let e1 = Vector::<f64>::basis(2, 0);
        assert_eq!(rank_one(&e1, &e1), M::diag_real(&[1.0, 0.0]));

        let a = Vector::new(vec![c(1.0, 2.0), c(-0.5, 0.3), c(0.0, 1.0), c(2.0, 0.0), c(0.1, -0.7)]).unwrap();
        let b = Vector::new(vec![c(0.3, -1.0), c(1.5, 0.5), c(-2.0, 0.2), c(0.0, 0.0), c(1.0, 1.0)]).unwrap();
        let t = rank_one(&a, &b);
        assert!((t.trace().unwrap() - a.inner(&b)).norm() < 1e-14);

        let cvec = Vector::new(vec![c(0.2, 0.1), c(-1.0, 0.0), c(0.5, 0.5), c(0.0, -2.0), c(1.0, 0.3)]).unwrap();
        let lhs = t.apply(&cvec).unwrap();
        let rhs = a.scale(cvec.inner(&b));
        for k in 0..5 {
            assert!((lhs[k] - rhs[k]).norm() <= 1e-13 * (1.0 + rhs[k].norm()));
        }
    }

    #[test]
    fn json_round_trip_and_rejection() {
        let m = M::from_fn(2, 3, |i, j| c(i as f64 - 0.25, j as f64 * 1e-3));
        let s = serde_json::to_string(&m).unwrap();
        let back: M = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);

        let bad = r#"{"rows":2,"cols":2,"re":[[1,0],[0]],"im":[[0,0],[0,0]]}"#;
        assert!(serde_json::from_str::<M>(bad).is_err());
        let bad = r#"{"rows":3,"cols":2,"re":[[1,0],[0,1]],"im":[[0,0],[0,0]]}"#;
        assert!(serde_json::from_str::<M>(bad).is_err());
        let huge = r#"{"rows":1,"cols":1,"re":[[1e300]],"im":[[0]]}"#;
        assert!(serde_json::from_str::<Matrix<f32>>(huge).is_err());
    }
}
