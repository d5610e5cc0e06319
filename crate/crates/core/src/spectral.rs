//! Hermitian eigendecomposition and the operators built from it: the matrix
//! absolute value `|X| = (X*X)^{1/2}`, the polar decomposition `X = U|X|`, a
//! PSD test and the closed-form absolute value of a 2x2 matrix.
//!
//! Two Jacobi variants live here. [`hermitian_eig`] is the classical two-sided
//! cyclic Jacobi method on a Hermitian matrix. [`gram_eig`] applies the same
//! rotations to `X*X` implicitly, rotating the columns of `X` until they are
//! mutually orthogonal (one-sided Jacobi). It yields the eigenpairs of `X*X`
//! without ever forming the product, so singular values of rank-deficient
//! input stay at roundoff level instead of being lifted to `√ε`.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::hs_norm;
use crate::matrix::Matrix;
use crate::scalar::Real;

/// Eigenvalues in ascending order and the matching orthonormal eigenvectors
/// (as columns).
#[derive(Debug, Clone)]
pub struct HermitianEigen<T: Real> {
    pub eigenvalues: Vec<T>,
    pub vectors: Matrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    /// `V diag(λ) V*`.
    pub fn reconstruct(&self) -> Matrix<T> {
        self.apply_spectral(|l| l)
    }

    /// `V diag(f(λ)) V*`.
    pub fn apply_spectral(&self, f: impl Fn(T) -> T) -> Matrix<T> {
        let n = self.eigenvalues.len();
        let fl: Vec<T> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let v = &self.vectors;
        Matrix::from_fn(n, n, |i, j| {
            (0..n).fold(Complex::new(T::zero(), T::zero()), |acc, k| {
                acc + v[(i, k)] * v[(j, k)].conj() * fl[k]
            })
        })
    }
}

/// Polar decomposition `X = U|X|`.
///
/// `u` is the canonical partial isometry: isometric on `range |X|`, zero on
/// `ker |X|`. `unitary` extends it by mapping `ker |X|` onto `(range X)^⊥`;
/// both factor `X`, they differ only when `X` is singular.
#[derive(Debug, Clone, Serialize)]
pub struct PolarParts<T: Real> {
    pub u: Matrix<T>,
    pub abs: Matrix<T>,
    pub unitary: Matrix<T>,
}

/// Rotation `J` acting on coordinates `(p, q)`, chosen so that `J* A J` has a
/// zero `(p, q)` entry for the Hermitian 2x2 block `[[app, apq], [conj(apq), aqq]]`.
#[derive(Clone, Copy)]
struct Rotation<T> {
    jpp: Complex<T>,
    jpq: Complex<T>,
    jqp: Complex<T>,
    jqq: Complex<T>,
}

impl<T: Real> Rotation<T> {
    fn annihilating(app: T, aqq: T, apq: Complex<T>) -> Self {
        let g = apq.norm();
        let w = apq.conj() / g;
        let theta = (aqq - app) / (g + g);
        let t = if theta.is_infinite() {
            T::zero()
        } else {
            let t = (theta.abs() + (theta * theta + T::one()).sqrt()).recip();
            if theta < T::zero() {
                -t
            } else {
                t
            }
        };
        let c = (T::one() + t * t).sqrt().recip();
        let s = t * c;
        let cz = Complex::new(c, T::zero());
        let sz = Complex::new(s, T::zero());
        Self {
            jpp: cz,
            jpq: sz,
            jqp: -(w * s),
            jqq: w * c,
        }
    }

    /// `M <- M J` on columns `p`, `q`.
    fn apply_right(&self, m: &mut Matrix<T>, p: usize, q: usize) {
        for k in 0..m.rows() {
            let (a, b) = (m[(k, p)], m[(k, q)]);
            m[(k, p)] = a * self.jpp + b * self.jqp;
            m[(k, q)] = a * self.jpq + b * self.jqq;
        }
    }

    /// `M <- J* M` on rows `p`, `q`.
    fn apply_left_adjoint(&self, m: &mut Matrix<T>, p: usize, q: usize) {
        let (app, apq, aqp, aqq) = (self.jpp.conj(), self.jqp.conj(), self.jpq.conj(), self.jqq.conj());
        for k in 0..m.cols() {
            let (a, b) = (m[(p, k)], m[(q, k)]);
            m[(p, k)] = app * a + apq * b;
            m[(q, k)] = aqp * a + aqq * b;
        }
    }
}

fn off_diagonal_norm<T: Real>(a: &Matrix<T>) -> T {
    let n = a.rows();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s = s + a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// `‖H − H*‖₂`.
pub fn hermitian_defect<T: Real>(h: &Matrix<T>) -> T {
    hs_norm(&(h - &h.adjoint()))
}

/// `‖XX* − X*X‖₂`.
pub fn normality_defect<T: Real>(x: &Matrix<T>) -> T {
    let xa = x.adjoint();
    hs_norm(&(&(x * &xa) - &(&xa * x)))
}

fn sort_ascending<T: Real>(values: Vec<T>, vectors: &Matrix<T>) -> HermitianEigen<T> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("finite eigenvalues"));
    let n = vectors.rows();
    HermitianEigen {
        eigenvalues: order.iter().map(|&k| values[k]).collect(),
        vectors: Matrix::from_fn(n, order.len(), |i, j| vectors[(i, order[j])]),
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic two-sided Jacobi.
///
/// The input must satisfy `‖H − H*‖₂ ≤ HERMITIAN_TOL (1 + ‖H‖₂)`; its Hermitian
/// part is diagonalized. Sweeps run in row-cyclic order until the off-diagonal
/// Frobenius mass is at most `JACOBI_TOL ‖H‖₂`.
pub fn hermitian_eig<T: Real>(h: &Matrix<T>) -> Result<HermitianEigen<T>> {
    let n = h.require_square("hermitian_eig")?;
    let scale = hs_norm(h);
    let defect = hermitian_defect(h);
    let allowed = T::HERMITIAN_TOL * (T::one() + scale);
    if defect > allowed {
        return Err(Error::NotHermitian {
            deviation: defect.as_f64(),
            allowed: allowed.as_f64(),
        });
    }

    let mut a = h.hermitian_part();
    let mut v = Matrix::identity(n);
    let threshold = T::JACOBI_TOL * scale;
    let mut converged = false;
    for _ in 0..T::MAX_SWEEPS {
        if off_diagonal_norm(&a) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.norm() == T::zero() {
                    continue;
                }
                let rot = Rotation::annihilating(a[(p, p)].re, a[(q, q)].re, apq);
                rot.apply_right(&mut a, p, q);
                rot.apply_left_adjoint(&mut a, p, q);
                rot.apply_right(&mut v, p, q);
                let zero = Complex::new(T::zero(), T::zero());
                a[(p, q)] = zero;
                a[(q, p)] = zero;
                a[(p, p)].im = T::zero();
                a[(q, q)].im = T::zero();
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > threshold {
        return Err(Error::NoConvergence { sweeps: T::MAX_SWEEPS });
    }
    let values = (0..n).map(|i| a[(i, i)].re).collect();
    Ok(sort_ascending(values, &v))
}

/// One-sided Jacobi factorization `X V = W` with `V` unitary and the columns of
/// `W` mutually orthogonal.
///
/// The columns of `V` are eigenvectors of `X*X` with eigenvalues `‖w_k‖²`, and
/// `σ_k = ‖w_k‖` are the singular values of `X`. Output is sorted by ascending
/// `σ`.
#[derive(Debug, Clone)]
pub struct GramEigen<T: Real> {
    pub singular_values: Vec<T>,
    pub v: Matrix<T>,
    pub w: Matrix<T>,
}

impl<T: Real> GramEigen<T> {
    /// Eigenvalues of `X*X`, ascending.
    pub fn gram_eigenvalues(&self) -> Vec<T> {
        self.singular_values.iter().map(|&s| s * s).collect()
    }
}

pub fn gram_eig<T: Real>(x: &Matrix<T>) -> Result<GramEigen<T>> {
    let (m, n) = x.shape();
    let mut w = x.clone();
    let mut v = Matrix::identity(n);
    let tol = T::JACOBI_TOL.max(T::epsilon() * T::lit(m as f64));
    // columns below this squared norm are roundoff and left alone
    let floor = {
        let e = T::epsilon() * hs_norm(x);
        e * e
    };
    let mut converged = false;
    for _ in 0..T::MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (mut alpha, mut beta) = (T::zero(), T::zero());
                let mut gamma = Complex::new(T::zero(), T::zero());
                for k in 0..m {
                    let (a, b) = (w[(k, p)], w[(k, q)]);
                    alpha = alpha + a.norm_sqr();
                    beta = beta + b.norm_sqr();
                    gamma = gamma + a.conj() * b;
                }
                let g = gamma.norm();
                if alpha <= floor || beta <= floor || g <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let rot = Rotation::annihilating(alpha, beta, gamma);
                rot.apply_right(&mut w, p, q);
                rot.apply_right(&mut v, p, q);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: T::MAX_SWEEPS });
    }

    let sigma: Vec<T> = (0..n)
        .map(|j| (0..m).map(|i| w[(i, j)].norm_sqr()).sum::<T>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| sigma[a].partial_cmp(&sigma[b]).expect("finite singular values"));
    Ok(GramEigen {
        singular_values: order.iter().map(|&k| sigma[k]).collect(),
        v: Matrix::from_fn(n, n, |i, j| v[(i, order[j])]),
        w: Matrix::from_fn(m, n, |i, j| w[(i, order[j])]),
    })
}

fn outer_sum<T: Real>(left: &Matrix<T>, weights: &[T], right: &Matrix<T>, keep: &[bool]) -> Matrix<T> {
    // Σ_k weights[k] · left_k · right_k*  over kept columns k
    let (m, n) = (left.rows(), right.rows());
    Matrix::from_fn(m, n, |i, j| {
        (0..weights.len())
            .filter(|&k| keep[k])
            .fold(Complex::new(T::zero(), T::zero()), |acc, k| {
                acc + left[(i, k)] * right[(j, k)].conj() * weights[k]
            })
    })
}

/// `|X| = (X*X)^{1/2}`, a `cols x cols` PSD matrix.
pub fn abs_op<T: Real>(x: &Matrix<T>) -> Result<Matrix<T>> {
    let ge = gram_eig(x)?;
    let keep = vec![true; ge.singular_values.len()];
    let abs = outer_sum(&ge.v, &ge.singular_values, &ge.v, &keep);
    Ok(abs.hermitian_part())
}

/// `|X*| = (XX*)^{1/2}`.
pub fn abs_adjoint<T: Real>(x: &Matrix<T>) -> Result<Matrix<T>> {
    abs_op(&x.adjoint())
}

/// Square root of a PSD matrix through [`hermitian_eig`].
///
/// Eigenvalues in `[−CLAMP_TOL·λ_max, 0)` are clamped to zero; anything more
/// negative is an error.
pub fn psd_sqrt<T: Real>(h: &Matrix<T>) -> Result<Matrix<T>> {
    let eig = hermitian_eig(h)?;
    let lmax = eig.eigenvalues.iter().fold(T::zero(), |a, &b| a.max(b));
    let threshold = T::CLAMP_TOL * lmax;
    if let Some(&bad) = eig.eigenvalues.iter().find(|&&l| l < -threshold) {
        return Err(Error::NegativeEigenvalue {
            value: bad.as_f64(),
            threshold: (-threshold).as_f64(),
        });
    }
    Ok(eig.apply_spectral(|l| l.max(T::zero()).sqrt()).hermitian_part())
}

/// Polar decomposition of a square matrix.
///
/// `U = Σ_{σ_k > RANK_TOL·σ_max} (X v_k / σ_k) v_k*`, so `U` is the partial
/// isometry with initial space `range |X|`.
pub fn polar<T: Real>(x: &Matrix<T>) -> Result<PolarParts<T>> {
    x.require_square("polar")?;
    let ge = gram_eig(x)?;
    let n = ge.singular_values.len();
    let smax = ge.singular_values.last().copied().unwrap_or_else(T::zero);
    let cutoff = T::RANK_TOL * smax;
    let keep: Vec<bool> = ge.singular_values.iter().map(|&s| s > cutoff && s > T::zero()).collect();
    let inv: Vec<T> = ge
        .singular_values
        .iter()
        .map(|&s| if s > T::zero() { s.recip() } else { T::zero() })
        .collect();
    let u = outer_sum(&ge.w, &inv, &ge.v, &keep);
    let abs = outer_sum(&ge.v, &ge.singular_values, &ge.v, &vec![true; n]).hermitian_part();

    // Left singular vectors of the kept modes, completed to an orthonormal basis;
    // the new vectors receive the discarded right singular vectors.
    let kept: Vec<usize> = (0..n).filter(|&k| keep[k]).collect();
    let dropped: Vec<usize> = (0..n).filter(|&k| !keep[k]).collect();
    let left = Matrix::from_fn(n, kept.len(), |i, j| ge.w[(i, kept[j])] * inv[kept[j]]);
    let completion = orthonormal_completion(&left);
    let mut unitary = u.clone();
    for (c, &k) in dropped.iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                unitary[(i, j)] = unitary[(i, j)] + completion[(i, c)] * ge.v[(j, k)].conj();
            }
        }
    }
    Ok(PolarParts { u, abs, unitary })
}

/// Orthonormal basis of the orthogonal complement of the span of the columns
/// of `q`, which must be orthonormal. Returned as the columns of an
/// `n x (n - q.cols())` matrix.
///
/// Gram-Schmidt (applied twice) on the standard basis, always taking the
/// candidate with the largest remaining component.
pub fn orthonormal_completion<T: Real>(q: &Matrix<T>) -> Matrix<T> {
    let n = q.rows();
    let mut basis: Vec<Vec<Complex<T>>> = (0..q.cols())
        .map(|j| (0..n).map(|i| q[(i, j)]).collect())
        .collect();
    let start = basis.len();
    let project_out = |v: &mut Vec<Complex<T>>, basis: &[Vec<Complex<T>>]| {
        for _ in 0..2 {
            for b in basis {
                let coef = b.iter().zip(v.iter()).fold(Complex::new(T::zero(), T::zero()), |acc, (bi, vi)| acc + bi.conj() * *vi);
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi = *vi - *bi * coef;
                }
            }
        }
    };
    while basis.len() < n {
        let mut best: Option<(T, Vec<Complex<T>>)> = None;
        for e in 0..n {
            let mut v = vec![Complex::new(T::zero(), T::zero()); n];
            v[e] = Complex::new(T::one(), T::zero());
            project_out(&mut v, &basis);
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
            if best.as_ref().is_none_or(|(b, _)| norm > *b) {
                best = Some((norm, v));
            }
        }
        let (norm, mut v) = best.expect("n > 0");
        for z in v.iter_mut() {
            *z = *z / norm;
        }
        project_out(&mut v, &basis);
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        basis.push(v.into_iter().map(|z| z / norm).collect());
    }
    Matrix::from_fn(n, n - start, |i, j| basis[start + j][i])
}

/// Residuals of the five polar identities, each `‖lhs − rhs‖₂ / ‖X‖₂`:
/// `U*X = |X|`, `U*U|X| = |X|`, `U*UX = X`, `X* = |X|U*`, `|X*| = U|X|U*`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolarResiduals<T: Real> {
    pub u_adj_x: T,
    pub u_adj_u_abs: T,
    pub u_adj_u_x: T,
    pub x_adj: T,
    pub abs_adjoint: T,
}

impl<T: Real> PolarResiduals<T> {
    pub fn max(&self) -> T {
        [self.u_adj_x, self.u_adj_u_abs, self.u_adj_u_x, self.x_adj, self.abs_adjoint]
            .into_iter()
            .fold(T::zero(), T::max)
    }
}

///
/// `u` may be either factor of [`PolarParts`]. The third identity needs
/// `range X ⊆ range U*U`, which the canonical partial isometry only satisfies
/// when `range X = range X*`; the unitary factor satisfies all five.
pub fn polar_residuals<T: Real>(x: &Matrix<T>, u: &Matrix<T>, abs: &Matrix<T>) -> Result<PolarResiduals<T>> {
    let norm = hs_norm(x).max(T::min_positive_value());
    let rel = |a: &Matrix<T>, b: &Matrix<T>| hs_norm(&(a - b)) / norm;
    let ua = u.adjoint();
    let uau = &ua * u;
    let abs_star = abs_adjoint(x)?;
    Ok(PolarResiduals {
        u_adj_x: rel(&(&ua * x), abs),
        u_adj_u_abs: rel(&(&uau * abs), abs),
        u_adj_u_x: rel(&(&uau * x), x),
        x_adj: rel(&x.adjoint(), &(abs * &ua)),
        abs_adjoint: rel(&abs_star, &(&(u * abs) * &ua)),
    })
}

/// Closed-form `|A|` for a non-zero 2x2 matrix:
/// `|A| = (√det(A*A)·I + A*A) / √(Tr(A*A) + 2√det(A*A))`.
pub fn franca_abs_2x2<T: Real>(a: &Matrix<T>) -> Result<Matrix<T>> {
    if a.shape() != (2, 2) {
        return Err(Error::Not2x2 {
            op: "franca_abs_2x2",
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if a.is_zero() {
        return Err(Error::ZeroOperand {
            op: "franca_abs_2x2",
            which: "A",
        });
    }
    let gram = &a.adjoint() * a;
    let tr = gram[(0, 0)].re + gram[(1, 1)].re;
    // √det(A*A) = |det A|
    let sqrt_det = (a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)]).norm();
    let denom = (tr + sqrt_det + sqrt_det).sqrt();
    let shifted = &gram + &Matrix::identity(2).scale_real(sqrt_det);
    Ok(shifted.scale_real(denom.recip()).hermitian_part())
}

/// PSD test: Hermitian within `tol (1 + ‖H‖₂)` and the smallest eigenvalue of
/// the Hermitian part at least `−tol (1 + ‖H‖₂)`.
pub fn is_psd<T: Real>(h: &Matrix<T>, tol: T) -> Result<bool> {
    h.require_square("is_psd")?;
    let bound = tol * (T::one() + hs_norm(h));
    if hermitian_defect(h) > bound {
        return Ok(false);
    }
    let eig = hermitian_eig(&h.hermitian_part())?;
    Ok(eig.eigenvalues[0] >= -bound)
}
