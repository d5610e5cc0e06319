//! One checker per Hilbert–Schmidt norm inequality, plus the identity
//! residuals and the equality condition of the trace inequality.
//!
//! Every checker evaluates both sides of `lhs ≤ rhs` and reports the slack
//! `rhs − lhs`. An inequality holds when `slack ≥ −tol · scale` with
//! `scale = max(|lhs|, |rhs|, 1)`.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geometry::{angle, cos_angle, hs_inner, hs_norm, hs_norm_sqr, norm_product};
use crate::matrix::Matrix;
use crate::scalar::Real;
use crate::spectral::{abs_adjoint, abs_op, is_psd, normality_defect};

/// Default relative tolerance of [`check`].
pub const DEFAULT_TOL: f64 = 1e-9;

/// `√((√2 + 1) / 2) ≈ 1.0986841`, the sharp constant of the sum inequality
/// `‖X + Y‖₂ ≤ c ‖|X| + |Y|‖₂`.
pub fn lee_constant<T: Real>() -> T {
    ((T::SQRT_2() + T::one()) / T::lit(2.0)).sqrt()
}

/// Registry of the checked inequalities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InequalityId {
    /// `|⟨X,Y⟩| ≤ ‖X‖₂‖Y‖₂`
    Cs21,
    /// `|⟨X,Y⟩|² ≤ ⟨|X*|,|Y*|⟩⟨|X|,|Y|⟩`
    T213,
    /// `cos²Θ_{X,Y} ≤ cosΘ_{|X*|,|Y*|} cosΘ_{|X|,|Y|}`
    T214i,
    /// `|cosΘ_{X,Y}| ≤ min{√cosΘ_{|X*|,|Y*|}, √cosΘ_{|X|,|Y|}}`
    T214ii,
    /// `sin²Θ_{|X*|,|Y*|} + sin²Θ_{|X|,|Y|} ≤ 2 sin²Θ_{X,Y}`
    T214iii,
    /// `‖|X*|−|Y*|‖₂² + ‖|X|−|Y|‖₂² ≤ 2‖X−Y‖₂²`
    T31,
    /// `‖|X|−|Y|‖₂ ≤ √2 ‖X−Y‖₂`
    C32,
    /// `‖|X|−|Y|‖₂ ≤ ‖X−Y‖₂` for normal `X`, `Y`
    R33,
    /// `‖X+Y‖₂² ≤ ‖|X*|+|Y*|‖₂ ‖|X|+|Y|‖₂`
    T34,
    /// `‖|X|−|Y|‖₂² ≤ ‖X+Y‖₂ ‖X−Y‖₂`
    T35,
    /// `‖X‖‖Y‖c ≤ c(‖X‖²+‖Y‖²) − ‖X‖‖Y‖c²` with `c = cosΘ_{|X|,|Y|}`
    L31,
    /// `‖|X*|+|Y*|‖₂ ≤ √2 ‖|X|+|Y|‖₂`
    T36,
    /// `2‖X‖‖Y‖c* ≤ ‖X‖²+‖Y‖²+4‖X‖‖Y‖c` with `c* = cosΘ_{|X*|,|Y*|}`, `c = cosΘ_{|X|,|Y|}`
    L32,
    /// `‖X+Y‖₂ ≤ √((√2+1)/2) ‖|X|+|Y|‖₂`
    T37,
}

impl InequalityId {
    pub const ALL: [InequalityId; 14] = [
        InequalityId::Cs21,
        InequalityId::T213,
        InequalityId::T214i,
        InequalityId::T214ii,
        InequalityId::T214iii,
        InequalityId::T31,
        InequalityId::C32,
        InequalityId::R33,
        InequalityId::T34,
        InequalityId::T35,
        InequalityId::L31,
        InequalityId::T36,
        InequalityId::L32,
        InequalityId::T37,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InequalityId::Cs21 => "CS_21",
            InequalityId::T213 => "T213",
            InequalityId::T214i => "T214i",
            InequalityId::T214ii => "T214ii",
            InequalityId::T214iii => "T214iii",
            InequalityId::T31 => "T31",
            InequalityId::C32 => "C32",
            InequalityId::R33 => "R33",
            InequalityId::T34 => "T34",
            InequalityId::T35 => "T35",
            InequalityId::L31 => "L31",
            InequalityId::T36 => "T36",
            InequalityId::L32 => "L32",
            InequalityId::T37 => "T37",
        }
    }

    /// Ids whose statement involves an angle and therefore non-zero operands.
    pub fn needs_angles(self) -> bool {
        matches!(
            self,
            InequalityId::T214i
                | InequalityId::T214ii
                | InequalityId::T214iii
                | InequalityId::L31
                | InequalityId::L32
        )
    }

    /// Ids stated for normal operands only.
    pub fn needs_normal(self) -> bool {
        self == InequalityId::R33
    }

    /// Stable index, used when deriving per-id seeds.
    pub fn index(self) -> usize {
        Self::ALL.iter().position(|&i| i == self).expect("registered id")
    }
}

impl fmt::Display for InequalityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InequalityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownId(s.to_string()))
    }
}

impl Serialize for InequalityId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Both sides of one inequality for one operand pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport<T: Real> {
    pub id: InequalityId,
    pub lhs: T,
    pub rhs: T,
    pub slack: T,
    pub holds: bool,
    pub scale: T,
    pub operands_digest: String,
}

impl<T: Real> InequalityReport<T> {
    fn new(id: InequalityId, lhs: T, rhs: T, tol: T, digest: String) -> Self {
        let slack = rhs - lhs;
        let scale = lhs.abs().max(rhs.abs()).max(T::one());
        Self {
            id,
            lhs,
            rhs,
            slack,
            holds: slack >= -tol * scale,
            scale,
            operands_digest: digest,
        }
    }

    /// `slack / scale`.
    pub fn relative_slack(&self) -> T {
        self.slack / self.scale
    }
}

/// `sha256:` followed by the first 16 hex digits of the SHA-256 of both
/// operands (shape, then the IEEE-754 bits of every entry as `f64`).
pub fn operands_digest<T: Real>(x: &Matrix<T>, y: &Matrix<T>) -> String {
    let mut h = Sha256::new();
    for m in [x, y] {
        h.update((m.rows() as u64).to_le_bytes());
        h.update((m.cols() as u64).to_le_bytes());
        for z in m.as_slice() {
            h.update(z.re.as_f64().to_bits().to_le_bytes());
            h.update(z.im.as_f64().to_bits().to_le_bytes());
        }
    }
    let digest = h.finalize();
    format!("sha256:{}", &hex::encode(digest)[..16])
}

/// Moduli `|X|`, `|Y|`, `|X*|`, `|Y*|`, computed on demand.
struct Moduli<'a, T: Real> {
    x: &'a Matrix<T>,
    y: &'a Matrix<T>,
    right: Option<(Matrix<T>, Matrix<T>)>,
    left: Option<(Matrix<T>, Matrix<T>)>,
}

impl<'a, T: Real> Moduli<'a, T> {
    fn new(x: &'a Matrix<T>, y: &'a Matrix<T>) -> Self {
        Self {
            x,
            y,
            right: None,
            left: None,
        }
    }

    /// `(|X|, |Y|)`
    fn right(&mut self) -> Result<&(Matrix<T>, Matrix<T>)> {
        if self.right.is_none() {
            self.right = Some((abs_op(self.x)?, abs_op(self.y)?));
        }
        Ok(self.right.as_ref().expect("just set"))
    }

    /// `(|X*|, |Y*|)`
    fn left(&mut self) -> Result<&(Matrix<T>, Matrix<T>)> {
        if self.left.is_none() {
            self.left = Some((abs_adjoint(self.x)?, abs_adjoint(self.y)?));
        }
        Ok(self.left.as_ref().expect("just set"))
    }
}

fn require_normal<T: Real>(m: &Matrix<T>, which: &'static str) -> Result<()> {
    let defect = normality_defect(m);
    if defect > T::HERMITIAN_TOL * (T::one() + hs_norm_sqr(m)) {
        return Err(Error::NotNormal {
            op: "check(R33)",
            which,
            defect: defect.as_f64(),
        });
    }
    Ok(())
}

/// Evaluates inequality `id` on the square, equally sized pair `(X, Y)`.
///
/// Angle-based ids with a zero operand are reported as holding with
/// `lhs = rhs = 0`; the remaining ids are evaluated as stated.
pub fn check<T: Real>(id: InequalityId, x: &Matrix<T>, y: &Matrix<T>, tol: T) -> Result<InequalityReport<T>> {
    x.require_square("check")?;
    x.require_same_shape(y, "check")?;
    let digest = operands_digest(x, y);
    let nx = hs_norm(x);
    let ny = hs_norm(y);
    let zero_operand = nx == T::zero() || ny == T::zero();
    if id.needs_angles() && zero_operand {
        return Ok(InequalityReport::new(id, T::zero(), T::zero(), tol, digest));
    }
    if id.needs_normal() {
        require_normal(x, "X")?;
        require_normal(y, "Y")?;
    }

    let two = T::lit(2.0);
    let four = T::lit(4.0);
    let mut moduli = Moduli::new(x, y);
    let (lhs, rhs) = match id {
        InequalityId::Cs21 => (hs_inner(x, y)?.norm(), norm_product(hs_norm_sqr(x), hs_norm_sqr(y))),
        InequalityId::T213 => {
            let lhs = hs_inner(x, y)?.norm_sqr();
            let r = {
                let (ax, ay) = moduli.right()?;
                hs_inner(ax, ay)?.re
            };
            let (axs, ays) = moduli.left()?;
            (lhs, hs_inner(axs, ays)?.re * r)
        }
        InequalityId::T214i | InequalityId::T214ii | InequalityId::T214iii => {
            let base = angle(x, y)?;
            let right = {
                let (ax, ay) = moduli.right()?;
                angle(ax, ay)?
            };
            let left = {
                let (axs, ays) = moduli.left()?;
                angle(axs, ays)?
            };
            match id {
                InequalityId::T214i => (base.cos * base.cos, left.cos * right.cos),
                InequalityId::T214ii => (
                    base.cos.abs(),
                    left.cos.max(T::zero()).sqrt().min(right.cos.max(T::zero()).sqrt()),
                ),
                _ => (
                    left.sin * left.sin + right.sin * right.sin,
                    two * base.sin * base.sin,
                ),
            }
        }
        InequalityId::T31 => {
            let diff = hs_norm_sqr(&(x - y));
            let r = {
                let (ax, ay) = moduli.right()?;
                hs_norm_sqr(&(ax - ay))
            };
            let (axs, ays) = moduli.left()?;
            (hs_norm_sqr(&(axs - ays)) + r, two * diff)
        }
        InequalityId::C32 | InequalityId::R33 => {
            let (ax, ay) = moduli.right()?;
            let lhs = hs_norm(&(ax - ay));
            let d = hs_norm(&(x - y));
            if id == InequalityId::C32 {
                (lhs, T::SQRT_2() * d)
            } else {
                (lhs, d)
            }
        }
        InequalityId::T34 => {
            let lhs = hs_norm_sqr(&(x + y));
            let r = {
                let (ax, ay) = moduli.right()?;
                hs_norm(&(ax + ay))
            };
            let (axs, ays) = moduli.left()?;
            (lhs, hs_norm(&(axs + ays)) * r)
        }
        InequalityId::T35 => {
            let (ax, ay) = moduli.right()?;
            (hs_norm_sqr(&(ax - ay)), hs_norm(&(x + y)) * hs_norm(&(x - y)))
        }
        InequalityId::L31 => {
            let (ax, ay) = moduli.right()?;
            let c = cos_angle(ax, ay)?;
            let p = nx * ny;
            (p * c, c * (nx * nx + ny * ny) - p * c * c)
        }
        InequalityId::T36 => {
            let r = {
                let (ax, ay) = moduli.right()?;
                hs_norm(&(ax + ay))
            };
            let (axs, ays) = moduli.left()?;
            (hs_norm(&(axs + ays)), T::SQRT_2() * r)
        }
        InequalityId::L32 => {
            let c = {
                let (ax, ay) = moduli.right()?;
                cos_angle(ax, ay)?
            };
            let (axs, ays) = moduli.left()?;
            let cs = cos_angle(axs, ays)?;
            let p = nx * ny;
            (two * p * cs, nx * nx + ny * ny + four * p * c)
        }
        InequalityId::T37 => {
            let (ax, ay) = moduli.right()?;
            (hs_norm(&(x + y)), lee_constant::<T>() * hs_norm(&(ax + ay)))
        }
    };
    if !lhs.is_finite() || !rhs.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "check({id}): non-finite side (lhs = {lhs}, rhs = {rhs})"
        )));
    }
    Ok(InequalityReport::new(id, lhs, rhs, tol, digest))
}

fn require_conformable<T: Real>(ms: [&Matrix<T>; 3], op: &'static str) -> Result<()> {
    ms[0].require_square(op)?;
    ms[0].require_same_shape(ms[1], op)?;
    ms[0].require_same_shape(ms[2], op)
}

/// Relative residual `|L − R| / (1 + L)` of the identity
/// `‖XZ−ZY‖² + ‖X*Z‖² + ‖ZY*‖² = ‖XZ‖² + ‖ZY‖² + ‖X*Z−ZY*‖²`.
pub fn fp_identity_residual<T: Real>(x: &Matrix<T>, y: &Matrix<T>, z: &Matrix<T>) -> Result<T> {
    require_conformable([x, y, z], "fp_identity_residual")?;
    let (xa, ya) = (x.adjoint(), y.adjoint());
    let (xz, zy, xaz, zya) = (x * z, z * y, &xa * z, z * &ya);
    let lhs = hs_norm_sqr(&(&xz - &zy)) + hs_norm_sqr(&xaz) + hs_norm_sqr(&zya);
    let rhs = hs_norm_sqr(&xz) + hs_norm_sqr(&zy) + hs_norm_sqr(&(&xaz - &zya));
    Ok((lhs - rhs).abs() / (T::one() + lhs))
}

/// `(‖XZ − ZY‖₂, ‖X*Z − ZY*‖₂)`; equal whenever `X` and `Y` are normal.
pub fn fuglede_putnam_norms<T: Real>(x: &Matrix<T>, y: &Matrix<T>, z: &Matrix<T>) -> Result<(T, T)> {
    require_conformable([x, y, z], "fuglede_putnam_norms")?;
    let a = hs_norm(&(&(x * z) - &(z * y)));
    let b = hs_norm(&(&(&x.adjoint() * z) - &(z * &y.adjoint())));
    Ok((a, b))
}

/// Residual of `‖XZ‖‖ZY‖cosΘ_{XZ,ZY} = ‖X*Z‖‖ZY*‖cosΘ_{X*Z,ZY*}`, as
/// `|difference| / (1 + max(|lhs|, |rhs|))`.
///
/// Fails with [`Error::Degenerate`] when one of the four products vanishes.
pub fn angle_link_2_2_residual<T: Real>(x: &Matrix<T>, y: &Matrix<T>, z: &Matrix<T>) -> Result<T> {
    const OP: &str = "angle_link_2_2_residual";
    require_conformable([x, y, z], OP)?;
    let (xz, zy) = (x * z, z * y);
    let (xaz, zya) = (&x.adjoint() * z, z * &y.adjoint());
    if [&xz, &zy, &xaz, &zya].iter().any(|m| m.is_zero()) {
        return Err(Error::Degenerate {
            op: OP,
            reason: "one of XZ, ZY, X*Z, ZY* is zero",
        });
    }
    let a = angle(&xz, &zy)?;
    let b = angle(&xaz, &zya)?;
    let lhs = a.norm_x * a.norm_y * a.cos;
    let rhs = b.norm_x * b.norm_y * b.cos;
    Ok((lhs - rhs).abs() / (T::one() + lhs.abs().max(rhs.abs())))
}

/// Slacks of the angle triangle inequalities, both `≥ 0` in exact arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TriangleSlack<T: Real> {
    /// `sinΘ_{X,Z} + sinΘ_{Z,Y} − sinΘ_{X,Y}`
    pub sin: T,
    /// `Θ_{X,Z} + Θ_{Z,Y} − Θ_{X,Y}`
    pub theta: T,
}

pub fn angle_triangle_slack<T: Real>(x: &Matrix<T>, y: &Matrix<T>, z: &Matrix<T>) -> Result<TriangleSlack<T>> {
    let xy = angle(x, y)?;
    let xz = angle(x, z)?;
    let zy = angle(z, y)?;
    Ok(TriangleSlack {
        sin: xz.sin + zy.sin - xy.sin,
        theta: xz.theta() + zy.theta() - xy.theta(),
    })
}

/// Equality condition of `|⟨X,Y⟩|² ≤ ⟨|X*|,|Y*|⟩⟨|X|,|Y|⟩`: whether `ζ Y*X` is
/// PSD for some scalar `ζ`.
///
/// A PSD matrix has real non-negative trace, so the only candidate phase is
/// `ζ = conj(Tr P) / |Tr P|` with `P = Y*X`. When `Tr P` vanishes (relative to
/// `‖X‖₂‖Y‖₂`) the condition reduces to `P = 0`.
pub fn equality_holds_2_13<T: Real>(x: &Matrix<T>, y: &Matrix<T>, tol: T) -> Result<bool> {
    x.require_square("equality_holds_2_13")?;
    x.require_same_shape(y, "equality_holds_2_13")?;
    let p = &y.adjoint() * x;
    let tr = p.trace()?;
    let size = hs_norm(x) * hs_norm(y);
    if tr.norm() <= tol * size {
        return Ok(hs_norm(&p) <= tol * (T::one() + size));
    }
    let zeta = tr.conj() / tr.norm();
    is_psd(&p.scale(zeta), tol)
}
