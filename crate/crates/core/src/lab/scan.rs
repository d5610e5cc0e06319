//! Hill-climbing search for pairs that push a ratio form towards its
//! sharp constant.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::hs_norm;
use crate::inequality::{lee_constant, InequalityId};
use crate::lab::ensemble::{gram_schmidt_q, MAX_DIM};
use crate::lab::rng::{derive_seed, SplitMix64};
use crate::matrix::Matrix;
use crate::spectral::{abs_adjoint, abs_op, gram_eig, polar};
use num_complex::Complex;

const INITIAL_STEP: f64 = 0.1;
const MAX_REJECTIONS: u32 = 50;
const MIN_STEP: f64 = 1e-8;
const RENORMALIZE_EVERY: u64 = 100;
const RESTART_KICK: f64 = 0.1;
const WARM_START_NOISE: f64 = 0.1;

/// Ids that have a ratio form `lhs/rhs` with a known sharp constant.
pub fn ratio_target(id: InequalityId) -> Option<f64> {
    match id {
        InequalityId::T37 => Some(lee_constant::<f64>()),
        InequalityId::T36 | InequalityId::C32 => Some(std::f64::consts::SQRT_2),
        InequalityId::R33 => Some(1.0),
        _ => None,
    }
}

/// The ratio whose supremum is the sharp constant of `id`:
///
/// * T37: `‖X+Y‖ / ‖|X|+|Y|‖`
/// * T36: `‖|X*|+|Y*|‖ / ‖|X|+|Y|‖`
/// * C32, R33: `‖|X|−|Y|‖ / ‖X−Y‖`
///
/// `None` when the denominator vanishes.
pub fn ratio(id: InequalityId, x: &Matrix<f64>, y: &Matrix<f64>) -> Result<Option<f64>> {
    ratio_target(id).ok_or_else(|| Error::NoRatioForm(id.to_string()))?;
    x.require_square("ratio")?;
    x.require_same_shape(y, "ratio")?;
    let (num, den) = match id {
        InequalityId::T37 => (hs_norm(&(x + y)), hs_norm(&(&abs_op(x)? + &abs_op(y)?))),
        InequalityId::T36 => (
            hs_norm(&(&abs_adjoint(x)? + &abs_adjoint(y)?)),
            hs_norm(&(&abs_op(x)? + &abs_op(y)?)),
        ),
        _ => (hs_norm(&(&abs_op(x)? - &abs_op(y)?)), hs_norm(&(x - y))),
    };
    Ok((den > 0.0).then(|| num / den))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub x: Matrix<f64>,
    pub y: Matrix<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanResult {
    pub id: InequalityId,
    pub dim: usize,
    pub best_ratio: f64,
    pub target: f64,
    pub witness: Witness,
    pub iterations: u64,
    pub restarts: u64,
}

impl ScanResult {
    /// `best_ratio / target`.
    pub fn attained(&self) -> f64 {
        self.best_ratio / self.target
    }

    /// True if the ratio went above the constant by more than `rel`.
    pub fn exceeds_target(&self, rel: f64) -> bool {
        self.best_ratio > self.target * (1.0 + rel)
    }
}

/// How a pair is laid out as a flat real vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Parametrization {
    /// real and imaginary parts of every entry of `X`, then of `Y`
    Entries,
    /// `Q(G) diag(s) Q(H)*` per operand with real `s`; `Q(·)` is the
    /// Gram–Schmidt factor of a free complex matrix. Rank deficiency is the
    /// coordinate hyperplane `s_k = 0`, which suits coordinate search.
    #[default]
    Factored,
}

/// Flat real parametrization of a pair. R33 always searches normal pairs
/// `Q(G) diag(d) Q(G)*` with complex `d`.
struct Param {
    id: InequalityId,
    dim: usize,
    layout: Parametrization,
}

impl Param {
    fn operand_len(&self) -> usize {
        let n = self.dim;
        match (self.id, self.layout) {
            (InequalityId::R33, _) => 2 * n * n + 2 * n,
            (_, Parametrization::Entries) => 2 * n * n,
            (_, Parametrization::Factored) => 4 * n * n + n,
        }
    }

    fn len(&self) -> usize {
        2 * self.operand_len()
    }

    fn complex(p: &[f64], k: usize) -> Complex<f64> {
        Complex::new(p[2 * k], p[2 * k + 1])
    }

    fn free(p: &[f64], n: usize) -> Matrix<f64> {
        Matrix::from_fn(n, n, |i, j| Self::complex(p, i * n + j))
    }

    fn decode_one(&self, q: &[f64]) -> Matrix<f64> {
        let n = self.dim;
        let m = 2 * n * n;
        if self.id == InequalityId::R33 {
            let v = gram_schmidt_q(&Self::free(q, n));
            let d: Vec<_> = (0..n).map(|k| Self::complex(q, n * n + k)).collect();
            return &(&v * &Matrix::diag(&d)) * &v.adjoint();
        }
        match self.layout {
            Parametrization::Entries => Self::free(q, n),
            Parametrization::Factored => {
                let u = gram_schmidt_q(&Self::free(q, n));
                let v = gram_schmidt_q(&Self::free(&q[m..], n));
                &(&u * &Matrix::diag_real(&q[2 * m..2 * m + n])) * &v.adjoint()
            }
        }
    }

    fn decode(&self, p: &[f64]) -> (Matrix<f64>, Matrix<f64>) {
        let half = self.operand_len();
        (self.decode_one(&p[..half]), self.decode_one(&p[half..]))
    }

    fn eval(&self, p: &[f64]) -> f64 {
        let (x, y) = self.decode(p);
        match ratio(self.id, &x, &y) {
            Ok(Some(r)) if r.is_finite() => r,
            _ => f64::NEG_INFINITY,
        }
    }
}

fn random_point(rng: &mut SplitMix64, len: usize) -> Vec<f64> {
    let mut p: Vec<f64> = (0..len).map(|_| rng.gaussian()).collect();
    normalize(&mut p);
    p
}

/// Joint rescaling to unit Euclidean norm. Every ratio is invariant under
/// `(X, Y) -> (cX, cY)` with `c > 0`, so this only counters drift.
fn normalize(p: &mut [f64]) {
    let n = p.iter().map(|v| v * v).sum::<f64>().sqrt();
    if n > 0.0 {
        p.iter_mut().for_each(|v| *v /= n);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanOptions {
    /// Start the first climb from a perturbed copy of a known maximizing
    /// 2x2 pair (T36 and T37 only, embedded in the top-left block).
    pub warm_start: bool,
    pub parametrization: Parametrization,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            warm_start: false,
            parametrization: Parametrization::Factored,
        }
    }
}

/// Known maximizing pairs in parameter form, or `None`.
fn known_maximizer(id: InequalityId, dim: usize, layout: Parametrization) -> Option<Vec<f64>> {
    use crate::lab::repro::witnesses;
    if dim < 2 {
        return None;
    }
    let (x, y, z) = witnesses();
    let (a, b) = match id {
        InequalityId::T37 => (x, z),
        InequalityId::T36 => (x, y),
        _ => return None,
    };
    let embed = |m: &Matrix<f64>| {
        Matrix::from_fn(dim, dim, |i, j| if i < 2 && j < 2 { m[(i, j)] } else { Complex::new(0.0, 0.0) })
    };
    let mut p = Vec::new();
    for m in [embed(&a), embed(&b)] {
        push_operand(&mut p, &m, layout)?;
    }
    Some(p)
}

fn push_complex(p: &mut Vec<f64>, m: &Matrix<f64>) {
    for z in m.as_slice() {
        p.push(z.re);
        p.push(z.im);
    }
}

/// Appends the parameters of `m`: entries, or `(U V, V, σ)` from
/// `m = U|m|` and `|m| = V diag(σ) V*`.
fn push_operand(p: &mut Vec<f64>, m: &Matrix<f64>, layout: Parametrization) -> Option<()> {
    match layout {
        Parametrization::Entries => push_complex(p, m),
        Parametrization::Factored => {
            let g = gram_eig(m).ok()?;
            let u = polar(m).ok()?.unitary;
            push_complex(p, &(&u * &g.v));
            push_complex(p, &g.v);
            p.extend_from_slice(&g.singular_values);
        }
    }
    Some(())
}

/// Maximizes the ratio form of `id` over `dim x dim` pairs using
/// `iterations` ratio evaluations, with [`ScanOptions::default`].
pub fn sharpness_scan(id: InequalityId, dim: usize, iterations: u64, master_seed: u64) -> Result<ScanResult> {
    sharpness_scan_with(id, dim, iterations, master_seed, ScanOptions::default())
}

/// Random restarts feed a coordinate-wise hill climb: one coordinate gets a
/// Gaussian kick scaled by the current step, improvements are kept, the step
/// halves after 50 consecutive rejections and the climb restarts once the
/// step falls below `1e-8`. Restarts alternate between fresh random points
/// and perturbations of the best pair found so far.
pub fn sharpness_scan_with(
    id: InequalityId,
    dim: usize,
    iterations: u64,
    master_seed: u64,
    options: ScanOptions,
) -> Result<ScanResult> {
    let target = ratio_target(id).ok_or_else(|| Error::NoRatioForm(id.to_string()))?;
    if !(1..=MAX_DIM).contains(&dim) {
        return Err(Error::InvalidArgument(format!("dim must lie in [1, {MAX_DIM}], got {dim}")));
    }
    if iterations == 0 {
        return Err(Error::InvalidArgument("iterations must be at least 1".into()));
    }
    let param = Param {
        id,
        dim,
        layout: options.parametrization,
    };
    let len = param.len();
    let mut rng = SplitMix64::new(derive_seed(master_seed, &[id.index() as u64, dim as u64]));

    let mut cur = match known_maximizer(id, dim, options.parametrization).filter(|_| options.warm_start) {
        Some(w) => {
            let mut p: Vec<f64> = w.iter().map(|v| v + WARM_START_NOISE * rng.gaussian()).collect();
            normalize(&mut p);
            p
        }
        None => random_point(&mut rng, len),
    };
    let mut cur_val = param.eval(&cur);
    let mut best = cur.clone();
    let mut best_val = cur_val;
    let mut step = INITIAL_STEP;
    let mut rejections = 0;
    let mut restarts = 0u64;
    let mut done = 1u64;

    while done < iterations {
        if step < MIN_STEP {
            // every fourth restart is a fresh point; the others kick the best
            // pair so far with sizes cycling through 1e-1, 1e-2, 1e-3
            cur = if restarts % 4 == 3 {
                random_point(&mut rng, len)
            } else {
                let kick = RESTART_KICK.powi(restarts as i32 % 4 + 1);
                let mut p: Vec<f64> = best.iter().map(|v| v + kick * rng.gaussian()).collect();
                normalize(&mut p);
                p
            };
            cur_val = param.eval(&cur);
            done += 1;
            step = INITIAL_STEP;
            rejections = 0;
            restarts += 1;
        } else {
            let k = rng.below(len as u64) as usize;
            let old = cur[k];
            cur[k] += step * rng.gaussian();
            let val = param.eval(&cur);
            done += 1;
            if val > cur_val {
                cur_val = val;
                rejections = 0;
            } else {
                cur[k] = old;
                rejections += 1;
                if rejections >= MAX_REJECTIONS {
                    step *= 0.5;
                    rejections = 0;
                }
            }
            if done.is_multiple_of(RENORMALIZE_EVERY) {
                normalize(&mut cur);
            }
        }
        if cur_val > best_val {
            best_val = cur_val;
            best.clone_from(&cur);
        }
    }

    let (x, y) = param.decode(&best);
    // report the ratio of the decoded witness itself
    let best_ratio = ratio(id, &x, &y)?.unwrap_or(f64::NEG_INFINITY);
    Ok(ScanResult {
        id,
        dim,
        best_ratio,
        target,
        witness: Witness { x, y },
        iterations,
        restarts,
    })
}
