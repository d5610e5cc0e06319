//! Seeded random matrix ensembles.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lab::rng::SplitMix64;
use crate::matrix::Matrix;

pub const MAX_DIM: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleKind {
    /// i.i.d. standard complex Gaussian entries
    Ginibre,
    /// `(G + G*) / 2`
    Hermitian,
    /// `V diag(z) V*`, `V` Haar unitary, `z` complex Gaussian
    Normal,
    /// `G*G / n`
    Psd,
    /// `A B` with `A` of size `n x r`, `B` of size `r x n`, `r = ⌈n/2⌉`
    RankDeficient,
    /// Haar unitary
    Unitary,
}

impl EnsembleKind {
    pub const ALL: [EnsembleKind; 6] = [
        EnsembleKind::Ginibre,
        EnsembleKind::Hermitian,
        EnsembleKind::Normal,
        EnsembleKind::Psd,
        EnsembleKind::RankDeficient,
        EnsembleKind::Unitary,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EnsembleKind::Ginibre => "ginibre",
            EnsembleKind::Hermitian => "hermitian",
            EnsembleKind::Normal => "normal",
            EnsembleKind::Psd => "psd",
            EnsembleKind::RankDeficient => "rank_deficient",
            EnsembleKind::Unitary => "unitary",
        }
    }

    /// Whether every sample is a normal matrix.
    pub fn is_normal(self) -> bool {
        !matches!(self, EnsembleKind::Ginibre | EnsembleKind::RankDeficient)
    }

    pub fn index(self) -> usize {
        Self::ALL.iter().position(|&k| k == self).expect("registered kind")
    }
}

impl fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EnsembleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown ensemble `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: EnsembleKind,
    pub dim: usize,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(kind: EnsembleKind, dim: usize, seed: u64) -> Self {
        Self { kind, dim, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=MAX_DIM).contains(&self.dim) {
            return Err(Error::InvalidSpec(format!(
                "dim must lie in [1, {MAX_DIM}], got {}",
                self.dim
            )));
        }
        Ok(())
    }
}

fn ginibre(rows: usize, cols: usize, rng: &mut SplitMix64) -> Matrix<f64> {
    Matrix::from_fn(rows, cols, |_, _| rng.complex_gaussian())
}

/// Orthonormalizes the columns of a square matrix by modified Gram–Schmidt,
/// run twice. The implied `R` has a positive diagonal, which is the phase
/// normalization that makes `Q` Haar distributed for Ginibre input.
pub fn gram_schmidt_q(g: &Matrix<f64>) -> Matrix<f64> {
    let n = g.rows();
    let mut cols: Vec<Vec<_>> = (0..g.cols()).map(|j| (0..n).map(|i| g[(i, j)]).collect()).collect();
    for j in 0..cols.len() {
        for _ in 0..2 {
            for k in 0..j {
                let (done, rest) = cols.split_at_mut(j);
                let qk = &done[k];
                let v = &mut rest[0];
                let coef = qk.iter().zip(v.iter()).fold(num_complex::Complex::new(0.0, 0.0), |acc, (a, b)| acc + a.conj() * b);
                for (vi, qi) in v.iter_mut().zip(qk) {
                    *vi -= qi * coef;
                }
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in cols[j].iter_mut() {
            *z /= norm;
        }
    }
    Matrix::from_fn(n, cols.len(), |i, j| cols[j][i])
}

/// Draws one matrix; deterministic in `spec`.
pub fn generate(spec: &GeneratorSpec) -> Result<Matrix<f64>> {
    spec.validate()?;
    let n = spec.dim;
    let mut rng = SplitMix64::new(spec.seed);
    let m = match spec.kind {
        EnsembleKind::Ginibre => ginibre(n, n, &mut rng),
        EnsembleKind::Hermitian => ginibre(n, n, &mut rng).hermitian_part(),
        EnsembleKind::Normal => {
            let v = gram_schmidt_q(&ginibre(n, n, &mut rng));
            let d: Vec<_> = (0..n).map(|_| rng.complex_gaussian()).collect();
            &(&v * &Matrix::diag(&d)) * &v.adjoint()
        }
        EnsembleKind::Psd => {
            let g = ginibre(n, n, &mut rng);
            (&g.adjoint() * &g).scale_real(1.0 / n as f64).hermitian_part()
        }
        EnsembleKind::RankDeficient => {
            let r = n.div_ceil(2);
            let a = ginibre(n, r, &mut rng);
            let b = ginibre(r, n, &mut rng);
            (&a * &b).scale_real(1.0 / (r as f64).sqrt())
        }
        EnsembleKind::Unitary => gram_schmidt_q(&ginibre(n, n, &mut rng)),
    };
    Ok(m)
}
