#![allow(dead_code)]

use std::ops::RangeInclusive;

use hsangle::lab::{generate, EnsembleKind, GeneratorSpec};
use hsangle::{Complex64, ComplexMatrix};
use proptest::prelude::*;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn from_flat(n: usize, v: &[(f64, f64)]) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |i, j| {
        let (a, b) = v[i * n + j];
        c(a, b)
    })
}

/// `k` square matrices of one random size in `dims`, entries in `[-2, 2]²`.
pub fn matrices(dims: RangeInclusive<usize>, k: usize) -> impl Strategy<Value = Vec<ComplexMatrix>> {
    dims.prop_flat_map(move |n| {
        prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), k * n * n).prop_map(move |v| {
            v.chunks(n * n).map(|ch| from_flat(n, ch)).collect::<Vec<_>>()
        })
    })
}

/// `k` matrices of one size drawn from the seeded ensembles.
pub fn ensemble_matrices(dims: RangeInclusive<usize>, k: usize) -> impl Strategy<Value = Vec<ComplexMatrix>> {
    (dims, prop::collection::vec((0..EnsembleKind::ALL.len(), any::<u64>()), k)).prop_map(|(n, picks)| {
        picks
            .into_iter()
            .map(|(kind, seed)| generate(&GeneratorSpec::new(EnsembleKind::ALL[kind], n, seed)).unwrap())
            .collect()
    })
}

pub fn nonzero(m: &ComplexMatrix) -> bool {
    !m.is_zero()
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}
