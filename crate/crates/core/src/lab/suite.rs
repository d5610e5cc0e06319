//! Randomized driver for the inequality registry.
//!
//! Every trial is a pure function of `(master_seed, id, block, i)`; trials
//! run on the rayon pool and are reduced in trial order, so results do not
//! depend on the thread count.

use std::fmt;
use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::inequality::{check, InequalityId, InequalityReport};
use crate::lab::ensemble::{generate, EnsembleKind, GeneratorSpec, MAX_DIM};
use crate::lab::rng::derive_seed;
use crate::matrix::Matrix;

const TAG_DIM: u64 = 0xD1;
const TAG_X: u64 = 1;
const TAG_Y: u64 = 2;
const TAG_KIND_X: u64 = 3;
const TAG_KIND_Y: u64 = 4;

/// Where the operands of one trial come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairSource {
    /// both operands from one ensemble
    Pure(EnsembleKind),
    /// each operand from an independently drawn ensemble
    Mixed,
}

impl PairSource {
    fn tag(self) -> u64 {
        match self {
            PairSource::Pure(k) => k.index() as u64,
            PairSource::Mixed => 0xFF,
        }
    }
}

impl fmt::Display for PairSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairSource::Pure(k) => write!(f, "{k}"),
            PairSource::Mixed => f.write_str("mixed"),
        }
    }
}

impl Serialize for PairSource {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// One block of trials: an operand source and a dimension range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnsembleSpec {
    pub source: PairSource,
    pub dims: RangeInclusive<usize>,
}

impl EnsembleSpec {
    pub fn new(source: PairSource, dims: RangeInclusive<usize>) -> Self {
        Self { source, dims }
    }

    /// One block per ensemble kind plus a mixed block, all over `dims`.
    pub fn standard(dims: RangeInclusive<usize>) -> Vec<Self> {
        let mut specs: Vec<Self> = EnsembleKind::ALL
            .iter()
            .map(|&k| Self::new(PairSource::Pure(k), dims.clone()))
            .collect();
        specs.push(Self::new(PairSource::Mixed, dims));
        specs
    }

    fn validate(&self) -> Result<()> {
        let (lo, hi) = (*self.dims.start(), *self.dims.end());
        if lo == 0 || hi > MAX_DIM || lo > hi {
            return Err(Error::InvalidSpec(format!(
                "dims {lo}..={hi} must be a nonempty range inside [1, {MAX_DIM}]"
            )));
        }
        Ok(())
    }

    /// Whether this block can feed `id`; R33 takes normal operands only.
    pub fn supports(&self, id: InequalityId) -> bool {
        match self.source {
            PairSource::Pure(k) => !id.needs_normal() || k.is_normal(),
            PairSource::Mixed => true,
        }
    }
}

/// Locates one trial so it can be regenerated on its own.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TrialOrigin {
    pub source: PairSource,
    pub kind_x: EnsembleKind,
    pub kind_y: EnsembleKind,
    pub dim: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub id: InequalityId,
    pub trials: usize,
    pub violations: usize,
    /// smallest `slack / scale` over all trials
    pub worst_slack: f64,
    pub worst_seed: u64,
    pub worst: TrialOrigin,
    pub ensembles: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

fn trial_seed(master_seed: u64, id: InequalityId, source: PairSource, i: usize) -> u64 {
    derive_seed(master_seed, &[id.index() as u64, source.tag(), i as u64])
}

/// Resolves a trial seed into dimension and operand ensembles.
pub fn trial_origin(id: InequalityId, source: PairSource, dims: &RangeInclusive<usize>, seed: u64) -> TrialOrigin {
    let (lo, hi) = (*dims.start(), *dims.end());
    let dim = lo + (derive_seed(seed, &[TAG_DIM]) % (hi - lo + 1) as u64) as usize;
    let (kind_x, kind_y) = match source {
        PairSource::Pure(k) => (k, k),
        PairSource::Mixed => {
            let pool: Vec<EnsembleKind> = EnsembleKind::ALL
                .iter()
                .copied()
                .filter(|k| !id.needs_normal() || k.is_normal())
                .collect();
            let pick = |tag| pool[(derive_seed(seed, &[tag]) % pool.len() as u64) as usize];
            (pick(TAG_KIND_X), pick(TAG_KIND_Y))
        }
    };
    TrialOrigin {
        source,
        kind_x,
        kind_y,
        dim,
        seed,
    }
}

/// The operand pair of one trial.
pub fn trial_pair(origin: &TrialOrigin) -> Result<(Matrix<f64>, Matrix<f64>)> {
    let x = generate(&GeneratorSpec::new(origin.kind_x, origin.dim, derive_seed(origin.seed, &[TAG_X])))?;
    let y = generate(&GeneratorSpec::new(origin.kind_y, origin.dim, derive_seed(origin.seed, &[TAG_Y])))?;
    Ok((x, y))
}

/// Re-runs a single trial, e.g. the worst one of a report.
pub fn replay(id: InequalityId, origin: &TrialOrigin, tol: f64) -> Result<InequalityReport<f64>> {
    let (x, y) = trial_pair(origin)?;
    check(id, &x, &y, tol)
}

struct Outcome {
    rel: f64,
    holds: bool,
    origin: TrialOrigin,
}

/// Runs `trials` pairs from every block of `specs` that supports each id.
pub fn run_property_suite(
    ids: &[InequalityId],
    specs: &[EnsembleSpec],
    trials: usize,
    tol: f64,
    master_seed: u64,
) -> Result<Vec<SuiteReport>> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    if tol.is_nan() || tol <= 0.0 || tol.is_infinite() {
        return Err(Error::InvalidArgument(format!("tol must be positive, got {tol}")));
    }
    if specs.is_empty() {
        return Err(Error::InvalidArgument("no ensembles given".into()));
    }
    for s in specs {
        s.validate()?;
    }

    let mut reports = Vec::with_capacity(ids.len());
    for &id in ids {
        let blocks: Vec<&EnsembleSpec> = specs.iter().filter(|s| s.supports(id)).collect();
        let jobs: Vec<(&EnsembleSpec, usize)> =
            blocks.iter().flat_map(|&b| (0..trials).map(move |i| (b, i))).collect();
        let outcomes: Vec<Outcome> = jobs
            .par_iter()
            .map(|&(block, i)| {
                let seed = trial_seed(master_seed, id, block.source, i);
                let origin = trial_origin(id, block.source, &block.dims, seed);
                let r = replay(id, &origin, tol)?;
                Ok(Outcome {
                    rel: r.relative_slack(),
                    holds: r.holds,
                    origin,
                })
            })
            .collect::<Result<_>>()?;

        // first strict minimum in trial order
        let worst = outcomes
            .iter()
            .reduce(|a, b| if b.rel < a.rel { b } else { a })
            .expect("at least one trial");
        reports.push(SuiteReport {
            id,
            trials: outcomes.len(),
            violations: outcomes.iter().filter(|o| !o.holds).count(),
            worst_slack: worst.rel,
            worst_seed: worst.origin.seed,
            worst: worst.origin,
            ensembles: blocks.iter().map(|b| b.source.to_string()).collect(),
        });
    }
    Ok(reports)
}
