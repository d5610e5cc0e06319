//! Seeded ensembles, the randomized property driver, the sharpness scanner
//! and the explicit witness reproduction.

pub mod ensemble;
pub mod repro;
pub mod rng;
pub mod scan;
pub mod suite;

pub use ensemble::{generate, EnsembleKind, GeneratorSpec};
pub use repro::{repro_remark_3_8, ReproReport};
pub use rng::{derive_seed, SplitMix64};
pub use scan::{ratio, ratio_target, sharpness_scan, ScanResult};
pub use suite::{run_property_suite, EnsembleSpec, PairSource, SuiteReport};
