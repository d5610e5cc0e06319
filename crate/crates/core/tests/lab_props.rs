use hsangle::inequality::InequalityId;
use hsangle::lab::scan::{ratio, sharpness_scan, sharpness_scan_with, Parametrization, ScanOptions};
use hsangle::lab::suite::{replay, run_property_suite, EnsembleSpec, PairSource};
use hsangle::lab::{generate, EnsembleKind, GeneratorSpec, SplitMix64};
use hsangle::Error;

fn in_pool<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
}

#[test]
fn cauchy_schwarz_on_ginibre_pairs() {
    let specs = [EnsembleSpec::new(PairSource::Pure(EnsembleKind::Ginibre), 4..=4)];
    let r = &run_property_suite(&[InequalityId::Cs21], &specs, 10_000, 1e-9, 1).unwrap()[0];
    assert_eq!(r.trials, 10_000);
    assert_eq!(r.violations, 0);
}

#[test]
fn sum_of_moduli_bound_on_mixed_pairs() {
    let specs = [EnsembleSpec::new(PairSource::Mixed, 1..=8)];
    let r = &run_property_suite(&[InequalityId::T37], &specs, 10_000, 1e-9, 2).unwrap()[0];
    assert_eq!(r.violations, 0);
    assert!(r.worst_slack >= 0.0, "{r:?}");
}

#[test]
fn sine_bound_on_all_ensembles() {
    let specs = EnsembleSpec::standard(1..=8);
    let r = &run_property_suite(&[InequalityId::T214iii], &specs, 2_000, 1e-9, 3).unwrap()[0];
    assert_eq!(r.trials, 14_000);
    assert_eq!(r.violations, 0);
}

#[test]
fn report_is_independent_of_thread_count() {
    let specs = EnsembleSpec::standard(1..=6);
    let ids = [InequalityId::T31, InequalityId::T36, InequalityId::R33];
    let one = in_pool(1, || run_property_suite(&ids, &specs, 200, 1e-9, 42).unwrap());
    let four = in_pool(4, || run_property_suite(&ids, &specs, 200, 1e-9, 42).unwrap());
    assert_eq!(
        serde_json::to_string(&one).unwrap(),
        serde_json::to_string(&four).unwrap()
    );
}

#[test]
fn worst_trial_replays_exactly() {
    let specs = EnsembleSpec::standard(1..=8);
    for r in run_property_suite(&InequalityId::ALL, &specs, 100, 1e-9, 9).unwrap() {
        let again = replay(r.id, &r.worst, 1e-9).unwrap();
        assert_eq!(again.relative_slack().to_bits(), r.worst_slack.to_bits(), "{}", r.id);
        assert_eq!(r.worst.seed, r.worst_seed);
    }
}

#[test]
fn unknown_dims_and_zero_trials_are_errors() {
    let specs = EnsembleSpec::standard(1..=70);
    assert!(matches!(
        run_property_suite(&[InequalityId::T31], &specs, 10, 1e-9, 0),
        Err(Error::InvalidSpec(_))
    ));
    assert!(run_property_suite(&[InequalityId::T31], &EnsembleSpec::standard(1..=2), 0, 1e-9, 0).is_err());
}

#[test]
fn scans_never_exceed_proved_constants() {
    for id in [InequalityId::T36, InequalityId::T37, InequalityId::C32, InequalityId::R33] {
        for dim in [1, 2, 3] {
            for layout in [Parametrization::Factored, Parametrization::Entries] {
                let options = ScanOptions {
                    warm_start: false,
                    parametrization: layout,
                };
                let r = sharpness_scan_with(id, dim, 3_000, 11, options).unwrap();
                assert!(!r.exceeds_target(1e-9), "{id} dim {dim}: {}", r.best_ratio);
            }
        }
    }
}

#[test]
fn scalar_sum_ratio_is_at_most_one() {
    let r = sharpness_scan(InequalityId::T37, 1, 1_000, 5).unwrap();
    assert!(r.best_ratio <= 1.0 + 1e-9);
}

#[test]
fn scan_is_deterministic_and_witness_is_consistent() {
    let a = sharpness_scan(InequalityId::T37, 2, 5_000, 77).unwrap();
    let b = sharpness_scan(InequalityId::T37, 2, 5_000, 77).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    let r = ratio(a.id, &a.witness.x, &a.witness.y).unwrap().unwrap();
    assert_eq!(r, a.best_ratio);
}

#[test]
fn warm_start_is_at_least_as_good_early() {
    let options = ScanOptions {
        warm_start: true,
        parametrization: Parametrization::Entries,
    };
    let r = sharpness_scan_with(InequalityId::T36, 2, 20_000, 3, options).unwrap();
    assert!(r.attained() >= 0.99, "{}", r.attained());
}

#[test]
fn scan_rejects_ids_without_ratio() {
    for id in [InequalityId::Cs21, InequalityId::T213, InequalityId::L31] {
        assert!(matches!(sharpness_scan(id, 2, 10, 0), Err(Error::NoRatioForm(_))));
    }
}

#[test]
fn generator_streams_are_stable() {
    // pins the stream so that reports stay comparable across releases
    let mut r = SplitMix64::new(0);
    assert_eq!(r.next_u64(), 0xE220_A839_7B1D_CDAF);
    let g = generate(&GeneratorSpec::new(EnsembleKind::Ginibre, 1, 0)).unwrap();
    let again = generate(&GeneratorSpec::new(EnsembleKind::Ginibre, 1, 0)).unwrap();
    assert_eq!(g, again);
}
