//! Acceptance run: each criterion prints one PASS/FAIL line; the process
//! fails if any criterion does.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hsangle::geometry::{angle, cos_angle, hs_inner, hs_norm, is_weak_orthogonal, is_weak_parallel, sin_angle};
use hsangle::inequality::{
    angle_link_2_2_residual, angle_triangle_slack, check, equality_holds_2_13, fp_identity_residual,
    fuglede_putnam_norms, InequalityId,
};
use hsangle::lab::repro::repro_remark_3_8;
use hsangle::lab::scan::sharpness_scan;
use hsangle::lab::suite::{run_property_suite, EnsembleSpec};
use hsangle::lab::{derive_seed, generate, EnsembleKind, GeneratorSpec, SplitMix64};
use hsangle::spectral::{abs_adjoint, abs_op, franca_abs_2x2, polar, polar_residuals};
use hsangle::{Complex64, ComplexMatrix, Error};

const MASTER: u64 = 20_240_229;
const RANDOM_CASES: u64 = 10_000;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Draws `k` operands of one dimension in `1..=8`; kinds are drawn from `pool`.
fn operands(tag: u64, i: u64, k: usize, pool: &[EnsembleKind]) -> Vec<ComplexMatrix> {
    let seed = derive_seed(MASTER, &[tag, i]);
    let dim = 1 + (derive_seed(seed, &[0]) % 8) as usize;
    (0..k as u64)
        .map(|j| {
            let kind = pool[(derive_seed(seed, &[1, j]) % pool.len() as u64) as usize];
            generate(&GeneratorSpec::new(kind, dim, derive_seed(seed, &[2, j]))).unwrap()
        })
        .collect()
}

const NORMAL_KINDS: [EnsembleKind; 4] = [
    EnsembleKind::Normal,
    EnsembleKind::Hermitian,
    EnsembleKind::Psd,
    EnsembleKind::Unitary,
];

fn witness_reproduction() -> Outcome {
    let t = Instant::now();
    let r = repro_remark_3_8();
    let elapsed = t.elapsed();
    for q in &r.quantities {
        ensure(q.ok, || format!("{} = {:.17e}, target {:.17e}", q.name, q.value, q.target))?;
    }
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    let worst = r.quantities.iter().map(|q| q.deviation).fold(0.0, f64::max);
    Ok(format!("4 quantities, max deviation {worst:.1e}, {elapsed:.2?}"))
}

fn inequality_suite() -> Outcome {
    let specs = EnsembleSpec::standard(1..=8);
    let reports = run_property_suite(&InequalityId::ALL, &specs, 10_000, 1e-9, MASTER).map_err(|e| e.to_string())?;
    let mut total = 0;
    for r in &reports {
        total += r.trials;
        ensure(r.violations == 0, || {
            format!("{}: {} violations, worst relative slack {:e}", r.id, r.violations, r.worst_slack)
        })?;
    }
    let worst = reports
        .iter()
        .min_by(|a, b| a.worst_slack.total_cmp(&b.worst_slack))
        .expect("14 reports");
    Ok(format!(
        "{} ids, {total} trials, 0 violations; tightest {} at relative slack {:.2e}",
        reports.len(),
        worst.id,
        worst.worst_slack
    ))
}

fn identity_checks() -> Outcome {
    let (mut fp, mut link, mut degenerate) = (0.0f64, 0.0f64, 0);
    for i in 0..RANDOM_CASES {
        let m = operands(3, i, 3, &EnsembleKind::ALL);
        fp = fp.max(fp_identity_residual(&m[0], &m[1], &m[2]).unwrap());
        match angle_link_2_2_residual(&m[0], &m[1], &m[2]) {
            Ok(r) => link = link.max(r),
            Err(Error::Degenerate { .. }) => degenerate += 1,
            Err(e) => return Err(e.to_string()),
        }
    }
    ensure(fp <= 1e-12, || format!("four-term identity residual {fp:e}"))?;
    ensure(link <= 1e-12, || format!("inner-product link residual {link:e}"))?;

    let mut fuglede = 0.0f64;
    for i in 0..RANDOM_CASES {
        let n = operands(4, i, 2, &NORMAL_KINDS);
        let z = generate(&GeneratorSpec::new(EnsembleKind::Ginibre, n[0].rows(), derive_seed(MASTER, &[5, i]))).unwrap();
        let (a, b) = fuglede_putnam_norms(&n[0], &n[1], &z).unwrap();
        fuglede = fuglede.max((a - b).abs() / (1.0 + a.max(b)));
    }
    ensure(fuglede <= 1e-10, || format!("normal commutator norms differ by {fuglede:e}"))?;
    Ok(format!(
        "residuals {fp:.1e} / {link:.1e} ({degenerate} degenerate skipped), normal commutators {fuglede:.1e}"
    ))
}

fn spectral_correctness() -> Outcome {
    let (mut sq, mut pol, mut rank_deficient) = (0.0f64, 0.0f64, 0);
    for i in 0..RANDOM_CASES {
        let x = &operands(6, i, 1, &EnsembleKind::ALL)[0];
        let a = abs_op(x).unwrap();
        let d = hs_norm(&(&(&a * &a) - &(&x.adjoint() * x)));
        sq = sq.max(d / (1.0 + hs_norm(x).powi(2)));
        let p = polar(x).unwrap();
        pol = pol.max(polar_residuals(x, &p.unitary, &p.abs).unwrap().max());
        if p.u != p.unitary {
            rank_deficient += 1;
        }
    }
    ensure(sq <= 1e-10, || format!("|X|² − X*X defect {sq:e}"))?;
    ensure(pol <= 1e-10, || format!("polar identity residual {pol:e}"))?;
    ensure(rank_deficient > 0, || "no rank-deficient operand was exercised".into())?;

    let mut franca = 0.0f64;
    for i in 0..RANDOM_CASES {
        let seed = derive_seed(MASTER, &[7, i]);
        let kind = EnsembleKind::ALL[(seed % 6) as usize];
        let x = generate(&GeneratorSpec::new(kind, 2, seed)).unwrap();
        let diff = franca_abs_2x2(&x).unwrap().max_abs_diff(&abs_op(&x).unwrap());
        franca = franca.max(diff / (1.0 + hs_norm(&x)));
    }
    ensure(franca <= 1e-10, || format!("closed form vs Jacobi {franca:e}"))?;
    Ok(format!(
        "square defect {sq:.1e}, polar {pol:.1e} ({rank_deficient} rank-deficient), 2x2 closed form {franca:.1e}"
    ))
}

fn sharpness() -> Outcome {
    let mut parts = Vec::new();
    for id in [InequalityId::T37, InequalityId::T36] {
        let t = Instant::now();
        let r = sharpness_scan(id, 2, 100_000, MASTER).map_err(|e| e.to_string())?;
        let elapsed = t.elapsed();
        ensure(r.attained() >= 0.999, || format!("{id}: best ratio {} below 0.999 of {}", r.best_ratio, r.target))?;
        ensure(!r.exceeds_target(1e-9), || format!("{id}: best ratio {} above {}", r.best_ratio, r.target))?;
        ensure(elapsed < Duration::from_secs(60), || format!("{id}: took {elapsed:?}"))?;
        parts.push(format!("{id} {:.10}/{:.10} in {elapsed:.2?}", r.best_ratio, r.target));
    }
    Ok(parts.join(", "))
}

fn equality_conditions() -> Outcome {
    let mut worst = 0.0f64;
    for i in 0..1_000 {
        let x = &operands(8, i, 1, &EnsembleKind::ALL)[0];
        ensure(equality_holds_2_13(x, x, 1e-9).unwrap(), || format!("equality not detected for case {i}"))?;
        let r = check(InequalityId::T213, x, x, 1e-9).unwrap();
        worst = worst.max(r.slack.abs() / r.scale);
    }
    ensure(worst <= 1e-9, || format!("self-pair slack {worst:e}"))?;

    let x = ComplexMatrix::diag_real(&[1.0, 0.0, 0.0]);
    let y = ComplexMatrix::from_fn(3, 3, |i, j| {
        if i > 0 && j > 0 {
            Complex64::new((i + j) as f64, (i as f64) - (j as f64))
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    ensure(equality_holds_2_13(&x, &y, 1e-9).unwrap(), || "disjoint supports not an equality case".into())?;
    let r = check(InequalityId::T213, &x, &y, 1e-9).unwrap();
    ensure(r.lhs == 0.0 && r.rhs == 0.0, || format!("disjoint sides {} and {}", r.lhs, r.rhs))?;
    Ok(format!("1000 self-pairs, max |slack|/scale {worst:.1e}; disjoint supports give 0 = 0"))
}

fn angle_axioms() -> Outcome {
    let tol = 1e-10;
    let mut rng = SplitMix64::new(derive_seed(MASTER, &[9]));
    let mut worst = [0.0f64; 5];
    for i in 0..RANDOM_CASES {
        let m = operands(10, i, 3, &EnsembleKind::ALL);
        let (x, y, z) = (&m[0], &m[1], &m[2]);
        let ip = hs_inner(x, y).unwrap();
        let p = hs_norm(x) * hs_norm(y);
        let scale = 1.0 + p;
        let chain = [
            -ip.norm() + p,
            ip.re + ip.norm(),
            ip.norm() - ip.re,
            p - ip.norm(),
        ];
        worst[0] = worst[0].max(chain.iter().map(|v| (-v / scale).max(0.0)).fold(0.0, f64::max));

        let r = angle(x, y).unwrap();
        worst[1] = worst[1].max((r.cos * r.cos + r.sin * r.sin - 1.0).abs());

        let gamma = Complex64::from_polar(0.1 + 3.0 * rng.next_f64(), std::f64::consts::TAU * rng.next_f64());
        let c3 = cos_angle(&x.scale(gamma), &y.scale(gamma)).unwrap();
        let (a, b) = (rng.gaussian(), rng.gaussian());
        let c4 = cos_angle(&x.scale_real(a), &y.scale_real(b)).unwrap();
        worst[2] = worst[2].max((c3 - r.cos).abs()).max((c4 - (a * b).signum() * r.cos).abs());

        let s = angle_triangle_slack(x, y, z).unwrap();
        worst[3] = worst[3].max((-s.sin).max(0.0));
        worst[4] = worst[4].max((-s.theta).max(0.0));
    }
    let names = ["chain", "cos²+sin²", "scaling", "sine triangle", "angle triangle"];
    for (w, name) in worst.iter().zip(names) {
        ensure(*w <= tol, || format!("{name} defect {w:e}"))?;
    }
    Ok(format!(
        "10000 triples, worst defects {}",
        worst.iter().map(|w| format!("{w:.1e}")).collect::<Vec<_>>().join(" / ")
    ))
}

fn corollary_battery() -> Outcome {
    let tol = 1e-10;
    let mut rng = SplitMix64::new(derive_seed(MASTER, &[11]));
    for i in 0..1_000 {
        let m = operands(12, i, 2, &EnsembleKind::ALL);
        let (x, w) = (&m[0], &m[1]);
        let n = x.rows();

        // orthogonal pair: rotated copy
        let y = x.scale(Complex64::new(0.0, 0.5 + rng.next_f64()));
        ensure(is_weak_orthogonal(x, &y, 1e-8).unwrap(), || "iX not orthogonal to X".into())?;
        let lhs = hs_norm(&(x + &y)).powi(2);
        let rhs = hs_norm(x).powi(2) + hs_norm(&y).powi(2);
        ensure((lhs - rhs).abs() <= tol * (1.0 + rhs), || format!("Pythagoras off by {:e}", lhs - rhs))?;

        // parallel pair: real multiple of either sign
        let lambda = if rng.next_f64() < 0.5 { -1.0 } else { 1.0 } * (0.1 + 3.0 * rng.next_f64());
        let yp = x.scale_real(lambda);
        ensure(is_weak_parallel(x, &yp, 1e-8).unwrap(), || "λX not parallel to X".into())?;
        let want = (hs_norm(x) + lambda.signum() * hs_norm(&yp)).abs();
        ensure((hs_norm(&(x + &yp)) - want).abs() <= tol * (1.0 + want), || "parallel norm collapse".into())?;

        // parallel operands have parallel moduli
        let sr = sin_angle(&abs_op(x).unwrap(), &abs_op(&yp).unwrap()).unwrap();
        let sl = sin_angle(&abs_adjoint(x).unwrap(), &abs_adjoint(&yp).unwrap()).unwrap();
        ensure(sr <= 1e-8 && sl <= 1e-8, || format!("moduli sines {sr:e}, {sl:e}"))?;

        // transitivity of parallelism and its mix with orthogonality
        let z = x.scale_real(-0.7);
        ensure(is_weak_parallel(&yp, &z, 1e-8).unwrap(), || "parallelism not transitive".into())?;
        ensure(is_weak_orthogonal(&y, &z, 1e-8).unwrap(), || "orthogonality not inherited".into())?;

        // orthogonal moduli force orthogonal operands
        if n >= 2 {
            let k = 1 + (i as usize) % (n - 1);
            let p = ComplexMatrix::diag_real(&(0..n).map(|j| if j < k { 1.0 } else { 0.0 }).collect::<Vec<_>>());
            let q = &ComplexMatrix::identity(n) - &p;
            for (a, b) in [(x * &p, w * &q), (&p * x, &q * w)] {
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                let c = cos_angle(&a, &b).unwrap();
                ensure(c.abs() <= tol, || format!("cos of disjoint-modulus pair {c:e}"))?;
            }
        }
    }
    // a generic pair is neither orthogonal nor satisfies Pythagoras
    let x = ComplexMatrix::identity(2);
    let y = ComplexMatrix::from_real(2, 2, &[1.0, 1.0, 0.0, 1.0]).unwrap();
    let gap = hs_norm(&(&x + &y)).powi(2) - hs_norm(&x).powi(2) - hs_norm(&y).powi(2);
    ensure(gap.abs() > 1.0 && !is_weak_orthogonal(&x, &y, 1e-8).unwrap(), || "converse failed".into())?;
    Ok("1000 constructed instances per corollary, converse checked".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("sharpness witnesses reproduce", witness_reproduction),
        ("registry holds on all ensembles", inequality_suite),
        ("identity residuals", identity_checks),
        ("spectral correctness", spectral_correctness),
        ("sharpness scan reaches constants", sharpness),
        ("equality conditions", equality_conditions),
        ("angle axioms", angle_axioms),
        ("corollary battery", corollary_battery),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = t.elapsed();
        match outcome {
            Ok(detail) => println!("AC{} PASS  {name}: {detail} [{elapsed:.1?}]", k + 1),
            Err(why) => {
                failed += 1;
                println!("AC{} FAIL  {name}: {why} [{elapsed:.1?}]", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
