mod common;

use common::*;
use fdbt::harness::{example2_system, passes, verify_all, verify_bound, BAND_POINTS};
use fdbt::interval_fdbt::*;
use fdbt::numkit::*;
use fdbt::sysmodel::*;
use fdbt::Error;
use proptest::prelude::*;

#[test]
fn factors_match_eigendecomposition_oracle() {
    let a = example2_system().a().clone();
    let cfg = IntervalConfig::new(-0.4, 0.9).unwrap();
    let (m, nn) = interval_factors(&a, cfg).unwrap();
    let wd = cfg.wd();
    let (w1, w2, wc) = (cfg.w1, cfg.w2, cfg.wc());
    let m_oracle = eig_function(&a, |l| (C64::new(wd * wd, 0.0) / ((J * w1 - l) * (J * w2 - l))).sqrt());
    let n_oracle = eig_function(&a, |l| (J * wc - l) / ((J * w1 - l) * (J * w2 - l)));
    assert!(rel(&m, &m_oracle) < 1e-9);
    assert!(rel(&nn, &n_oracle) < 1e-9);
}

#[test]
fn extended_gramians_match_kronecker_oracle() {
    let sys = example2_system();
    let ext = build_interval_extended(&sys, IntervalConfig::new(-0.8, 0.8).unwrap()).unwrap();
    let gram = interval_gramians(&ext).unwrap();
    let b = ext.sys.b();
    assert!(rel(&gram.wc, &kron_lyapunov(sys.a(), &(b * b.adjoint()))) < 1e-10);
}

#[test]
fn band_bound_holds_on_example_two() {
    let sys = example2_system();
    for wl in [0.4, 0.8] {
        for r in [1, 2, 3] {
            let res = interval_reduce(&sys, IntervalConfig::new(-wl, wl).unwrap(), r).unwrap();
            let recs = verify_bound(&sys, &res).unwrap();
            assert!(verify_all(&recs), "wl={wl} r={r}: {recs:?}");
        }
    }
}

#[test]
fn symmetric_band_keeps_real_systems_real() {
    let res = interval_reduce(&example2_system(), IntervalConfig::new(-0.4, 0.4).unwrap(), 2).unwrap();
    assert!(res.reduced.max_abs_imag() < 1e-10);
}

#[test]
fn full_order_round_trip() {
    let mut g = rng(6);
    let sys = random_hurwitz(&mut g, 4, 2, 1, true);
    let cfg = IntervalConfig::new(-0.5, 1.0).unwrap();
    let res = interval_reduce(&sys, cfg, 4).unwrap();
    assert_eq!(res.bounds.interval.unwrap().value, 0.0);
    for w in [-0.5, 0.2, 1.0, 7.0] {
        assert!(rel(&evaluate(&res.reduced, w).unwrap(), &evaluate(&sys, w).unwrap()) < 1e-8);
    }
}

#[test]
fn eta_records_per_truncated_state() {
    let sys = example2_system();
    let cfg = IntervalConfig::new(-0.4, 0.4).unwrap();
    let (_, gram, bal) = interval_truncate(&sys, cfg, 1).unwrap();
    let eta = interval_eta(&bal, &gram, cfg, 1).unwrap();
    assert_eq!(eta.eta.len(), sys.n() - 1);
    assert_eq!(eta.per_step.len(), sys.n() - 1);
    assert!(eta.eta.iter().all(|e| e.is_finite() && *e >= 0.0));
}

#[test]
fn invalid_band_rejected() {
    assert!(matches!(IntervalConfig::new(1.0, 1.0), Err(Error::InvalidParameters(_))));
    assert!(matches!(IntervalConfig::new(0.5, -0.5), Err(Error::InvalidParameters(_))));
    let c = IntervalConfig::new(0.2, 1.0).unwrap().symmetrized();
    assert_eq!((c.w1, c.w2), (-1.0, 1.0));
}

#[test]
fn unstable_system_rejected() {
    let sys = fdbt::StateSpace::new(rmat(1, 1, &[0.3]), rmat(1, 1, &[1.0]), rmat(1, 1, &[1.0]), rmat(1, 1, &[0.0])).unwrap();
    let r = interval_reduce(&sys, IntervalConfig::new(-1.0, 1.0).unwrap(), 1);
    assert!(matches!(r, Err(Error::NotHurwitz { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn band_bound_holds_on_random_systems(seed in any::<u64>(), n in 2usize..6, lo in -2.0f64..0.5, width in 0.1f64..3.0) {
        let mut g = rng(seed);
        let sys = random_hurwitz(&mut g, n, 1 + (seed % 2) as usize, 1, seed % 3 == 0);
        let r = 1 + (seed as usize % (n - 1));
        let cfg = IntervalConfig::new(lo, lo + width).unwrap();
        let res = interval_reduce(&sys, cfg, r).unwrap();
        let (peak, _, _) = band_peak(&error_system(&sys, &res.reduced).unwrap(), cfg.w1, cfg.w2, BAND_POINTS / 4).unwrap();
        let b = res.bounds.interval.unwrap().value;
        prop_assert!(passes(peak, b), "peak {} bound {}", peak, b);
    }
}
