mod common;

use common::*;
use fdbt::numkit::*;
use fdbt::sysmodel::*;
use fdbt::Error;
use proptest::prelude::*;

#[test]
fn evaluate_matches_dense_inverse() {
    let mut g = rng(21);
    let sys = random_hurwitz(&mut g, 6, 2, 3, true);
    let ev = ResponseEvaluator::new(&sys);
    for w in [-10.0, -0.3, 0.0, 0.7, 5.0, 1e3] {
        let oracle = dense_response(&sys, w);
        assert!(rel(&evaluate(&sys, w).unwrap(), &oracle) < 1e-11);
        assert!(rel(&ev.eval(w).unwrap(), &oracle) < 1e-10);
    }
}

#[test]
fn example_systems_evaluate_against_oracle() {
    for sys in [fdbt::harness::example1_system(), fdbt::harness::example2_system()] {
        for w in [0.0, 0.4, 2.0] {
            assert!(rel(&evaluate(&sys, w).unwrap(), &dense_response(&sys, w)) < 1e-11);
        }
    }
}

#[test]
fn pole_on_axis_is_reported() {
    let sys = fdbt::StateSpace::new(
        rmat(2, 2, &[0.0, 1.0, -1.0, 0.0]),
        rmat(2, 1, &[0.0, 1.0]),
        rmat(1, 2, &[1.0, 0.0]),
        rmat(1, 1, &[0.0]),
    )
    .unwrap();
    assert!(matches!(evaluate(&sys, 1.0), Err(Error::PoleOnGrid { .. })));
    let grid = FrequencyGrid::explicit(vec![0.0, 1.0, 2.0]).unwrap();
    assert!(matches!(sweep(&sys, &grid), Err(Error::PoleOnGrid { .. })));
    let rep = sweep_lossy(&sys, &grid);
    assert_eq!(rep.skipped, vec![1.0]);
    assert!(rep.sigma_max[1].is_nan());
    assert!(rep.sigma_max[0].is_finite() && rep.sigma_max[2].is_finite());
}

#[test]
fn first_order_lowpass_peak_and_norm() {
    let sys = scalar_system();
    let (peak, at) = hinf_estimate(&sys, 200).unwrap();
    assert!((peak - 1.0).abs() < 1e-9);
    assert!(at.abs() < 1e-6);
    // on [0.5, 2] the peak sits at the left edge: 1/sqrt(1.25)
    let (bp, bw, _) = band_peak(&sys, 0.5, 2.0, 200).unwrap();
    assert!((bp - 1.25f64.sqrt().recip()).abs() < 1e-12);
    assert!((bw - 0.5).abs() < 1e-12);
}

#[test]
fn lightly_damped_resonance_refined() {
    // 1/(s^2 + 0.02 s + 1): peak 1/(2ζ sqrt(1-ζ²)) at sqrt(1-2ζ²), ζ = 0.01
    let sys = fdbt::StateSpace::new(
        rmat(2, 2, &[0.0, 1.0, -1.0, -0.02]),
        rmat(2, 1, &[0.0, 1.0]),
        rmat(1, 2, &[1.0, 0.0]),
        rmat(1, 1, &[0.0]),
    )
    .unwrap();
    let z: f64 = 0.01;
    let (peak, at) = hinf_estimate(&sys, 500).unwrap();
    let want = 1.0 / (2.0 * z * (1.0 - z * z).sqrt());
    assert!((peak - want).abs() < 1e-6 * want, "{peak} vs {want}");
    assert!((at.abs() - (1.0 - 2.0 * z * z).sqrt()).abs() < 1e-4);
}

#[test]
fn error_system_response_is_difference() {
    let mut g = rng(4);
    let a = random_hurwitz(&mut g, 4, 2, 2, true);
    let b = random_hurwitz(&mut g, 3, 2, 2, true);
    let e = error_system(&a, &b).unwrap();
    let w = 0.9;
    let diff = dense_response(&a, w) - dense_response(&b, w);
    assert!(rel(&evaluate(&e, w).unwrap(), &diff) < 1e-11);
    assert!(error_system(&a, &random_hurwitz(&mut g, 3, 1, 2, false)).is_err());
}

#[test]
fn grids_validate_input() {
    assert!(FrequencyGrid::linear(1.0, 0.0, 10).is_err());
    assert!(FrequencyGrid::logarithmic(0.0, 1.0, 10).is_err());
    assert!(FrequencyGrid::explicit(vec![]).is_err());
    let g = FrequencyGrid::logarithmic(1e-2, 1e2, 5).unwrap();
    assert!((g.points()[2] - 1.0).abs() < 1e-12);
    let bg = band_grid(-0.4, 0.4, 100, &[0.1, 3.0]).unwrap();
    assert!(bg.points().iter().all(|&w| (-0.4..=0.4).contains(&w)));
    assert!(bg.points().contains(&0.1));
}

#[test]
fn dimension_and_finiteness_checks() {
    let r = fdbt::StateSpace::new(rmat(2, 2, &[1.0; 4]), rmat(3, 1, &[1.0; 3]), rmat(1, 2, &[1.0; 2]), rmat(1, 1, &[0.0]));
    assert!(matches!(r, Err(Error::DimensionMismatch(_))));
    let r = fdbt::StateSpace::new(rmat(1, 1, &[f64::INFINITY]), rmat(1, 1, &[1.0]), rmat(1, 1, &[1.0]), rmat(1, 1, &[0.0]));
    assert!(matches!(r, Err(Error::NonFinite(_))));
}

#[test]
fn moebius_map_realizes_composition() {
    let mut g = rng(9);
    let sys = random_hurwitz(&mut g, 4, 1, 2, true);
    let (a, b, cc, d) = (c(2.0, 0.3), c(0.5, 0.0), c(1.0, 0.0), c(2.0, -0.3));
    let m = moebius_substitute(&sys, a, b, cc, d).unwrap();
    for w in [-1.0, 0.2, 3.0] {
        let s = jw(w);
        let mapped = (a * s + b) / (cc * s + d);
        let direct = evaluate_at(&sys, mapped, w).unwrap();
        assert!(rel(&evaluate(&m, w).unwrap(), &direct) < 1e-10);
    }
    assert!(matches!(
        moebius_substitute(&sys, c(1.0, 0.0), c(2.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)),
        Err(Error::DegenerateMap)
    ));
}

#[test]
fn hurwitz_margin_and_real_flag() {
    let sys = fdbt::harness::example1_system();
    let (ok, margin) = is_hurwitz(&sys).unwrap();
    assert!(ok && margin > 0.0);
    assert!(sys.is_real());
    let unstable = fdbt::StateSpace::new(rmat(1, 1, &[0.5]), rmat(1, 1, &[1.0]), rmat(1, 1, &[1.0]), rmat(1, 1, &[0.0])).unwrap();
    assert!(matches!(require_hurwitz(&unstable), Err(Error::NotHurwitz { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn response_invariant_under_similarity(seed in any::<u64>(), n in 1usize..7, w in -20.0f64..20.0) {
        let mut g = rng(seed);
        let sys = random_hurwitz(&mut g, n, 2, 2, true);
        let t = random_transform(&mut g, n, 1e3);
        let tinv = inverse(&t).unwrap();
        let s2 = sys.similarity(&t, &tinv);
        prop_assert!(rel(&evaluate(&s2, w).unwrap(), &evaluate(&sys, w).unwrap()) < 1e-8);
    }

    #[test]
    fn identity_moebius_preserves_response(seed in any::<u64>(), w in -5.0f64..5.0, k in 0.2f64..5.0) {
        let sys = random_hurwitz(&mut rng(seed), 3, 1, 1, true);
        // s -> (k s)/(k) is the identity map for any nonzero k
        let m = moebius_substitute(&sys, c(k, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(k, 0.0)).unwrap();
        prop_assert!(rel(&evaluate(&m, w).unwrap(), &evaluate(&sys, w).unwrap()) < 1e-10);
    }
}
