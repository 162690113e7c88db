mod common;

use common::*;
use fdbt::harness::*;
use fdbt::numkit::*;
use fdbt::sysmodel::*;

#[test]
fn ladder_order_three_characteristic_polynomial() {
    let p = LadderParams { r: 2.0, rbar: 0.3, c: 0.5, l: 1.5 };
    let sys = generate_ladder(3, p).unwrap();
    let got = char_poly(sys.a());
    // p(s) = s(s + Rb/L)(s + 1/RC) + s/(LC) + (s + 1/RC)/(LC)
    let (a, b, lc) = (p.rbar / p.l, 1.0 / (p.r * p.c), 1.0 / (p.l * p.c));
    let want = [1.0, a + b, a * b + 2.0 * lc, b * lc];
    for (g, w) in got.iter().zip(want) {
        assert!((g - c(w, 0.0)).norm() < 1e-12, "{got:?} vs {want:?}");
    }
}

#[test]
fn ladder_shape_and_stability() {
    let sys = generate_ladder(LADDER_ORDER, LadderParams::default()).unwrap();
    assert_eq!((sys.n(), sys.m(), sys.p()), (201, 1, 1));
    assert!(sys.is_real());
    assert!(is_hurwitz(&sys).unwrap().0);
    let one = generate_ladder(1, LadderParams::default()).unwrap();
    assert!((one.a()[(0, 0)].re + 1.0).abs() < 1e-15);
    assert!(generate_ladder(4, LadderParams::default()).is_err());
    assert!(generate_ladder(0, LadderParams::default()).is_err());
    assert!(generate_ladder(3, LadderParams { c: 0.0, ..Default::default() }).is_err());
}

#[test]
fn ladder_dc_gain_is_load_resistance() {
    let p = LadderParams { r: 3.0, rbar: 0.0, c: 1.0, l: 1.0 };
    let sys = generate_ladder(7, p).unwrap();
    assert!((evaluate(&sys, 0.0).unwrap()[(0, 0)] - c(3.0, 0.0)).norm() < 1e-10);
}

#[test]
fn random_models_are_seeded_and_stable() {
    let spec = RandomModelSpec::new(6, 5, 42);
    let a = generate_random_models(&spec);
    let b = generate_random_models(&spec);
    assert_eq!(a.systems, b.systems);
    assert_eq!(a.resamples, b.resamples);
    assert_eq!(a.systems.len(), 5);
    assert!(a.systems.iter().all(|s| is_hurwitz(s).unwrap().0 && s.is_real()));
    let other = generate_random_models(&RandomModelSpec::new(6, 5, 43));
    assert_ne!(a.systems, other.systems);
}

#[test]
fn random_diagonal_statistics() {
    // scalar draws are almost never rejected, so the accepted diagonal keeps
    // mean −5.5 and variance 4.5
    let models = generate_random_models(&RandomModelSpec::new(1, 4000, 7));
    let diag: Vec<f64> = models.systems.iter().map(|s| s.a()[(0, 0)].re).collect();
    let n = diag.len() as f64;
    let mean = diag.iter().sum::<f64>() / n;
    let var = diag.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1.0);
    assert!((mean + 5.5).abs() < 0.15, "{mean}");
    assert!((var - 4.5).abs() < 0.4, "{var}");
}

#[test]
fn verification_records_detect_violations() {
    assert!(passes(1.0, 1.0));
    assert!(!passes(1.0 + 1e-6, 1.0));
    let sys = example1_system();
    let res = fdbt::reduce(&sys, fdbt::Method::Fibt, 2).unwrap();
    let mut recs = verify_bound(&sys, &res).unwrap();
    assert_eq!(recs.len(), 1);
    assert!(verify_all(&recs));
    recs[0].bound = recs[0].peak * 0.5;
    recs[0].pass = passes(recs[0].peak, recs[0].bound);
    assert!(!verify_all(&recs));
}

#[test]
fn miniature_randomized_experiment() {
    let spec = RandomModelSpec::new(8, 2, 1);
    let rep = run_randomized_experiment(&spec, &[0.4], &[2]);
    assert_eq!(rep.records.len(), 2);
    assert_eq!(rep.cells.len(), 1);
    let cell = &rep.cells[0];
    assert_eq!(cell.models, 2);
    assert!(cell.err_fdbt.is_finite() && cell.eb_fdbt.is_finite());
    // bounds are sound model by model
    for rec in &rep.records {
        if let (Some(p), Some(b)) = (rec.fdbt_peak, rec.fdbt_bound) {
            assert!(passes(p, b));
        }
        assert!(passes(rec.fibt_peak, rec.fibt_ef_bound));
    }
    let again = run_randomized_experiment(&spec, &[0.4], &[2]);
    assert_eq!(again.cells[0].err_fdbt.to_bits(), cell.err_fdbt.to_bits());
}

#[test]
fn example_fixtures_have_expected_scenarios() {
    let ex1 = example1();
    assert_eq!(ex1.system.n(), 6);
    assert!(ex1.scenarios.iter().all(|s| s.order == 3));
    let ex2 = example2(0.4);
    assert_eq!(ex2.name, "ex2_case1");
    assert_eq!(example2(0.8).name, "ex2_case2");
}

#[test]
fn example_one_bundle_written() {
    let bundle = reproduce_example(ExampleName::Ex1).unwrap();
    assert!(bundle.failures.is_empty(), "{:?}", bundle.failures);
    assert!(bundle.assertion("sf_below_fibt_at_dc").unwrap().pass);
    let dir = std::env::temp_dir().join(format!("fdbt-bundle-{}", std::process::id()));
    write_bundle(&bundle, &dir).unwrap();
    assert!(dir.join("report.json").exists());
    let csvs = std::fs::read_dir(&dir).unwrap().filter(|e| {
        e.as_ref().unwrap().path().extension().map(|x| x == "csv").unwrap_or(false)
    });
    assert_eq!(csvs.count(), bundle.sweeps.len());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn example_two_bounds_hold_and_widen_with_band() {
    let c1 = reproduce_example(ExampleName::Ex2Case1).unwrap();
    let c2 = reproduce_example(ExampleName::Ex2Case2).unwrap();
    for b in [&c1, &c2] {
        assert!(b.records.iter().filter(|r| r.certified).all(|r| r.pass));
    }
    let b1 = c1.measurement("int-fdbt_r1").unwrap().bound.unwrap();
    let b2 = c2.measurement("int-fdbt_r1").unwrap().bound.unwrap();
    assert!(b2 > b1);
}

#[test]
fn model_file_round_trip() {
    let sys = random_hurwitz(&mut rng(3), 3, 2, 1, true);
    let text = fdbt::io::ModelFile::from_system(&sys, Some("x")).to_json();
    let back = fdbt::io::ModelFile::parse(&text).unwrap().to_system().unwrap();
    assert_eq!(back, sys);
    assert!(fdbt::io::ModelFile::parse("{\"n\": 1}").is_err());
}
