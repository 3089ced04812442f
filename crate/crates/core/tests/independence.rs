use std::collections::BTreeMap;

use siframes_core::affine::{heil_config, split_tile_config, AffineConfig, Element};
use siframes_core::indep::{
    gram, independence_sweep, independence_test, subset_count, translates_criterion, GramMatrix, Status, SweepOptions,
    SweepWindow, DEFAULT_INDEPENDENCE_TOL,
};
use siframes_core::{int, rat, Amplitude, Error, ModStepFn, Scalar};

fn heil() -> AffineConfig {
    heil_config(2, int(1), int(1)).unwrap()
}

#[test]
fn heil_gram_is_identity() {
    let els: Vec<Element> = (-1..=1)
        .flat_map(|j| (-1..=1).map(move |k| Element::new(j, k)))
        .collect();
    let g = gram(&heil(), &els).unwrap();
    for p in 0..els.len() {
        for q in 0..els.len() {
            let expected = if p == q { Amplitude::one() } else { Amplitude::zero() };
            assert_eq!(g.entry(p, q), &expected, "entry ({p}, {q})");
        }
    }
    let v = independence_test(&g, DEFAULT_INDEPENDENCE_TOL).unwrap();
    assert_eq!(v.status, Status::Independent);
    assert!((v.min_singular_value - 1.0).abs() < 1e-15);
}

#[test]
fn single_element_gram_is_the_norm() {
    let cfg = split_tile_config();
    let g = gram(&cfg, &[Element::new(0, 0)]).unwrap();
    assert_eq!(g.len(), 1);
    assert_eq!(g.entry(0, 0), &cfg.psi_hat().norm_sqr().value);
}

#[test]
fn duplicates_are_rejected() {
    let e = gram(&heil(), &[Element::new(0, 0), Element::new(0, 0)]);
    assert!(matches!(e, Err(Error::DuplicateElements { j: 0, k: 0 })));
}

#[test]
fn rank_one_family_is_dependent() {
    let f = ModStepFn::indicator(int(1), int(2));
    let g = GramMatrix::from_functions(vec![f.clone(), f.scale(&Amplitude::rational(int(-1)))]);
    let v = independence_test(&g, DEFAULT_INDEPENDENCE_TOL).unwrap();
    assert_eq!(v.status, Status::Dependent);
    let w = v.witness.unwrap();
    assert!(w.exact);
    assert_eq!(w.residual_norm, 0.0);
    assert_eq!(w.coefficients[0], w.coefficients[1]);
}

#[test]
fn near_dependent_inexact_family_is_dependent() {
    // irrational amplitude forces the high-precision path
    let root2 = Amplitude::Exact(Scalar::sqrt_rational(&int(2)));
    let f = &ModStepFn::indicator(int(0), int(1)).scale(&root2) + &ModStepFn::indicator(int(1), int(2));
    let g = GramMatrix::from_functions(vec![f.clone(), f.scale(&root2), ModStepFn::indicator(int(3), int(4))]);
    let v = independence_test(&g, DEFAULT_INDEPENDENCE_TOL).unwrap();
    assert_eq!(v.status, Status::Dependent);
    assert!(v.witness.unwrap().residual_norm < 1e-20);
}

#[test]
fn tolerance_must_be_positive() {
    let g = GramMatrix::from_functions(vec![ModStepFn::indicator(int(0), int(1))]);
    assert!(independence_test(&g, 0.0).is_err());
}

#[test]
fn translate_examples() {
    let one = Amplitude::one();
    let c = |pairs: &[(i64, i64)]| -> BTreeMap<i64, Amplitude> {
        pairs.iter().map(|&(k, v)| (k, Amplitude::rational(int(v)))).collect()
    };
    let v = translates_criterion(&int(1), &c(&[(0, 1), (1, -1)])).unwrap();
    assert_eq!(v.status, Status::Independent);
    assert_eq!(v.witness_point, rat(1, 2));
    assert_eq!(v.witness_value, one.add(&one));
    let v = translates_criterion(&int(1), &c(&[(0, 1), (2, 1), (5, -3)])).unwrap();
    assert_eq!(v.status, Status::Independent);
    assert!(v.witness_abs > 0.0);
    assert!(matches!(
        translates_criterion(&int(1), &c(&[(0, 0)])),
        Err(Error::DegenerateCoefficients)
    ));
}

#[test]
fn heil_sweep_passes() {
    let opts = SweepOptions {
        max_size: 4,
        ..SweepOptions::default()
    };
    let r = independence_sweep(&heil(), SweepWindow::new(-2, 2, 0, 3).unwrap(), &opts).unwrap();
    assert!(r.pass);
    assert_eq!(r.subset_count, subset_count(20, 4));
    assert_eq!(u128::from(r.histogram.independent), r.subset_count);
    assert!(r.parseval_verified);
    assert_eq!(r.v0_invariant, Some(true));
}

#[test]
fn split_tile_sweep_passes() {
    let opts = SweepOptions {
        max_size: 4,
        ..SweepOptions::default()
    };
    let r = independence_sweep(&split_tile_config(), SweepWindow::new(-2, 2, -2, 2).unwrap(), &opts).unwrap();
    assert!(r.pass, "{:?}", r.first_failure);
    assert!(r.parseval_verified);
    assert!(r.min_singular_value > 1e-8);
    assert!(r.max_entry_error_bound <= 1e-20);
}

#[test]
fn zero_generator_fails_at_first_subset() {
    let cfg = heil().with_psi_hat(ModStepFn::zero()).unwrap();
    let r = independence_sweep(&cfg, SweepWindow::new(0, 1, 0, 1).unwrap(), &SweepOptions::default()).unwrap();
    assert!(!r.pass);
    assert_eq!(r.evaluated, 1);
    let f = r.first_failure.unwrap();
    assert_eq!(f.index, 0);
    assert_eq!(f.verdict.status, Status::Dependent);
    assert!(!r.parseval_verified);
}

#[test]
fn window_guard() {
    let opts = SweepOptions {
        max_size: 6,
        ..SweepOptions::default()
    };
    let e = independence_sweep(&heil(), SweepWindow::new(-3, 3, 0, 4).unwrap(), &opts);
    assert!(matches!(e, Err(Error::WindowTooLarge { count: 2_007_327, .. })));
    let too_big = SweepOptions {
        max_size: 9,
        ..SweepOptions::default()
    };
    assert!(independence_sweep(&heil(), SweepWindow::new(0, 0, 0, 0).unwrap(), &too_big).is_err());
}

#[test]
fn csv_has_one_line_per_subset() {
    let opts = SweepOptions {
        max_size: 2,
        record_subsets: true,
        ..SweepOptions::default()
    };
    let r = independence_sweep(&heil(), SweepWindow::new(0, 1, 0, 1).unwrap(), &opts).unwrap();
    let csv = r.to_csv();
    assert_eq!(csv.lines().count(), 1 + 10);
    assert!(csv.lines().nth(1).unwrap().starts_with("0,0:0,1e0,independent"));
}
