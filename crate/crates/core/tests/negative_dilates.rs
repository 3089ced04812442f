use siframes_core::affine::{
    bownik_speegle_config, bownik_speegle_residuals, heil_config, negative_dilates_space, stabilization_check,
    vk_invariance_check, Stabilization,
};
use siframes_core::{int, rat, ModStepFn, Rational};

fn eps() -> Rational {
    rat(1, 4)
}

#[test]
fn residuals_match_closed_forms() {
    let cfg = bownik_speegle_config(&eps()).unwrap();
    let v0 = negative_dilates_space(&cfg, 2).unwrap().space;
    let psi = cfg.psi_hat().clone();
    let shifted = psi.modulate(&int(1));
    let r0 = &psi - &v0.project(&psi).unwrap();
    let r1 = &shifted - &v0.project(&shifted).unwrap();
    let (e0, e1) = bownik_speegle_residuals(&eps());
    assert!(r0.is_exact() && r1.is_exact());
    assert_eq!(r0, e0);
    assert_eq!(r1, e1);
}

#[test]
fn invariance_verdicts() {
    let cfg = bownik_speegle_config(&eps()).unwrap();
    assert!(vk_invariance_check(&cfg, 2, &int(2)).unwrap().invariant);
    assert!(!vk_invariance_check(&cfg, 2, &int(1)).unwrap().invariant);
}

#[test]
fn deeper_truncation_matches_closed_form_description() {
    let cfg = bownik_speegle_config(&eps()).unwrap();
    let v0 = negative_dilates_space(&cfg, 3).unwrap().space;
    // tied values on [1/4, 3/8) and [-1/4, -1/8)
    let tied = ModStepFn::indicator_of(&[(-1, 4, -1, 8), (1, 4, 3, 8)]);
    assert!(v0.membership_auto(&tied).unwrap().member);
    let untied = ModStepFn::indicator_of(&[(1, 4, 3, 8)]);
    assert!(!v0.membership_auto(&untied).unwrap().member);
    let inner = ModStepFn::indicator_of(&[(1, 16, 1, 8)]);
    assert!(v0.membership_auto(&inner).unwrap().member);
    let outside = ModStepFn::indicator_of(&[(3, 8, 1, 2)]);
    assert!(!v0.membership_auto(&outside).unwrap().member);
    assert!(!v0.membership_auto(cfg.psi_hat()).unwrap().member);
}

#[test]
fn truncations_are_nested() {
    let cfg = bownik_speegle_config(&eps()).unwrap();
    for depth in 1..=2 {
        let shallow = negative_dilates_space(&cfg, depth).unwrap().space;
        let deep = negative_dilates_space(&cfg, depth + 1).unwrap().space;
        for g in shallow.generators().unwrap() {
            assert!(deep.membership_auto(g).unwrap().member);
        }
    }
}

#[test]
fn stabilization_outcomes() {
    let zero = heil_config(2, int(1), int(1))
        .unwrap()
        .with_psi_hat(ModStepFn::zero())
        .unwrap();
    assert!(matches!(
        stabilization_check(&zero, 2).unwrap(),
        Stabilization::Stabilized { depth: 1, .. }
    ));
    assert!(stabilization_check(&zero, 1).is_err());
    let cfg = bownik_speegle_config(&eps()).unwrap();
    assert!(matches!(
        stabilization_check(&cfg, 3).unwrap(),
        Stabilization::NotStabilized { .. }
    ));
}

#[test]
fn heil_space_is_invariant_and_differs_from_its_dilate() {
    let cfg = heil_config(2, int(1), int(1)).unwrap();
    let r = vk_invariance_check(&cfg, 3, &int(1)).unwrap();
    assert!(r.invariant);
    assert!(!r.psi_in_v0);
    assert!(r.psi_in_v1);
    assert!(r.v0_differs_from_v1());
}
