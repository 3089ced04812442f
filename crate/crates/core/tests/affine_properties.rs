mod common;

use common::{gaussian_amplitude, indicator_generator, plain_step};
use proptest::prelude::*;
use siframes_core::affine::{
    frame_sum, heil_config, negative_dilates_space, split_tile_config, AffineConfig, JWindow, Mode,
};
use siframes_core::{element_ft, int, rat, Amplitude, Element, ModStepFn, Rational, Scalar};

fn config() -> impl Strategy<Value = AffineConfig> {
    (
        2i64..=3,
        prop_oneof![Just(int(1)), Just(rat(1, 2)), Just(int(2))],
        indicator_generator(3),
        gaussian_amplitude(),
    )
        .prop_map(|(a, b, g, c)| AffineConfig::new(a, b, g.scale(&c), Mode::Full).unwrap())
}

/// Probe functions supported in `(0, 8)`.
fn positive_probe() -> impl Strategy<Value = ModStepFn> {
    plain_step(3).prop_map(|f| {
        f.affine_reparam(&int(1), &int(4))
            .unwrap()
            .restrict(&rat(1, 64), &int(8))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn elements_have_the_generator_norm(cfg in config(), j in -4i32..=4, k in -4i64..=4) {
        let e = element_ft(&cfg, Element::new(j, k));
        prop_assert_eq!(e.norm_sqr().value, cfg.psi_hat().norm_sqr().value);
    }

    #[test]
    fn dilation_and_translation_compose(cfg in config(), j in -4i32..=4, k in -4i64..=4) {
        let zero = Rational::from_integer(0.into());
        let norm = Amplitude::Exact(Scalar::sqrt_rational(&cfg.a_pow(-j)));
        let bk = cfg.b() * Rational::from_integer(k.into());
        // translate, then dilate
        let td = cfg.psi_hat().modulate(&bk).affine_reparam(&cfg.a_pow(j), &zero).unwrap().scale(&norm);
        // dilate, then translate by b·k·a^{-j}
        let dt = cfg.psi_hat().affine_reparam(&cfg.a_pow(j), &zero).unwrap().scale(&norm).modulate(&(&bk * cfg.a_pow(-j)));
        let e = element_ft(&cfg, Element::new(j, k));
        prop_assert_eq!(&td, &e);
        prop_assert_eq!(&dt, &e);
    }

    #[test]
    fn heil_frame_sums_match_norms(f in positive_probe()) {
        let cfg = heil_config(2, int(1), int(1)).unwrap();
        let s = frame_sum(&cfg, &f, JWindow::Auto).unwrap();
        prop_assert!(s.total.is_exact());
        prop_assert!(s.equal);
    }

    #[test]
    fn split_tile_frame_sums_match_norms(f in positive_probe()) {
        let s = frame_sum(&split_tile_config(), &f, JWindow::Auto).unwrap();
        prop_assert!(s.total.is_exact());
        prop_assert!(s.equal);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn truncations_grow_with_depth(g in indicator_generator(2)) {
        let cfg = AffineConfig::new(2, int(1), g, Mode::Full).unwrap();
        let shallow = negative_dilates_space(&cfg, 1).unwrap().space;
        let deep = negative_dilates_space(&cfg, 2).unwrap().space;
        for f in shallow.generators().unwrap() {
            prop_assert!(deep.membership_auto(f).unwrap().member);
        }
        // on the common lattice the deeper dimension function dominates
        let coarse = shallow.dimension_function().coarsen(2);
        prop_assert!(coarse.le(&deep.dimension_function()));
    }
}
