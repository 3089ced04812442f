mod common;

use common::{hp_close, indicator_generator, modulated_step, plain_step};
use proptest::prelude::*;
use siframes_core::fiber::{dilate_space, dilation_dim_check};
use siframes_core::{int, rat, FiberMap, Lattice, Rational, SiSpace};

fn lattice() -> impl Strategy<Value = Lattice> {
    prop_oneof![Just(int(1)), Just(rat(1, 2)), Just(int(2)), Just(rat(3, 2))].prop_map(|b| Lattice::new(b).unwrap())
}

fn space(max_gens: usize) -> impl Strategy<Value = SiSpace> {
    (lattice(), prop::collection::vec(indicator_generator(3), 1..=max_gens))
        .prop_map(|(l, g)| SiSpace::generated(&l, g).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fiberization_is_unitary(f in modulated_step(4), l in lattice()) {
        let t = FiberMap::fiberize(&f, &l).unwrap();
        let (a, b) = (t.norm_sqr(), f.norm_sqr());
        if a.is_exact() && b.is_exact() {
            prop_assert_eq!(a.value, b.value);
        } else {
            prop_assert!(hp_close(&a.value, &b.value, 1e-25));
        }
        prop_assert_eq!(t.unfiberize(), f);
    }

    #[test]
    fn fiberization_intertwines_translations(f in plain_step(4), l in lattice(), k in -5i64..=5) {
        let t = l.step() * Rational::from_integer(k.into());
        let lhs = FiberMap::fiberize(&f.modulate(&t), &l).unwrap();
        let rhs = FiberMap::fiberize(&f, &l).unwrap().modulate(&t);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn projection_is_idempotent(v in space(2), f in plain_step(3)) {
        let p = v.project(&f).unwrap();
        let pp = v.project(&p).unwrap();
        if p.is_exact() && pp.is_exact() {
            prop_assert_eq!(pp, p);
        } else {
            prop_assert!((&pp - &p).max_abs() < 1e-10);
        }
    }

    #[test]
    fn projection_is_self_adjoint(v in space(2), f in plain_step(3), g in plain_step(3)) {
        let lhs = v.project(&f).unwrap().inner(&g);
        let rhs = f.inner(&v.project(&g).unwrap());
        if lhs.is_exact() && rhs.is_exact() {
            prop_assert_eq!(lhs.value, rhs.value);
        } else {
            prop_assert!(hp_close(&lhs.value, &rhs.value, 1e-10));
        }
    }

    #[test]
    fn projection_commutes_with_lattice_translations(v in space(2), f in plain_step(3), k in -3i64..=3) {
        let t = v.lattice().step() * Rational::from_integer(k.into());
        let lhs = v.project(&f.modulate(&t)).unwrap();
        let rhs = v.project(&f).unwrap().modulate(&t);
        if lhs.is_exact() && rhs.is_exact() {
            prop_assert_eq!(lhs, rhs);
        } else {
            prop_assert!((&lhs - &rhs).max_abs() < 1e-10);
        }
    }

    #[test]
    fn dimension_is_bounded_by_generator_count(v in space(3)) {
        let n = v.generators().unwrap().len() as u32;
        prop_assert!(v.dimension_function().max() <= n);
        for g in v.generators().unwrap() {
            prop_assert!(v.membership_auto(g).unwrap().member);
        }
    }

    #[test]
    fn duplicate_generators_do_not_change_the_space(l in lattice(), g in indicator_generator(3)) {
        let once = SiSpace::generated(&l, vec![g.clone()]).unwrap();
        let twice = SiSpace::generated(&l, vec![g.clone(), g]).unwrap();
        prop_assert_eq!(once.dimension_function(), twice.dimension_function());
        prop_assert!(once.span_difference(&twice).unwrap().is_none());
    }

    #[test]
    fn dilation_dimension_formula(v in space(2), a in 2i64..=3) {
        let c = dilation_dim_check(&v, a).unwrap();
        prop_assert!(c.equal, "lhs {:?} rhs {:?}", c.lhs, c.rhs);
    }

    #[test]
    fn finitely_generated_spaces_are_not_dilation_fixed(v in space(2), a in 2i64..=3) {
        let d = dilate_space(&v, a).unwrap();
        prop_assert!(v.span_difference(&d).unwrap().is_some());
    }
}
