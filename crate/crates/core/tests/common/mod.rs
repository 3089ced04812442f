#![allow(dead_code)]

use proptest::prelude::*;
use siframes_core::{int, rat, Amplitude, ModStepFn, Piece, Rational, Scalar};

/// Rationals `n/d` with `d ∈ {1, 2, 3, 4, 8}` and `|n/d| ≤ bound`.
pub fn small_rational(bound: i64) -> impl Strategy<Value = Rational> {
    prop_oneof![Just(1i64), Just(2), Just(3), Just(4), Just(8)]
        .prop_flat_map(move |d| (-bound * d..=bound * d).prop_map(move |n| rat(n, d)))
}

pub fn gaussian_amplitude() -> impl Strategy<Value = Amplitude> {
    ((-4i64..=4), (-4i64..=4), (1i64..=3))
        .prop_filter("nonzero", |(re, im, _)| *re != 0 || *im != 0)
        .prop_map(|(re, im, d)| Amplitude::Exact(Scalar::gaussian(rat(re, d), rat(im, d))))
}

/// Interval `[lo, lo + len)` inside `[-bound, bound + 2)`.
pub fn interval(bound: i64) -> impl Strategy<Value = (Rational, Rational)> {
    (small_rational(bound), 1i64..=16).prop_map(|(lo, n)| {
        let hi = &lo + rat(n, 8);
        (lo, hi)
    })
}

/// Unmodulated step functions with Gaussian amplitudes.
pub fn plain_step(bound: i64) -> impl Strategy<Value = ModStepFn> {
    prop::collection::vec((interval(bound), gaussian_amplitude()), 0..5).prop_map(|v| {
        ModStepFn::superpose(
            v.into_iter()
                .map(|((lo, hi), a)| Piece::new(lo, hi, a, Rational::from_integer(0.into())))
                .collect(),
        )
    })
}

/// Step functions whose pieces may carry a modulation `e^{-2πi·t·ξ}`.
pub fn modulated_step(bound: i64) -> impl Strategy<Value = ModStepFn> {
    let freq = prop_oneof![Just(int(0)), small_rational(2)];
    prop::collection::vec((interval(bound), gaussian_amplitude(), freq), 0..5)
        .prop_map(|v| ModStepFn::superpose(v.into_iter().map(|((lo, hi), a, t)| Piece::new(lo, hi, a, t)).collect()))
}

/// Nonzero indicator functions of one or two intervals.
pub fn indicator_generator(bound: i64) -> impl Strategy<Value = ModStepFn> {
    prop::collection::vec(interval(bound), 1..=2).prop_map(|iv| ModStepFn::indicator_union(&iv))
}

pub fn hp_close(x: &Amplitude, y: &Amplitude, tol: f64) -> bool {
    let d = x.to_hp() - y.to_hp();
    d.norm_sqr().sqrt().to_f64() <= tol
}
