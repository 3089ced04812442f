use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{AffineConfig, Mode};
use crate::error::{Error, Result};
use crate::num::{format_rational, rat, Amplitude, Scalar};
use crate::step::{ModStepFn, Piece};

/// `ψ̂ = √b·1_{[c, ac)}`: a single multiplicative tile, which fits in
/// `[c, c + 1/b)` exactly when `c(a - 1) ≤ 1/b`.
pub fn heil_config(a: i64, b: BigRational, c: BigRational) -> Result<AffineConfig> {
    if !c.is_positive() {
        return Err(Error::InvalidArgument(format!(
            "c must be positive, got {}",
            format_rational(&c)
        )));
    }
    if !b.is_positive() {
        return Err(Error::NonpositiveScale(format_rational(&b)));
    }
    let top = &c * BigRational::from_integer(a.into());
    if &top - &c > b.recip() {
        return Err(Error::InvalidArgument(format!(
            "no tile [c, ac) fits in [c, c + 1/b) for a = {a}, b = {}, c = {}",
            format_rational(&b),
            format_rational(&c)
        )));
    }
    let amp = Amplitude::Exact(Scalar::sqrt_rational(&b));
    let psi = ModStepFn::indicator(c, top).scale(&amp);
    AffineConfig::new(a, b, psi, Mode::H2Plus)
}

/// A Parseval generator for `a = 2`, `b = 1` whose dilates are not
/// orthogonal: `|ψ̂|² = 1/2` on `[3/4, 7/8) ∪ [3/2, 7/4)` and `1` on
/// `[7/8, 3/2)`.
pub fn split_tile_config() -> AffineConfig {
    let half = Amplitude::Exact(Scalar::sqrt_rational(&rat(1, 2)));
    let psi = ModStepFn::make(vec![
        Piece::new(rat(3, 4), rat(7, 8), half.clone(), BigRational::zero()),
        Piece::new(rat(7, 8), rat(3, 2), Amplitude::one(), BigRational::zero()),
        Piece::new(rat(3, 2), rat(7, 4), half, BigRational::zero()),
    ])
    .expect("disjoint pieces");
    AffineConfig::new(2, BigRational::one(), psi, Mode::H2Plus).expect("valid")
}

/// `ψ̂ = 1_{[-1/4,-1/8)∪[1/8,1/4)} + ε·1_{[-1/2,-1/4)∪[1/4,3/4)}` with
/// `a = 2`, `b = 1`, for `0 < ε < 1`.
pub fn bownik_speegle_config(epsilon: &BigRational) -> Result<AffineConfig> {
    if !epsilon.is_positive() || epsilon >= &BigRational::one() {
        return Err(Error::InvalidArgument(format!(
            "epsilon must lie in (0, 1), got {}",
            format_rational(epsilon)
        )));
    }
    AffineConfig::new(2, BigRational::one(), bownik_speegle_psi(epsilon), Mode::Full)
}

pub(crate) fn bownik_speegle_psi(epsilon: &BigRational) -> ModStepFn {
    let core = ModStepFn::indicator_of(&[(-1, 4, -1, 8), (1, 8, 1, 4)]);
    let tail = ModStepFn::indicator_of(&[(-1, 2, -1, 4), (1, 4, 3, 4)]);
    &core + &tail.scale(&Amplitude::rational(epsilon.clone()))
}

/// Closed forms of the projection residuals of `ψ` and `T₁ψ` onto the
/// space of negative dilates.
pub fn bownik_speegle_residuals(epsilon: &BigRational) -> (ModStepFn, ModStepFn) {
    let one = BigRational::one();
    let outer = ModStepFn::indicator_of(&[(-1, 2, -1, 4), (3, 8, 3, 4)]).scale(&Amplitude::rational(epsilon.clone()));
    let minus = (&one - epsilon) / BigRational::from_integer(2.into());
    let plus = (&one + epsilon) / BigRational::from_integer(2.into());
    let left = ModStepFn::indicator_of(&[(-1, 4, -1, 8)]);
    let right = ModStepFn::indicator_of(&[(1, 4, 3, 8)]);
    let psi = &outer + &(&left - &right).scale(&Amplitude::rational(minus));
    let shifted = &outer + &(&left + &right).scale(&Amplitude::rational(plus));
    (psi, shifted.modulate(&one))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::int;

    #[test]
    fn heil_tile() {
        let c = heil_config(2, int(1), int(1)).unwrap();
        assert_eq!(c.psi_hat(), &ModStepFn::indicator(int(1), int(2)));
        assert!(heil_config(3, int(1), int(1)).is_err());
        let wide = heil_config(3, rat(1, 2), int(1)).unwrap();
        assert_eq!(wide.psi_hat().support_hull(), Some((int(1), int(3))));
    }

    #[test]
    fn epsilon_range() {
        assert!(bownik_speegle_config(&int(0)).is_err());
        assert!(bownik_speegle_config(&int(1)).is_err());
        let c = bownik_speegle_config(&rat(1, 4)).unwrap();
        assert_eq!(
            c.psi_hat().norm_sqr().as_rational(),
            Some(rat(1, 4) + rat(1, 16) * rat(3, 4))
        );
    }
}
