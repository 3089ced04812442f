//! Fiberization over a lattice `bℤ`, range functions, dimension functions,
//! and pointwise projections.
//!
//! A function `f` is represented on the Fourier side by the family of
//! components `ξ ↦ f̂(ξ + m/b)` on the dual domain `[0, 1/b)`. Translating
//! `f` by `bk` multiplies every component by the same factor `e^{-2πibkξ}`,
//! so lattice-invariant spaces are described cell by cell by a constant
//! subspace of component space.

mod dilate;
mod dimension;
mod space;

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{format_rational, Integral};
use crate::step::ModStepFn;

pub use dilate::{dilate_space, dilation_dim_check, dilation_generators, DilationCheck};
pub use dimension::DimensionFunction;
pub use space::{Cell, Membership, SiSpace, SpanDifference, RANK_TOL};

/// The translation lattice `bℤ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lattice {
    #[serde(with = "crate::num::rat")]
    b: BigRational,
}

impl Lattice {
    pub fn new(b: BigRational) -> Result<Self> {
        if !b.is_positive() {
            return Err(Error::NonpositiveScale(format_rational(&b)));
        }
        Ok(Lattice { b })
    }

    pub fn integer() -> Self {
        Lattice { b: BigRational::one() }
    }

    pub fn step(&self) -> &BigRational {
        &self.b
    }

    /// Length `1/b` of the dual domain `[0, 1/b)`.
    pub fn period(&self) -> BigRational {
        self.b.recip()
    }

    pub(crate) fn check_same(&self, other: &Lattice) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::LatticeMismatch(
                format_rational(&self.b),
                format_rational(&other.b),
            ))
        }
    }
}

/// Components `m ↦ (ξ ↦ f̂(ξ + m/b))` on `[0, 1/b)`; zero components are
/// omitted.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberMap {
    lattice: Lattice,
    components: BTreeMap<i64, ModStepFn>,
}

impl FiberMap {
    pub fn fiberize(f: &ModStepFn, lattice: &Lattice) -> Result<Self> {
        let slices = f.slices(&lattice.period())?;
        let mut components = BTreeMap::new();
        for (m, g) in slices {
            let m = m
                .to_i64()
                .ok_or_else(|| Error::InvalidArgument(format!("fiber index {m} out of range")))?;
            components.insert(m, g);
        }
        Ok(FiberMap {
            lattice: lattice.clone(),
            components,
        })
    }

    pub fn from_components(lattice: Lattice, components: BTreeMap<i64, ModStepFn>) -> Self {
        let components = components.into_iter().filter(|(_, g)| !g.is_zero()).collect();
        FiberMap { lattice, components }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn components(&self) -> &BTreeMap<i64, ModStepFn> {
        &self.components
    }

    pub fn component(&self, m: i64) -> Option<&ModStepFn> {
        self.components.get(&m)
    }

    /// Reassembles `f̂` from its components.
    pub fn unfiberize(&self) -> ModStepFn {
        let period = self.lattice.period();
        let one = BigRational::one();
        let pieces = self
            .components
            .iter()
            .flat_map(|(&m, g)| {
                let shift = BigRational::from_integer(m.into()) * &period;
                g.affine_reparam(&one, &shift)
                    .expect("unit scale is positive")
                    .into_pieces()
            })
            .collect();
        ModStepFn::superpose(pieces)
    }

    /// `Σ_m ∫ |component_m|²`.
    pub fn norm_sqr(&self) -> Integral {
        let parts: Vec<Integral> = self.components.values().map(ModStepFn::norm_sqr).collect();
        Integral::sum(&parts)
    }

    /// Every component multiplied by `e^{-2πi·t·ξ}`.
    pub fn modulate(&self, t: &BigRational) -> FiberMap {
        FiberMap {
            lattice: self.lattice.clone(),
            components: self.components.iter().map(|(&m, g)| (m, g.modulate(t))).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int, rat};

    fn psi0() -> ModStepFn {
        ModStepFn::indicator_of(&[(-1, 4, -1, 8), (1, 8, 1, 4)])
    }

    #[test]
    fn fiberize_splits_support_across_components() {
        let fm = FiberMap::fiberize(&psi0(), &Lattice::integer()).unwrap();
        let keys: Vec<i64> = fm.components().keys().copied().collect();
        assert_eq!(keys, vec![-1, 0]);
        assert_eq!(fm.component(0).unwrap(), &ModStepFn::indicator(rat(1, 8), rat(1, 4)));
        assert_eq!(fm.component(-1).unwrap(), &ModStepFn::indicator(rat(3, 4), rat(7, 8)));
    }

    #[test]
    fn fiberize_zero_is_empty() {
        let fm = FiberMap::fiberize(&ModStepFn::zero(), &Lattice::new(rat(1, 3)).unwrap()).unwrap();
        assert!(fm.components().is_empty());
    }

    #[test]
    fn unfiberize_inverts_fiberize() {
        let f = psi0().modulate(&rat(1, 3));
        let lat = Lattice::new(int(2)).unwrap();
        let fm = FiberMap::fiberize(&f, &lat).unwrap();
        assert_eq!(fm.unfiberize(), f);
        assert_eq!(fm.norm_sqr(), f.norm_sqr());
    }

    #[test]
    fn lattice_must_be_positive() {
        assert!(matches!(Lattice::new(int(0)), Err(Error::NonpositiveScale(_))));
    }
}
