use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::{DimensionFunction, SiSpace};
use crate::error::{Error, Result};
use crate::num::{Amplitude, Scalar};
use crate::step::ModStepFn;

fn check_dilation(a: i64) -> Result<BigRational> {
    if a < 2 {
        return Err(Error::InvalidArgument(format!(
            "dilation must be an integer > 1, got {a}"
        )));
    }
    Ok(BigRational::from_integer(a.into()))
}

/// Generators over `bℤ` of the dilated space `D_a V`: the functions
/// `T_{bd/a} D_a g` for each generator `g` and `0 ≤ d < a`, where
/// `(D_a g)^(ξ) = a^{-1/2} ĝ(ξ/a)`.
pub fn dilation_generators(v: &SiSpace, a: i64) -> Result<Vec<ModStepFn>> {
    let ar = check_dilation(a)?;
    let norm = Amplitude::Exact(Scalar::sqrt_rational(&ar.recip()));
    let b = v.lattice().step();
    let mut out = Vec::new();
    for g in v.generators()? {
        let dg = g.affine_reparam(&ar, &BigRational::zero())?.scale(&norm);
        for d in 0..a {
            out.push(dg.modulate(&(b * BigRational::from_integer(d.into()) / &ar)));
        }
    }
    Ok(out)
}

/// `D_a V` as a space over the same lattice `bℤ`.
pub fn dilate_space(v: &SiSpace, a: i64) -> Result<SiSpace> {
    SiSpace::generated(v.lattice(), dilation_generators(v, a)?)
}

/// Both sides of the dilation formula for dimension functions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DilationCheck {
    /// `dim_{D_a V}`.
    pub lhs: DimensionFunction,
    /// `χ ↦ Σ_{d<a} dim_V((χ + d/b)/a)`.
    pub rhs: DimensionFunction,
    pub equal: bool,
}

/// Compares the dimension function of `D_a V` with the sum of `dim_V` over
/// the `a` preimages of each point under `ξ ↦ aξ mod 1/b`.
pub fn dilation_dim_check(v: &SiSpace, a: i64) -> Result<DilationCheck> {
    let ar = check_dilation(a)?;
    let lhs = dilate_space(v, a)?.dimension_function();
    let dim_v = v.dimension_function();
    let period = v.lattice().period();
    let mut rhs = DimensionFunction::zero(period.clone());
    for d in 0..a {
        let shift = &period * BigRational::from_integer(d.into());
        rhs = rhs.add(&dim_v.pullback(&ar, &shift))?;
    }
    let equal = lhs == rhs;
    Ok(DilationCheck { lhs, rhs, equal })
}
