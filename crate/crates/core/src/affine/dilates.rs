use num_rational::BigRational;
use serde::Serialize;

use super::{element_ft, AffineConfig, Element};
use crate::error::{Error, Result};
use crate::fiber::{dilate_space, DimensionFunction, Lattice, SiSpace, SpanDifference};
use crate::step::ModStepFn;

/// Guard on the number of generators of a truncated space.
pub const MAX_GENERATORS: u64 = 4096;

/// The span of `{D^j T_{bk} ψ : -J ≤ j ≤ -1, k ∈ ℤ}`, as a space over the
/// finer lattice `b·a^J ℤ`.
#[derive(Clone, Debug)]
pub struct NegativeDilatesSpace {
    pub depth: u32,
    pub space: SiSpace,
}

fn count_generators(a: i64, depth: u32, level: u32) -> Result<u64> {
    let mut total: u64 = 0;
    for i in 1..=depth {
        let n = (a as u64).checked_pow(level - i);
        total = n.and_then(|n| total.checked_add(n)).unwrap_or(u64::MAX);
    }
    if total > MAX_GENERATORS {
        return Err(Error::InvalidArgument(format!(
            "truncation needs {total} generators (limit {MAX_GENERATORS})"
        )));
    }
    Ok(total)
}

/// Generators of the depth-`depth` truncation as a space over
/// `b·a^level ℤ` (`level ≥ depth`).
///
/// Since `D^{-i} T_{bk} = T_{b·a^i·k} D^{-i}`, writing `k = a^{level-i}·n + r`
/// leaves the elements `(-i, r)` with `0 ≤ r < a^{level-i}`.
pub fn negative_dilates_generators(cfg: &AffineConfig, depth: u32, level: u32) -> Result<Vec<ModStepFn>> {
    if depth == 0 || level < depth {
        return Err(Error::InvalidArgument(format!(
            "need 1 ≤ depth ≤ level, got depth {depth}, level {level}"
        )));
    }
    count_generators(cfg.a(), depth, level)?;
    let mut out = Vec::new();
    for i in 1..=depth {
        let count = cfg.a().pow(level - i);
        for r in 0..count {
            out.push(element_ft(cfg, Element::new(-(i as i32), r)));
        }
    }
    Ok(out)
}

fn fine_lattice(cfg: &AffineConfig, level: u32) -> Lattice {
    Lattice::new(cfg.b() * cfg.a_pow(level as i32)).expect("positive")
}

fn truncation(cfg: &AffineConfig, depth: u32, level: u32) -> Result<SiSpace> {
    SiSpace::generated(
        &fine_lattice(cfg, level),
        negative_dilates_generators(cfg, depth, level)?,
    )
}

pub fn negative_dilates_space(cfg: &AffineConfig, depth: u32) -> Result<NegativeDilatesSpace> {
    Ok(NegativeDilatesSpace {
        depth,
        space: truncation(cfg, depth, depth)?,
    })
}

/// Outcome of the truncation ladder.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Stabilization {
    /// Depths `depth` and `depth + 1` span the same space.
    Stabilized { depth: u32, dimension: DimensionFunction },
    /// No agreement up to the maximal depth; the last two dimension
    /// functions, on the lattice of the deeper one.
    NotStabilized {
        max_depth: u32,
        last: DimensionFunction,
        next: DimensionFunction,
    },
}

/// Smallest `J ≤ max_depth` (`max_depth ≥ 2`) at which the depth-`J` and depth-`J+1`
/// truncations agree: equal dimension functions on the common lattice
/// `b·a^{J+1}ℤ` and the new generator `D^{-J-1}ψ` already a member.
pub fn stabilization_check(cfg: &AffineConfig, max_depth: u32) -> Result<Stabilization> {
    if max_depth < 2 {
        return Err(Error::InvalidArgument(format!(
            "maximal depth must be at least 2, got {max_depth}"
        )));
    }
    let mut last = None;
    for depth in 1..=max_depth {
        let level = depth + 1;
        let shallow = truncation(cfg, depth, level)?;
        let deep = truncation(cfg, level, level)?;
        let d_shallow = shallow.dimension_function();
        let d_deep = deep.dimension_function();
        if d_shallow == d_deep {
            let newcomer = element_ft(cfg, Element::new(-(level as i32), 0));
            if shallow.membership_auto(&newcomer)?.member {
                return Ok(Stabilization::Stabilized {
                    depth,
                    dimension: d_shallow,
                });
            }
        }
        last = Some((d_shallow, d_deep));
    }
    let (last, next) = last.expect("at least one depth");
    Ok(Stabilization::NotStabilized { max_depth, last, next })
}

/// Invariance of the truncated space of negative dilates, and how it
/// compares with its dilate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VkInvariance {
    pub depth: u32,
    #[serde(serialize_with = "crate::num::rat::serialize")]
    pub shift: BigRational,
    /// Translates of every generator by `shift` stay in the space.
    pub invariant: bool,
    /// `ψ` lies in the truncated space.
    pub psi_in_v0: bool,
    /// `ψ` lies in its dilate.
    pub psi_in_v1: bool,
    /// First cell where the truncated space and its dilate differ.
    pub v0_v1_difference: Option<SpanDifference>,
}

impl VkInvariance {
    pub fn v0_differs_from_v1(&self) -> bool {
        self.v0_v1_difference.is_some()
    }
}

/// Tests invariance of the depth-`depth` truncation under translation by
/// `shift`, and compares it with its image under `D_a`.
pub fn vk_invariance_check(cfg: &AffineConfig, depth: u32, shift: &BigRational) -> Result<VkInvariance> {
    let v0 = negative_dilates_space(cfg, depth)?.space;
    let invariant = v0.invariance_test(shift)?;
    let v1 = dilate_space(&v0, cfg.a())?;
    let psi = cfg.psi_hat();
    Ok(VkInvariance {
        depth,
        shift: shift.clone(),
        invariant,
        psi_in_v0: v0.membership_auto(psi)?.member,
        psi_in_v1: v1.membership_auto(psi)?.member,
        v0_v1_difference: v0.span_difference(&v1)?,
    })
}
