use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::Zero;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::num::format_rational;

/// Integer-valued step function on the dual domain `[0, period)`.
///
/// Steps cover the whole domain, are sorted, and adjacent steps carry
/// different values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionFunction {
    period: BigRational,
    steps: Vec<(BigRational, BigRational, u32)>,
}

impl DimensionFunction {
    /// Builds from possibly partial, unsorted `(lo, hi, value)` steps; gaps
    /// count as 0. Steps must lie in `[0, period)` and not overlap.
    pub fn from_steps(period: BigRational, mut steps: Vec<(BigRational, BigRational, u32)>) -> Result<Self> {
        steps.retain(|(lo, hi, _)| lo < hi);
        steps.sort();
        let mut out: Vec<(BigRational, BigRational, u32)> = Vec::new();
        let mut cursor = BigRational::zero();
        for (lo, hi, v) in steps {
            if lo < cursor || hi > period {
                return Err(Error::InvalidArgument(format!(
                    "step [{}, {}) overlaps or leaves [0, {})",
                    format_rational(&lo),
                    format_rational(&hi),
                    format_rational(&period)
                )));
            }
            if lo > cursor {
                push_merged(&mut out, cursor.clone(), lo.clone(), 0);
            }
            cursor = hi.clone();
            push_merged(&mut out, lo, hi, v);
        }
        if cursor < period {
            push_merged(&mut out, cursor, period.clone(), 0);
        }
        Ok(DimensionFunction { period, steps: out })
    }

    pub fn zero(period: BigRational) -> Self {
        DimensionFunction::from_steps(period, Vec::new()).expect("empty step list")
    }

    pub fn period(&self) -> &BigRational {
        &self.period
    }

    pub fn steps(&self) -> &[(BigRational, BigRational, u32)] {
        &self.steps
    }

    pub fn value_at(&self, x: &BigRational) -> u32 {
        self.steps
            .iter()
            .find(|(lo, hi, _)| lo <= x && x < hi)
            .map_or(0, |s| s.2)
    }

    pub fn max(&self) -> u32 {
        self.steps.iter().map(|s| s.2).max().unwrap_or(0)
    }

    /// `∫ dim` over the domain.
    pub fn integral(&self) -> BigRational {
        self.steps
            .iter()
            .map(|(lo, hi, v)| (hi - lo) * BigRational::from_integer((*v).into()))
            .sum()
    }

    /// `χ ↦ self((χ + shift)/scale)` on `[0, period)`; points whose image
    /// falls outside the domain get 0.
    pub fn pullback(&self, scale: &BigRational, shift: &BigRational) -> Self {
        let zero = BigRational::zero();
        let steps = self
            .steps
            .iter()
            .filter_map(|(lo, hi, v)| {
                let a = (scale * lo - shift).max(zero.clone());
                let b = (scale * hi - shift).min(self.period.clone());
                (a < b).then_some((a, b, *v))
            })
            .collect();
        DimensionFunction::from_steps(self.period.clone(), steps).expect("pullback steps are disjoint")
    }

    /// Dimension function of the same space regarded as invariant under the
    /// coarser lattice `factor·bℤ`: `χ ↦ Σ_{d<factor} self(χ + d·p/factor)`
    /// on `[0, p/factor)`.
    pub fn coarsen(&self, factor: u32) -> Self {
        let period = &self.period / BigRational::from_integer(factor.into());
        let zero = BigRational::zero();
        let mut out = DimensionFunction::zero(period.clone());
        for d in 0..factor {
            let off = &period * BigRational::from_integer(d.into());
            let steps = self
                .steps
                .iter()
                .filter_map(|(lo, hi, v)| {
                    let a = (lo - &off).max(zero.clone());
                    let b = (hi - &off).min(period.clone());
                    (a < b).then_some((a, b, *v))
                })
                .collect();
            let part = DimensionFunction::from_steps(period.clone(), steps).expect("disjoint steps");
            out = out.add(&part).expect("same domain");
        }
        out
    }

    /// Pointwise sum; both functions must share the domain.
    pub fn add(&self, other: &DimensionFunction) -> Result<Self> {
        if self.period != other.period {
            return Err(Error::InvalidArgument(
                "dimension functions on different domains".into(),
            ));
        }
        let mut cuts: Vec<BigRational> = self
            .steps
            .iter()
            .chain(&other.steps)
            .flat_map(|(lo, hi, _)| [lo.clone(), hi.clone()])
            .collect();
        cuts.sort();
        cuts.dedup();
        let steps = cuts
            .windows(2)
            .map(|w| (w[0].clone(), w[1].clone(), self.value_at(&w[0]) + other.value_at(&w[0])))
            .collect();
        DimensionFunction::from_steps(self.period.clone(), steps)
    }

    /// `self ≤ other` everywhere.
    pub fn le(&self, other: &DimensionFunction) -> bool {
        let mut cuts: Vec<&BigRational> = self.steps.iter().chain(&other.steps).map(|s| &s.0).collect();
        cuts.sort();
        cuts.dedup();
        cuts.into_iter().all(|x| self.value_at(x) <= other.value_at(x))
    }

    /// CSV with header `lo,hi,dim`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("lo,hi,dim\n");
        for (lo, hi, v) in &self.steps {
            let _ = writeln!(s, "{},{},{}", format_rational(lo), format_rational(hi), v);
        }
        s
    }
}

fn push_merged(out: &mut Vec<(BigRational, BigRational, u32)>, lo: BigRational, hi: BigRational, v: u32) {
    if let Some(last) = out.last_mut() {
        if last.2 == v && last.1 == lo {
            last.1 = hi;
            return;
        }
    }
    out.push((lo, hi, v));
}

impl Serialize for DimensionFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Step {
            lo: String,
            hi: String,
            dim: u32,
        }
        let steps: Vec<Step> = self
            .steps
            .iter()
            .map(|(lo, hi, v)| Step {
                lo: format_rational(lo),
                hi: format_rational(hi),
                dim: *v,
            })
            .collect();
        let mut st = s.serialize_struct("DimensionFunction", 2)?;
        st.serialize_field("period", &format_rational(&self.period))?;
        st.serialize_field("steps", &steps)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int, rat};

    #[test]
    fn gaps_fill_with_zero_and_merge() {
        let d =
            DimensionFunction::from_steps(int(1), vec![(rat(1, 4), rat(1, 2), 1), (rat(1, 2), rat(3, 4), 1)]).unwrap();
        assert_eq!(
            d.steps(),
            &[
                (int(0), rat(1, 4), 0),
                (rat(1, 4), rat(3, 4), 1),
                (rat(3, 4), int(1), 0)
            ]
        );
        assert_eq!(d.integral(), rat(1, 2));
        assert_eq!(d.to_csv(), "lo,hi,dim\n0,1/4,0\n1/4,3/4,1\n3/4,1,0\n");
    }

    #[test]
    fn pullback_and_add() {
        let d =
            DimensionFunction::from_steps(int(1), vec![(rat(1, 8), rat(1, 4), 1), (rat(3, 4), rat(7, 8), 1)]).unwrap();
        // χ ↦ d(χ/2) + d((χ + 1)/2)
        let sum = d.pullback(&int(2), &int(0)).add(&d.pullback(&int(2), &int(1))).unwrap();
        assert_eq!(
            sum.steps(),
            &[
                (int(0), rat(1, 4), 0),
                (rat(1, 4), rat(3, 4), 1),
                (rat(3, 4), int(1), 0)
            ]
        );
    }

    #[test]
    fn overlapping_steps_are_rejected() {
        assert!(DimensionFunction::from_steps(int(1), vec![(int(0), rat(1, 2), 1), (rat(1, 4), int(1), 1)]).is_err());
    }
}
