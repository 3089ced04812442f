//! Finitely-piecewise functions of one real variable with rational
//! breakpoints, exact amplitudes, and rational modulation frequencies.
//!
//! A [`ModStepFn`] is a finite sum of pieces `amp·e^{-2πi·freq·ξ}·1_{[lo,hi)}`.
//! Pieces sharing a frequency never overlap; pieces with different
//! frequencies may, in which case their values superpose. Every
//! Fourier transform handled by the crate lives in this representation.

mod ops;

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::num::{format_rational, rat, Amplitude, Scalar};

pub use ops::linear_combine;

/// Default tolerance for [`Mode::Tol`] comparisons.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Comparison mode for equality and membership tests.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum Mode {
    #[default]
    Exact,
    Tol(f64),
}

/// One term `amp·e^{-2πi·freq·ξ}` on the half-open interval `[lo, hi)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    #[serde(with = "crate::num::rat")]
    pub lo: BigRational,
    #[serde(with = "crate::num::rat")]
    pub hi: BigRational,
    pub amp: Amplitude,
    #[serde(rename = "mod", with = "crate::num::rat")]
    pub freq: BigRational,
}

impl Piece {
    pub fn new(lo: BigRational, hi: BigRational, amp: impl Into<Amplitude>, freq: BigRational) -> Self {
        Piece {
            lo,
            hi,
            amp: amp.into(),
            freq,
        }
    }

    /// `1_{[lo,hi)}`.
    pub fn indicator(lo: BigRational, hi: BigRational) -> Self {
        Piece::new(lo, hi, Scalar::one(), BigRational::zero())
    }

    pub fn len(&self) -> BigRational {
        &self.hi - &self.lo
    }

    fn validate(&self) -> Result<()> {
        if self.lo >= self.hi {
            return Err(Error::DegenerateInterval {
                lo: format_rational(&self.lo),
                hi: format_rational(&self.hi),
            });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ModStepFn {
    pieces: Vec<Piece>,
}

/// How overlapping same-frequency pieces combine during canonicalization.
#[derive(Clone, Copy)]
enum Overlap {
    Sum,
    RequireEqual,
}

fn canonicalize(pieces: Vec<Piece>, overlap: Overlap) -> Result<ModStepFn> {
    let mut groups: BTreeMap<BigRational, Vec<Piece>> = BTreeMap::new();
    for p in pieces {
        if p.lo >= p.hi {
            continue;
        }
        if p.amp.is_zero() && matches!(overlap, Overlap::Sum) {
            continue;
        }
        groups.entry(p.freq.clone()).or_default().push(p);
    }

    let mut out: Vec<Piece> = Vec::new();
    for (freq, mut group) in groups {
        group.sort_by(|a, b| a.lo.cmp(&b.lo));
        let mut points: Vec<BigRational> = group.iter().flat_map(|p| [p.lo.clone(), p.hi.clone()]).collect();
        points.sort();
        points.dedup();

        let mut active: Vec<usize> = Vec::new();
        let mut next = 0usize;
        let mut merged: Vec<Piece> = Vec::new();
        for w in points.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            active.retain(|&i| &group[i].hi > a);
            while next < group.len() && &group[next].lo <= a {
                if &group[next].hi > a {
                    active.push(next);
                }
                next += 1;
            }
            if active.is_empty() {
                continue;
            }
            let amp = match overlap {
                Overlap::Sum => active.iter().fold(Amplitude::zero(), |acc, &i| acc.add(&group[i].amp)),
                Overlap::RequireEqual => {
                    let first = &group[active[0]].amp;
                    if active.iter().any(|&i| &group[i].amp != first) {
                        return Err(Error::OverlapConflict {
                            lo: format_rational(a),
                            hi: format_rational(b),
                        });
                    }
                    first.clone()
                }
            };
            if amp.is_zero() {
                continue;
            }
            match merged.last_mut() {
                Some(last) if &last.hi == a && last.amp == amp => last.hi = b.clone(),
                _ => merged.push(Piece::new(a.clone(), b.clone(), amp, freq.clone())),
            }
        }
        out.extend(merged);
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo).then_with(|| x.freq.cmp(&y.freq)));
    Ok(ModStepFn { pieces: out })
}

impl ModStepFn {
    /// Validates and canonicalizes a piece list.
    ///
    /// Overlapping pieces with the same frequency must carry the same
    /// amplitude (they are merged); pieces with different frequencies
    /// superpose.
    pub fn make(pieces: Vec<Piece>) -> Result<Self> {
        for p in &pieces {
            p.validate()?;
        }
        canonicalize(pieces, Overlap::RequireEqual)
    }

    /// Canonical sum of arbitrary (possibly overlapping) pieces.
    pub fn superpose(pieces: Vec<Piece>) -> Self {
        canonicalize(pieces, Overlap::Sum).expect("summing never conflicts")
    }

    pub fn zero() -> Self {
        ModStepFn::default()
    }

    /// `1_{[lo,hi)}`.
    pub fn indicator(lo: BigRational, hi: BigRational) -> Self {
        ModStepFn::superpose(vec![Piece::indicator(lo, hi)])
    }

    /// Indicator of a finite union of intervals (overlaps are not double counted).
    pub fn indicator_union(intervals: &[(BigRational, BigRational)]) -> Self {
        let pieces = intervals
            .iter()
            .map(|(a, b)| Piece::indicator(a.clone(), b.clone()))
            .collect();
        ModStepFn::make(pieces).expect("indicators never conflict")
    }

    /// Shorthand for tests and demos: `[(lo_num, lo_den, hi_num, hi_den)]`.
    pub fn indicator_of(intervals: &[(i64, i64, i64, i64)]) -> Self {
        let iv: Vec<_> = intervals.iter().map(|&(a, b, c, d)| (rat(a, b), rat(c, d))).collect();
        ModStepFn::indicator_union(&iv)
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn into_pieces(self) -> Vec<Piece> {
        self.pieces
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty()
    }

    /// True when every amplitude is exact.
    pub fn is_exact(&self) -> bool {
        self.pieces.iter().all(|p| p.amp.is_exact())
    }

    /// Smallest interval containing the support.
    pub fn support_hull(&self) -> Option<(BigRational, BigRational)> {
        let lo = self.pieces.iter().map(|p| &p.lo).min()?;
        let hi = self.pieces.iter().map(|p| &p.hi).max()?;
        Some((lo.clone(), hi.clone()))
    }

    /// Sorted, de-duplicated piece endpoints.
    pub fn breakpoints(&self) -> Vec<BigRational> {
        let mut v: Vec<BigRational> = self.pieces.iter().flat_map(|p| [p.lo.clone(), p.hi.clone()]).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Distinct modulation frequencies present.
    pub fn frequencies(&self) -> Vec<BigRational> {
        let mut v: Vec<BigRational> = self.pieces.iter().map(|p| p.freq.clone()).collect();
        v.sort();
        v.dedup();
        v
    }

    /// `(amp, freq)` terms active at `x`.
    pub fn terms_at(&self, x: &BigRational) -> Vec<(&Amplitude, &BigRational)> {
        self.pieces
            .iter()
            .filter(|p| &p.lo <= x && x < &p.hi)
            .map(|p| (&p.amp, &p.freq))
            .collect()
    }

    /// Intervals (merged) where the function has a nonzero term.
    pub fn support_intervals(&self) -> Vec<(BigRational, BigRational)> {
        let mut iv: Vec<(BigRational, BigRational)> =
            self.pieces.iter().map(|p| (p.lo.clone(), p.hi.clone())).collect();
        iv.sort();
        let mut out: Vec<(BigRational, BigRational)> = Vec::new();
        for (a, b) in iv {
            match out.last_mut() {
                Some(last) if a <= last.1 => {
                    if b > last.1 {
                        last.1 = b;
                    }
                }
                _ => out.push((a, b)),
            }
        }
        out
    }

    /// Maximum amplitude modulus over all pieces (0 for the zero function).
    pub fn max_abs(&self) -> f64 {
        self.pieces.iter().map(|p| p.amp.abs_hp().to_f64()).fold(0.0, f64::max)
    }

    pub(crate) fn from_canonical(pieces: Vec<Piece>) -> Self {
        ModStepFn { pieces }
    }
}

impl Serialize for ModStepFn {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            pieces: &'a [Piece],
        }
        Wire { pieces: &self.pieces }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ModStepFn {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(Deserialize)]
        struct Wire {
            pieces: Vec<Piece>,
        }
        let w = Wire::deserialize(d)?;
        ModStepFn::make(w.pieces).map_err(D::Error::custom)
    }
}

/// `true` iff `q` is an integer.
pub(crate) fn is_integer(q: &BigRational) -> bool {
    q.denom().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::int;

    #[test]
    fn empty_input_is_zero() {
        assert!(ModStepFn::make(vec![]).unwrap().is_zero());
    }

    #[test]
    fn adjacent_equal_pieces_merge() {
        let f = ModStepFn::make(vec![Piece::indicator(int(0), int(1)), Piece::indicator(int(1), int(2))]).unwrap();
        assert_eq!(f.pieces().len(), 1);
        assert_eq!(f.pieces()[0].lo, int(0));
        assert_eq!(f.pieces()[0].hi, int(2));
    }

    #[test]
    fn conflicting_overlap_is_rejected() {
        let e = ModStepFn::make(vec![
            Piece::indicator(int(0), int(1)),
            Piece::new(rat(1, 2), rat(3, 2), Scalar::from_int(2), int(0)),
        ]);
        assert!(matches!(e, Err(Error::OverlapConflict { .. })));
    }

    #[test]
    fn identical_overlap_merges() {
        let f = ModStepFn::make(vec![
            Piece::indicator(int(0), int(1)),
            Piece::indicator(rat(1, 2), rat(3, 2)),
        ])
        .unwrap();
        assert_eq!(f, ModStepFn::indicator(int(0), rat(3, 2)));
    }

    #[test]
    fn degenerate_interval_is_rejected() {
        let e = ModStepFn::make(vec![Piece::indicator(int(1), int(1))]);
        assert!(matches!(e, Err(Error::DegenerateInterval { .. })));
    }

    #[test]
    fn distinct_frequencies_superpose() {
        let f = ModStepFn::make(vec![
            Piece::indicator(int(0), int(2)),
            Piece::new(int(1), int(3), Scalar::one(), int(1)),
        ])
        .unwrap();
        assert_eq!(f.pieces().len(), 2);
        assert_eq!(f.terms_at(&rat(3, 2)).len(), 2);
        assert_eq!(f.support_intervals(), vec![(int(0), int(3))]);
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let psi0 = ModStepFn::indicator_of(&[(-1, 4, -1, 8), (1, 8, 1, 4)]);
        let s = serde_json::to_string(&psi0).unwrap();
        assert!(s.starts_with(
            r#"{"pieces":[{"lo":"-1/4","hi":"-1/8","amp":{"re":"1","im":"0","root":"1","phase":"0"},"mod":"0"}"#
        ));
        let back: ModStepFn = serde_json::from_str(&s).unwrap();
        assert_eq!(back, psi0);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
    }

    #[test]
    fn json_rejects_conflicts() {
        let s = r#"{"pieces":[
            {"lo":"0","hi":"1","amp":{"re":"1","im":"0","root":"1","phase":"0"},"mod":"0"},
            {"lo":"1/2","hi":"3/2","amp":{"re":"2","im":"0","root":"1","phase":"0"},"mod":"0"}]}"#;
        assert!(serde_json::from_str::<ModStepFn>(s).is_err());
    }
}
