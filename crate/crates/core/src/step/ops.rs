use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{is_integer, ModStepFn, Mode, Piece};
use crate::error::{Error, Result};
use crate::num::hp::{ceil_int, floor_int};
use crate::num::{format_rational, Amplitude, Hp, Integral, Scalar};

/// `Σ cᵢ·fᵢ`, canonicalized.
pub fn linear_combine<A>(coeffs: &[A], fns: &[ModStepFn]) -> Result<ModStepFn>
where
    A: Clone + Into<Amplitude>,
{
    if coeffs.len() != fns.len() {
        return Err(Error::LengthMismatch {
            coeffs: coeffs.len(),
            fns: fns.len(),
        });
    }
    let mut pieces = Vec::new();
    for (c, f) in coeffs.iter().zip(fns) {
        let c: Amplitude = c.clone().into();
        if c.is_zero() {
            continue;
        }
        pieces.extend(f.pieces.iter().map(|p| Piece {
            amp: c.mul(&p.amp),
            ..p.clone()
        }));
    }
    Ok(ModStepFn::superpose(pieces))
}

fn check_positive(s: &BigRational) -> Result<()> {
    if s.is_positive() {
        Ok(())
    } else {
        Err(Error::NonpositiveScale(format_rational(s)))
    }
}

impl ModStepFn {
    pub fn scale(&self, c: &Amplitude) -> ModStepFn {
        if c.is_zero() {
            return ModStepFn::zero();
        }
        ModStepFn::superpose(
            self.pieces
                .iter()
                .map(|p| Piece {
                    amp: c.mul(&p.amp),
                    ..p.clone()
                })
                .collect(),
        )
    }

    /// Pointwise `f·conj(g)`.
    pub fn mul_conj(&self, g: &ModStepFn) -> ModStepFn {
        let mut pieces = Vec::new();
        for p in &self.pieces {
            for q in &g.pieces {
                if q.lo >= p.hi || q.hi <= p.lo {
                    continue;
                }
                let lo = (&p.lo).max(&q.lo).clone();
                let hi = (&p.hi).min(&q.hi).clone();
                pieces.push(Piece::new(lo, hi, p.amp.mul(&q.amp.conj()), &p.freq - &q.freq));
            }
        }
        ModStepFn::superpose(pieces)
    }

    /// Pointwise product `f·g`.
    pub fn mul(&self, g: &ModStepFn) -> ModStepFn {
        self.mul_conj(&g.conj())
    }

    /// Pointwise complex conjugate.
    pub fn conj(&self) -> ModStepFn {
        ModStepFn::superpose(
            self.pieces
                .iter()
                .map(|p| Piece::new(p.lo.clone(), p.hi.clone(), p.amp.conj(), -p.freq.clone()))
                .collect(),
        )
    }

    /// `ξ ↦ f((ξ - t)/s)` for `s > 0`: breakpoints map `x ↦ s·x + t`.
    pub fn affine_reparam(&self, s: &BigRational, t: &BigRational) -> Result<ModStepFn> {
        check_positive(s)?;
        Ok(ModStepFn::superpose(
            self.pieces
                .iter()
                .map(|p| {
                    let freq = &p.freq / s;
                    let amp = if p.freq.is_zero() || t.is_zero() {
                        p.amp.clone()
                    } else {
                        p.amp.mul_scalar(&Scalar::cis_turns(&(&freq * t)))
                    };
                    Piece::new(s * &p.lo + t, s * &p.hi + t, amp, freq)
                })
                .collect(),
        ))
    }

    /// `ξ ↦ f(ξ + t)`.
    pub fn shift_arg(&self, t: &BigRational) -> ModStepFn {
        self.affine_reparam(&BigRational::from_integer(1.into()), &-t.clone())
            .expect("unit scale is positive")
    }

    /// Multiplication by `e^{-2πi·t·ξ}`.
    pub fn modulate(&self, t: &BigRational) -> ModStepFn {
        if t.is_zero() {
            return self.clone();
        }
        ModStepFn::superpose(
            self.pieces
                .iter()
                .map(|p| Piece {
                    freq: &p.freq + t,
                    ..p.clone()
                })
                .collect(),
        )
    }

    /// Restriction to `[lo, hi)`.
    pub fn restrict(&self, lo: &BigRational, hi: &BigRational) -> ModStepFn {
        let pieces = self
            .pieces
            .iter()
            .filter(|p| &p.lo < hi && &p.hi > lo)
            .map(|p| Piece {
                lo: (&p.lo).max(lo).clone(),
                hi: (&p.hi).min(hi).clone(),
                ..p.clone()
            })
            .collect();
        ModStepFn::superpose(pieces)
    }

    /// Cuts the function along the grid `p·ℤ`. Component `m` is
    /// `ξ ↦ f(ξ + m·p)` restricted to `[0, p)`; only nonzero components
    /// are returned.
    pub fn slices(&self, p: &BigRational) -> Result<BTreeMap<BigInt, ModStepFn>> {
        check_positive(p)?;
        let mut parts: BTreeMap<BigInt, Vec<Piece>> = BTreeMap::new();
        for piece in &self.pieces {
            let m_lo = floor_int(&(&piece.lo / p));
            let m_hi = ceil_int(&(&piece.hi / p));
            let mut m = m_lo;
            while m < m_hi {
                let base = BigRational::from_integer(m.clone()) * p;
                let lo = (&piece.lo).max(&base).clone();
                let top = &base + p;
                let hi = (&piece.hi).min(&top).clone();
                if lo < hi {
                    let amp = if piece.freq.is_zero() {
                        piece.amp.clone()
                    } else {
                        piece.amp.mul_scalar(&Scalar::cis_turns(&-(&piece.freq * &base)))
                    };
                    parts.entry(m.clone()).or_default().push(Piece::new(
                        lo - &base,
                        hi - &base,
                        amp,
                        piece.freq.clone(),
                    ));
                }
                m += 1;
            }
        }
        Ok(parts
            .into_iter()
            .map(|(m, ps)| (m, ModStepFn::superpose(ps)))
            .filter(|(_, f)| !f.is_zero())
            .collect())
    }

    /// `Σ_m f(ξ + m·p)` on `[0, p)`.
    pub fn periodize(&self, p: &BigRational) -> Result<ModStepFn> {
        let slices = self.slices(p)?;
        Ok(ModStepFn::superpose(
            slices.into_values().flat_map(ModStepFn::into_pieces).collect(),
        ))
    }

    /// `∫ f`, exact whenever the pieces allow it.
    ///
    /// Unmodulated pieces and pieces whose modulation completes whole
    /// periods integrate exactly. Exact contributions are grouped by their
    /// radical class; if more than one class survives, or a modulated piece
    /// contributes, the value is a 128-bit float and `error_bound` bounds
    /// the rounding error of this integration (input amplitudes that were
    /// already approximate are taken as given).
    pub fn integrate(&self) -> Integral {
        let mut classes: BTreeMap<(BigInt, BigRational), Scalar> = BTreeMap::new();
        let mut approx: Vec<Complex<Hp>> = Vec::new();
        for p in &self.pieces {
            let len = p.len();
            if p.freq.is_zero() {
                match &p.amp {
                    Amplitude::Exact(s) => {
                        let term = s.mul(&Scalar::from_rational(len));
                        let key = (term.root().clone(), term.phase().clone());
                        let slot = classes.entry(key).or_insert_with(Scalar::zero);
                        *slot = slot.try_add(&term).expect("same radical class");
                    }
                    Amplitude::Approx(z) => approx.push(z.clone() * Hp::from_rational(&len)),
                }
                continue;
            }
            if is_integer(&(&p.freq * &len)) {
                continue;
            }
            // ∫_lo^hi e^{-2πiτξ} dξ = (e^{-2πiτ·hi} - e^{-2πiτ·lo}) · i/(2πτ)
            let (ch, sh) = Hp::cos_sin_turns(&-(&p.freq * &p.hi));
            let (cl, sl) = Hp::cos_sin_turns(&-(&p.freq * &p.lo));
            let diff = Complex::new(ch - cl, sh - sl);
            let k = Hp::one() / (Hp::from_i64(2) * Hp::pi() * Hp::from_rational(&p.freq));
            let prim = Complex::new(-diff.im * k.clone(), diff.re * k);
            approx.push(p.amp.to_hp() * prim);
        }
        classes.retain(|_, s| !s.is_zero());
        if approx.is_empty() && classes.len() <= 1 {
            return Integral::exact(classes.into_values().next().unwrap_or_else(Scalar::zero));
        }
        let mut terms: Vec<Complex<Hp>> = classes.into_values().map(|s| s.to_hp()).collect();
        terms.extend(approx);
        let n = terms.len() as f64;
        let mut mag = 0.0f64;
        let mut sum = Complex::new(Hp::zero(), Hp::zero());
        for t in terms {
            mag += t.norm_sqr().sqrt().to_f64();
            sum = sum + t;
        }
        let eps = Hp::epsilon().to_f64();
        Integral {
            value: Amplitude::Approx(sum),
            error_bound: (n + 16.0) * 4.0 * eps * mag,
        }
    }

    /// `∫ f·conj(g)`.
    pub fn inner(&self, g: &ModStepFn) -> Integral {
        self.mul_conj(g).integrate()
    }

    /// `∫ |f|²`.
    pub fn norm_sqr(&self) -> Integral {
        self.inner(self)
    }

    /// Value at `x`, rounded to 128 bits.
    pub fn eval(&self, x: &BigRational) -> Complex<Hp> {
        let mut acc = Complex::new(Hp::zero(), Hp::zero());
        for (amp, freq) in self.terms_at(x) {
            let (c, s) = Hp::cos_sin_turns(&-(freq * x));
            acc = acc + amp.to_hp() * Complex::new(c, s);
        }
        acc
    }

    /// Equality of functions.
    ///
    /// `Mode::Exact` compares canonical forms and fails with
    /// `InexactOperand` if either side carries an approximate amplitude.
    /// `Mode::Tol(ε)` accepts when every amplitude of `f - g` on the common
    /// refinement has modulus at most `ε`.
    pub fn equals(&self, g: &ModStepFn, mode: Mode) -> Result<bool> {
        match mode {
            Mode::Exact => {
                if !self.is_exact() || !g.is_exact() {
                    return Err(Error::InexactOperand);
                }
                Ok(self == g)
            }
            Mode::Tol(eps) => Ok((self - g).max_abs() <= eps),
        }
    }
}

impl Add for &ModStepFn {
    type Output = ModStepFn;
    fn add(self, g: &ModStepFn) -> ModStepFn {
        ModStepFn::superpose(self.pieces.iter().chain(&g.pieces).cloned().collect())
    }
}

impl Sub for &ModStepFn {
    type Output = ModStepFn;
    fn sub(self, g: &ModStepFn) -> ModStepFn {
        self + &(-g)
    }
}

impl Neg for &ModStepFn {
    type Output = ModStepFn;
    fn neg(self) -> ModStepFn {
        ModStepFn::from_canonical(
            self.pieces
                .iter()
                .map(|p| Piece {
                    amp: p.amp.neg(),
                    ..p.clone()
                })
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int, rat};

    fn ind(a: (i64, i64), b: (i64, i64)) -> ModStepFn {
        ModStepFn::indicator(rat(a.0, a.1), rat(b.0, b.1))
    }

    #[test]
    fn integrate_indicator_is_exact_length() {
        let f = ModStepFn::indicator_of(&[(-1, 4, -1, 8), (1, 8, 1, 4)]);
        assert_eq!(f.integrate().as_rational(), Some(rat(1, 4)));
        assert_eq!(f.integrate().error_bound, 0.0);
    }

    #[test]
    fn full_periods_integrate_to_exact_zero() {
        let f = ind((0, 1), (2, 1)).modulate(&rat(1, 2));
        let i = f.integrate();
        assert!(i.is_exact());
        assert!(i.value.is_zero());
    }

    #[test]
    fn modulated_piece_integrates_in_closed_form() {
        // ∫_0^1 e^{-2πi ξ/4} dξ = (e^{-iπ/2} - 1)/(-iπ/2) = (2/π)(1 - i)
        let f = ind((0, 1), (1, 1)).modulate(&rat(1, 4));
        let v = f.integrate();
        let z = v.to_hp();
        let two_over_pi = 2.0 / std::f64::consts::PI;
        assert!((z.re.to_f64() - two_over_pi).abs() < 1e-15);
        assert!((z.im.to_f64() + two_over_pi).abs() < 1e-15);
        assert!(v.error_bound > 0.0 && v.error_bound < 1e-30);
    }

    #[test]
    fn affine_reparam_maps_breakpoints() {
        let f = ind((1, 1), (2, 1));
        let g = f.affine_reparam(&int(2), &int(1)).unwrap();
        assert_eq!(g, ind((3, 1), (5, 1)));
        assert!(matches!(
            f.affine_reparam(&int(0), &int(0)),
            Err(Error::NonpositiveScale(_))
        ));
    }

    #[test]
    fn affine_reparam_tracks_modulation_phase() {
        let f = ind((0, 1), (1, 1)).modulate(&rat(1, 3));
        let s = rat(3, 2);
        let t = rat(1, 5);
        let g = f.affine_reparam(&s, &t).unwrap();
        for x in [rat(1, 4), rat(7, 10), rat(1, 1)] {
            let lhs = g.eval(&x);
            let rhs = f.eval(&((&x - &t) / &s));
            assert!((lhs.re.to_f64() - rhs.re.to_f64()).abs() < 1e-30);
            assert!((lhs.im.to_f64() - rhs.im.to_f64()).abs() < 1e-30);
        }
    }

    #[test]
    fn periodize_folds_onto_one_period() {
        let f = ind((-1, 2), (3, 2));
        let p = f.periodize(&int(1)).unwrap();
        assert_eq!(
            p,
            ModStepFn::indicator(int(0), int(1)).scale(&Amplitude::rational(int(2)))
        );
    }

    #[test]
    fn periodize_carries_modulation_phase() {
        // f = e^{-2πi ξ/2} on [0,2); f(ξ) + f(ξ+1) = 0 on [0,1)
        let f = ind((0, 1), (2, 1)).modulate(&rat(1, 2));
        assert!(f.periodize(&int(1)).unwrap().is_zero());
    }

    #[test]
    fn linear_combine_checks_lengths() {
        let f = ind((0, 1), (1, 1));
        let e = linear_combine(&[Scalar::one()], &[f.clone(), f]);
        assert!(matches!(e, Err(Error::LengthMismatch { coeffs: 1, fns: 2 })));
    }

    #[test]
    fn linear_combine_cancels_exactly() {
        let f = ind((0, 1), (1, 1));
        let g = ind((1, 2), (2, 1));
        let h = linear_combine(&[Scalar::one(), Scalar::from_int(-1)], &[f, g]).unwrap();
        let expected = ModStepFn::superpose(vec![
            Piece::indicator(int(0), rat(1, 2)),
            Piece::new(int(1), int(2), Scalar::from_int(-1), int(0)),
        ]);
        assert_eq!(h, expected);
    }

    #[test]
    fn exact_equality_rejects_inexact() {
        let f = ind((0, 1), (1, 1));
        let g = f.scale(&Amplitude::Approx(Complex::new(Hp::from_f64(1.0), Hp::zero())));
        assert_eq!(f.equals(&g, Mode::Exact), Err(Error::InexactOperand));
        assert_eq!(f.equals(&g, Mode::Tol(1e-12)), Ok(true));
    }

    #[test]
    fn mixed_radicals_integrate_approximately() {
        let f = ModStepFn::superpose(vec![
            Piece::new(int(0), int(1), Scalar::sqrt_rational(&int(2)), int(0)),
            Piece::indicator(int(1), int(2)),
        ]);
        let i = f.integrate();
        assert!(!i.is_exact());
        assert!((i.re_f64() - (1.0 + 2f64.sqrt())).abs() < 1e-15);
    }
}
