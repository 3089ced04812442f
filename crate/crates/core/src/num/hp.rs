//! Fixed 128-bit binary floating point backed by `astro-float`.
//!
//! Every value carries exactly [`HP_PRECISION`] mantissa bits and all
//! arithmetic rounds to nearest-even, so results are reproducible across
//! platforms.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, ToPrimitive, Zero};

/// Mantissa width in bits of every [`Hp`] value.
pub const HP_PRECISION: usize = 128;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constants cache"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// A 128-bit-mantissa real number.
#[derive(Clone)]
pub struct Hp(BigFloat);

impl Hp {
    pub fn from_f64(x: f64) -> Self {
        Hp(BigFloat::from_f64(x, HP_PRECISION))
    }

    pub fn from_i64(x: i64) -> Self {
        Hp(BigFloat::from_i64(x, HP_PRECISION))
    }

    pub fn from_bigint(x: &BigInt) -> Self {
        match x.to_i64() {
            Some(v) => Hp::from_i64(v),
            None => {
                let s = x.to_string();
                Hp(with_consts(|cc| BigFloat::parse(&s, Radix::Dec, HP_PRECISION, RM, cc)))
            }
        }
    }

    pub fn from_rational(q: &BigRational) -> Self {
        let n = Hp::from_bigint(q.numer());
        if q.denom().is_one() {
            n
        } else {
            n / Hp::from_bigint(q.denom())
        }
    }

    /// Nearest `f64` (truncating mantissa bits below the top word).
    pub fn to_f64(&self) -> f64 {
        match self.0.as_raw_parts() {
            None => f64::NAN,
            Some((words, _, sign, exp, _)) => {
                let top = match words.last() {
                    Some(&w) if w != 0 => w,
                    _ => return 0.0,
                };
                // value = 0.top... * 2^exp
                let mut v = top as f64;
                let mut e = exp as i64 - 64;
                while e > 0 {
                    let step = e.min(512);
                    v *= 2f64.powi(step as i32);
                    e -= step;
                }
                while e < 0 {
                    let step = (-e).min(512);
                    v /= 2f64.powi(step as i32);
                    e += step;
                }
                if sign == Sign::Neg {
                    -v
                } else {
                    v
                }
            }
        }
    }

    pub fn pi() -> Self {
        Hp(with_consts(|cc| cc.pi(HP_PRECISION, RM)))
    }

    pub fn sqrt(&self) -> Self {
        if self.0.is_zero() {
            return Hp::zero();
        }
        Hp(self.0.sqrt(HP_PRECISION, RM))
    }

    pub fn abs(&self) -> Self {
        Hp(self.0.abs())
    }

    pub fn cos(&self) -> Self {
        Hp(with_consts(|cc| self.0.cos(HP_PRECISION, RM, cc)))
    }

    pub fn sin(&self) -> Self {
        Hp(with_consts(|cc| self.0.sin(HP_PRECISION, RM, cc)))
    }

    /// `(cos 2πq, sin 2πq)`, with `q` reduced modulo 1 exactly before any
    /// rounding happens.
    pub fn cos_sin_turns(q: &BigRational) -> (Self, Self) {
        let frac = q - q.floor();
        // Exact values at multiples of 1/4 keep signs and zeros clean.
        let four = BigRational::from_integer(4.into());
        let quarter = &frac * &four;
        if quarter.is_integer() {
            return match quarter.to_integer().to_i64().unwrap_or(0) {
                0 => (Hp::one(), Hp::zero()),
                1 => (Hp::zero(), Hp::one()),
                2 => (-Hp::one(), Hp::zero()),
                _ => (Hp::zero(), -Hp::one()),
            };
        }
        let angle = Hp::from_rational(&(frac * BigRational::from_integer(2.into()))) * Hp::pi();
        (angle.cos(), angle.sin())
    }

    /// `2^-k`, exact.
    pub fn pow2_neg(k: u32) -> Self {
        let p = BigFloat::from_u64(2, HP_PRECISION).powi(k as usize, HP_PRECISION, RM);
        Hp(BigFloat::from_u64(1, HP_PRECISION).div(&p, HP_PRECISION, RM))
    }

    /// Unit round-off of the format.
    pub fn epsilon() -> Self {
        Hp::pow2_neg(HP_PRECISION as u32 - 1)
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Decimal rendering of all mantissa digits; stable across runs.
    pub fn to_decimal(&self) -> String {
        with_consts(|cc| self.0.format(Radix::Dec, RM, cc)).unwrap_or_else(|_| "NaN".into())
    }

    pub fn parse_decimal(s: &str) -> Option<Self> {
        let v = with_consts(|cc| BigFloat::parse(s, Radix::Dec, HP_PRECISION, RM, cc));
        if v.is_nan() {
            None
        } else {
            Some(Hp(v))
        }
    }
}

impl fmt::Debug for Hp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hp({})", self.to_decimal())
    }
}

impl fmt::Display for Hp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal())
    }
}

impl PartialEq for Hp {
    fn eq(&self, other: &Self) -> bool {
        self.0.cmp(&other.0) == Some(0)
    }
}

impl PartialOrd for Hp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.cmp(&other.0).map(|c| c.cmp(&0))
    }
}

macro_rules! hp_binop {
    ($tr:ident, $m:ident, $inner:ident) => {
        impl $tr for Hp {
            type Output = Hp;
            fn $m(self, rhs: Hp) -> Hp {
                Hp(self.0.$inner(&rhs.0, HP_PRECISION, RM))
            }
        }
        impl<'a> $tr<&'a Hp> for &'a Hp {
            type Output = Hp;
            fn $m(self, rhs: &'a Hp) -> Hp {
                Hp(self.0.$inner(&rhs.0, HP_PRECISION, RM))
            }
        }
    };
}

hp_binop!(Add, add, add);
hp_binop!(Sub, sub, sub);
hp_binop!(Mul, mul, mul);
hp_binop!(Div, div, div);

impl Rem for Hp {
    type Output = Hp;
    fn rem(self, rhs: Hp) -> Hp {
        Hp(self.0.rem(&rhs.0))
    }
}

impl Neg for Hp {
    type Output = Hp;
    fn neg(self) -> Hp {
        Hp(self.0.neg())
    }
}

impl Zero for Hp {
    fn zero() -> Self {
        Hp(BigFloat::from_u64(0, HP_PRECISION))
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for Hp {
    fn one() -> Self {
        Hp(BigFloat::from_u64(1, HP_PRECISION))
    }
}

impl Num for Hp {
    type FromStrRadixErr = String;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, String> {
        if radix != 10 {
            return Err(format!("unsupported radix {radix}"));
        }
        Hp::parse_decimal(s).ok_or_else(|| format!("invalid decimal `{s}`"))
    }
}

/// Exact floor of a rational as an integer.
pub(crate) fn floor_int(q: &BigRational) -> BigInt {
    q.numer().div_floor(q.denom())
}

/// Exact ceiling of a rational as an integer.
pub(crate) fn ceil_int(q: &BigRational) -> BigInt {
    -((-q.numer()).div_floor(q.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn to_f64_round_trips_doubles() {
        for x in [1.0, 0.75, -3.5, 1e-30, 6.02e23, -2.5e-300] {
            assert_eq!(Hp::from_f64(x).to_f64(), x);
        }
        assert_eq!(Hp::zero().to_f64(), 0.0);
    }

    #[test]
    fn rational_conversion_is_accurate() {
        let q = BigRational::new(1.into(), 3.into());
        let v = Hp::from_rational(&q) * Hp::from_i64(3);
        let err = (v - Hp::one()).abs();
        assert!(err < Hp::pow2_neg(125));
    }

    #[test]
    fn turns_hit_exact_quarters() {
        let half = BigRational::new(1.into(), 2.into());
        let (c, s) = Hp::cos_sin_turns(&half);
        assert_eq!(c, -Hp::one());
        assert!(s.is_zero());
        let (c, s) = Hp::cos_sin_turns(&BigRational::new((-7).into(), 4.into()));
        assert!(c.is_zero());
        assert_eq!(s, Hp::one());
    }

    #[test]
    fn turns_match_f64_trig() {
        let q = BigRational::new(1.into(), 12.into());
        let (c, s) = Hp::cos_sin_turns(&q);
        assert!((c.to_f64() - (std::f64::consts::PI / 6.0).cos()).abs() < 1e-15);
        assert!((s.to_f64() - 0.5).abs() < 1e-15);
        let residual = (&(&c * &c) + &(&s * &s)) - Hp::one();
        assert!(residual.abs() < Hp::pow2_neg(120));
    }

    #[test]
    fn floor_and_ceil() {
        let q = BigRational::new((-7).into(), 2.into());
        assert_eq!(floor_int(&q), BigInt::from(-4));
        assert_eq!(ceil_int(&q), BigInt::from(-3));
        let z = BigRational::from_integer(5.into());
        assert_eq!(floor_int(&z), BigInt::from(5));
        assert_eq!(ceil_int(&z), BigInt::from(5));
    }
}
