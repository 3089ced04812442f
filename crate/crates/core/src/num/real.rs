//! Scalar traits for the linear-algebra layer.
//!
//! `Real` covers every ordered field the crate computes over: `f32`, `f64`,
//! the 128-bit [`Hp`], and exact [`BigRational`]. `RealFloat` adds the
//! operations that only make sense for rounded arithmetic.

use std::fmt::Debug;
use std::ops::Neg;

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, ToPrimitive};

use super::hp::Hp;

pub trait Real: Clone + Debug + PartialOrd + Num + Neg<Output = Self> + Send + Sync + 'static {
    /// True when arithmetic never rounds.
    const EXACT: bool;

    fn from_rational(q: &BigRational) -> Self;
    fn to_f64(&self) -> f64;
    fn to_hp(&self) -> Hp;

    fn abs_val(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

pub trait RealFloat: Real {
    fn sqrt(&self) -> Self;
    fn epsilon() -> Self;
    fn from_f64(x: f64) -> Self;
    fn from_hp(x: &Hp) -> Self;
    /// `e^{2πiq}`.
    fn cis_turns(q: &BigRational) -> Complex<Self>;
}

impl Real for BigRational {
    const EXACT: bool = true;

    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn to_hp(&self) -> Hp {
        Hp::from_rational(self)
    }
}

impl Real for Hp {
    const EXACT: bool = false;

    fn from_rational(q: &BigRational) -> Self {
        Hp::from_rational(q)
    }
    fn to_f64(&self) -> f64 {
        Hp::to_f64(self)
    }
    fn to_hp(&self) -> Hp {
        self.clone()
    }
}

impl RealFloat for Hp {
    fn sqrt(&self) -> Self {
        Hp::sqrt(self)
    }
    fn epsilon() -> Self {
        Hp::epsilon()
    }
    fn from_f64(x: f64) -> Self {
        Hp::from_f64(x)
    }
    fn from_hp(x: &Hp) -> Self {
        x.clone()
    }
    fn cis_turns(q: &BigRational) -> Complex<Self> {
        let (c, s) = Hp::cos_sin_turns(q);
        Complex::new(c, s)
    }
}

macro_rules! prim_float {
    ($t:ty) => {
        impl Real for $t {
            const EXACT: bool = false;

            fn from_rational(q: &BigRational) -> Self {
                Hp::from_rational(q).to_f64() as $t
            }
            fn to_f64(&self) -> f64 {
                *self as f64
            }
            fn to_hp(&self) -> Hp {
                Hp::from_f64(*self as f64)
            }
        }

        impl RealFloat for $t {
            fn sqrt(&self) -> Self {
                <$t>::sqrt(*self)
            }
            fn epsilon() -> Self {
                <$t>::EPSILON
            }
            fn from_f64(x: f64) -> Self {
                x as $t
            }
            fn from_hp(x: &Hp) -> Self {
                x.to_f64() as $t
            }
            fn cis_turns(q: &BigRational) -> Complex<Self> {
                let (c, s) = Hp::cos_sin_turns(q);
                Complex::new(c.to_f64() as $t, s.to_f64() as $t)
            }
        }
    };
}

prim_float!(f32);
prim_float!(f64);

/// Lifts a complex number into 128-bit precision.
pub fn complex_to_hp<T: Real>(z: &Complex<T>) -> Complex<Hp> {
    Complex::new(z.re.to_hp(), z.im.to_hp())
}

/// Rounds a 128-bit complex number into `T`.
pub fn complex_hp_to<T: RealFloat>(z: &Complex<Hp>) -> Complex<T> {
    Complex::new(T::from_hp(&z.re), T::from_hp(&z.im))
}

/// Modulus of a complex number in a rounded field.
pub fn cabs<T: RealFloat>(z: &Complex<T>) -> T {
    z.norm_sqr().sqrt()
}
