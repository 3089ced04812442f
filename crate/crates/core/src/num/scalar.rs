//! Exact amplitudes of the form `(re + i·im)·√root·e^{2πi·phase}`.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::hp::Hp;
use super::rat::{format_rational, parse_rational};
use super::real::RealFloat;
use crate::error::Error;

/// An exact complex scalar `(re + i·im)·√root·e^{2πi·phase}`.
///
/// The representation is canonical, so structural equality is value
/// equality:
/// * `root` is a square-free positive integer,
/// * `phase` lies in `[0, 1/8)` (quarter turns are folded into `re`/`im`,
///   an eighth turn into a factor `(1+i)/√2`),
/// * zero is stored as `0·√1·e^0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    re: BigRational,
    im: BigRational,
    root: BigInt,
    phase: BigRational,
}

/// `n = s²·k` with `k` square-free.
pub(crate) fn square_free_split(n: &BigInt) -> (BigInt, BigInt) {
    debug_assert!(n.is_positive());
    if let Some(mut m) = n.to_u64() {
        let mut s = 1u64;
        let mut k = 1u64;
        let mut d = 2u64;
        while d.saturating_mul(d) <= m {
            let mut e = 0;
            while m % d == 0 {
                m /= d;
                e += 1;
            }
            s *= d.pow(e / 2);
            if e % 2 == 1 {
                k *= d;
            }
            d += if d == 2 { 1 } else { 2 };
        }
        k *= m;
        return (BigInt::from(s), BigInt::from(k));
    }
    let mut m = n.clone();
    let mut s = BigInt::one();
    let mut k = BigInt::one();
    let mut d = BigInt::from(2);
    while &d * &d <= m {
        let mut e = 0u32;
        while m.is_multiple_of(&d) {
            m /= &d;
            e += 1;
        }
        s *= num_traits::pow(d.clone(), (e / 2) as usize);
        if e % 2 == 1 {
            k *= &d;
        }
        d += 1;
    }
    k *= m;
    (s, k)
}

impl Scalar {
    /// Builds and canonicalizes `(re + i·im)·√root·e^{2πi·phase}`.
    pub fn new(re: BigRational, im: BigRational, root: BigRational, phase: BigRational) -> Result<Self, Error> {
        if !root.is_positive() {
            return Err(Error::Parse(format!(
                "root factor must be positive, got {}",
                format_rational(&root)
            )));
        }
        Ok(Self::canonical(re, im, root, phase))
    }

    fn canonical(mut re: BigRational, mut im: BigRational, root: BigRational, phase: BigRational) -> Self {
        if re.is_zero() && im.is_zero() {
            return Scalar::zero();
        }
        // √(p/q) = √(pq)/q
        let q = BigRational::from_integer(root.denom().clone());
        re /= &q;
        im /= &q;
        let (s, mut k) = square_free_split(&(root.numer() * root.denom()));
        let s = BigRational::from_integer(s);
        re *= &s;
        im *= &s;

        let mut f = &phase - phase.floor();
        let quarter = BigRational::new(1.into(), 4.into());
        let eighth = BigRational::new(1.into(), 8.into());
        let turns = (&f / &quarter).floor();
        for _ in 0..turns.to_integer().to_u8().unwrap_or(0) {
            // multiply by i
            let nre = -im.clone();
            im = re;
            re = nre;
        }
        f -= turns * &quarter;
        if f >= eighth {
            // (x+iy)(1+i)/√2 = ((x-y)/2 + i(x+y)/2)·√2
            let two = BigRational::from_integer(2.into());
            let nre = (&re - &im) / &two;
            let nim = (&re + &im) / &two;
            re = nre;
            im = nim;
            if k.is_even() {
                k /= 2;
                re *= &two;
                im *= &two;
            } else {
                k *= 2;
            }
            f -= eighth;
        }
        Scalar {
            re,
            im,
            root: k,
            phase: f,
        }
    }

    pub fn zero() -> Self {
        Scalar {
            re: BigRational::zero(),
            im: BigRational::zero(),
            root: BigInt::one(),
            phase: BigRational::zero(),
        }
    }

    pub fn one() -> Self {
        Scalar::from_rational(BigRational::one())
    }

    pub fn from_rational(q: BigRational) -> Self {
        Scalar::gaussian(q, BigRational::zero())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn gaussian(re: BigRational, im: BigRational) -> Self {
        Self::canonical(re, im, BigRational::one(), BigRational::zero())
    }

    /// `√q` for `q ≥ 0`.
    pub fn sqrt_rational(q: &BigRational) -> Self {
        assert!(!q.is_negative(), "square root of a negative rational");
        if q.is_zero() {
            return Scalar::zero();
        }
        Self::canonical(BigRational::one(), BigRational::zero(), q.clone(), BigRational::zero())
    }

    /// `e^{2πiq}`.
    pub fn cis_turns(q: &BigRational) -> Self {
        Self::canonical(BigRational::one(), BigRational::zero(), BigRational::one(), q.clone())
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }
    pub fn im(&self) -> &BigRational {
        &self.im
    }
    pub fn root(&self) -> &BigInt {
        &self.root
    }
    pub fn phase(&self) -> &BigRational {
        &self.phase
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// True when the value lies in `ℚ(i)`.
    pub fn is_gaussian(&self) -> bool {
        self.root.is_one() && self.phase.is_zero()
    }

    /// The value as a Gaussian rational, if it is one.
    pub fn as_gaussian(&self) -> Option<Complex<BigRational>> {
        self.is_gaussian()
            .then(|| Complex::new(self.re.clone(), self.im.clone()))
    }

    /// The value as a rational, if it is one.
    pub fn as_rational(&self) -> Option<BigRational> {
        (self.is_gaussian() && self.im.is_zero()).then(|| self.re.clone())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        if self.is_zero() || other.is_zero() {
            return Scalar::zero();
        }
        let re = &self.re * &other.re - &self.im * &other.im;
        let im = &self.re * &other.im + &self.im * &other.re;
        Self::canonical(
            re,
            im,
            BigRational::from_integer(&self.root * &other.root),
            &self.phase + &other.phase,
        )
    }

    pub fn conj(&self) -> Scalar {
        Self::canonical(
            self.re.clone(),
            -self.im.clone(),
            BigRational::from_integer(self.root.clone()),
            -self.phase.clone(),
        )
    }

    pub fn neg(&self) -> Scalar {
        Scalar {
            re: -self.re.clone(),
            im: -self.im.clone(),
            root: self.root.clone(),
            phase: self.phase.clone(),
        }
    }

    /// `|z|²`, always rational.
    pub fn norm_sqr(&self) -> BigRational {
        (&self.re * &self.re + &self.im * &self.im) * BigRational::from_integer(self.root.clone())
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(self.conj().mul(&Scalar::from_rational(n.recip())))
    }

    /// Exact sum when both terms share root and phase (or one is zero).
    pub fn try_add(&self, other: &Scalar) -> Option<Scalar> {
        if self.is_zero() {
            return Some(other.clone());
        }
        if other.is_zero() {
            return Some(self.clone());
        }
        if self.root != other.root || self.phase != other.phase {
            return None;
        }
        Some(Self::canonical(
            &self.re + &other.re,
            &self.im + &other.im,
            BigRational::from_integer(self.root.clone()),
            self.phase.clone(),
        ))
    }

    /// Rounded value in any floating scalar type.
    pub fn to_complex<T: RealFloat>(&self) -> Complex<T> {
        let base = Complex::new(T::from_rational(&self.re), T::from_rational(&self.im));
        let r = T::from_rational(&BigRational::from_integer(self.root.clone())).sqrt();
        let mut z = Complex::new(base.re * r.clone(), base.im * r);
        if !self.phase.is_zero() {
            z = z * T::cis_turns(&self.phase);
        }
        z
    }

    pub fn to_hp(&self) -> Complex<Hp> {
        self.to_complex::<Hp>()
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<BigRational> for Scalar {
    fn from(q: BigRational) -> Self {
        Scalar::from_rational(q)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "({})", format_rational(&self.re))?;
        } else {
            write!(f, "({} + {}i)", format_rational(&self.re), format_rational(&self.im))?;
        }
        if !self.root.is_one() {
            write!(f, "·√{}", self.root)?;
        }
        if !self.phase.is_zero() {
            write!(f, "·e^(2πi·{})", format_rational(&self.phase))?;
        }
        Ok(())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct ScalarWire {
    re: String,
    im: String,
    root: String,
    phase: String,
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ScalarWire {
            re: format_rational(&self.re),
            im: format_rational(&self.im),
            root: self.root.to_string(),
            phase: format_rational(&self.phase),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = ScalarWire::deserialize(d)?;
        let p = |s: &str| parse_rational(s).map_err(D::Error::custom);
        Scalar::new(p(&w.re)?, p(&w.im)?, p(&w.root)?, p(&w.phase)?).map_err(D::Error::custom)
    }
}
