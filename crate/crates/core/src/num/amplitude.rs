use std::fmt;

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::hp::Hp;
use super::scalar::Scalar;

/// A piece amplitude: exact when possible, otherwise a 128-bit complex.
#[derive(Clone, PartialEq)]
pub enum Amplitude {
    Exact(Scalar),
    Approx(Complex<Hp>),
}

impl Amplitude {
    pub fn zero() -> Self {
        Amplitude::Exact(Scalar::zero())
    }

    pub fn one() -> Self {
        Amplitude::Exact(Scalar::one())
    }

    pub fn rational(q: BigRational) -> Self {
        Amplitude::Exact(Scalar::from_rational(q))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Amplitude::Exact(s) => s.is_zero(),
            Amplitude::Approx(z) => z.re.is_zero() && z.im.is_zero(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Amplitude::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&Scalar> {
        match self {
            Amplitude::Exact(s) => Some(s),
            Amplitude::Approx(_) => None,
        }
    }

    pub fn to_hp(&self) -> Complex<Hp> {
        match self {
            Amplitude::Exact(s) => s.to_hp(),
            Amplitude::Approx(z) => z.clone(),
        }
    }

    pub fn add(&self, other: &Amplitude) -> Amplitude {
        if let (Amplitude::Exact(a), Amplitude::Exact(b)) = (self, other) {
            if let Some(s) = a.try_add(b) {
                return Amplitude::Exact(s);
            }
        }
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        Amplitude::Approx(self.to_hp() + other.to_hp())
    }

    pub fn mul(&self, other: &Amplitude) -> Amplitude {
        match (self, other) {
            (Amplitude::Exact(a), Amplitude::Exact(b)) => Amplitude::Exact(a.mul(b)),
            _ if self.is_zero() || other.is_zero() => Amplitude::zero(),
            _ => Amplitude::Approx(self.to_hp() * other.to_hp()),
        }
    }

    pub fn mul_scalar(&self, s: &Scalar) -> Amplitude {
        self.mul(&Amplitude::Exact(s.clone()))
    }

    pub fn conj(&self) -> Amplitude {
        match self {
            Amplitude::Exact(s) => Amplitude::Exact(s.conj()),
            Amplitude::Approx(z) => Amplitude::Approx(z.conj()),
        }
    }

    pub fn neg(&self) -> Amplitude {
        match self {
            Amplitude::Exact(s) => Amplitude::Exact(s.neg()),
            Amplitude::Approx(z) => Amplitude::Approx(-z.clone()),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Amplitude> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Amplitude::Exact(s) => Amplitude::Exact(s.inv()?),
            Amplitude::Approx(z) => {
                let n = z.norm_sqr();
                Amplitude::Approx(Complex::new(z.re.clone() / n.clone(), -z.im.clone() / n))
            }
        })
    }

    pub fn norm_sqr_hp(&self) -> Hp {
        match self {
            Amplitude::Exact(s) => Hp::from_rational(&s.norm_sqr()),
            Amplitude::Approx(z) => z.norm_sqr(),
        }
    }

    pub fn abs_hp(&self) -> Hp {
        self.norm_sqr_hp().sqrt()
    }
}

impl From<Scalar> for Amplitude {
    fn from(s: Scalar) -> Self {
        Amplitude::Exact(s)
    }
}

impl From<Complex<Hp>> for Amplitude {
    fn from(z: Complex<Hp>) -> Self {
        Amplitude::Approx(z)
    }
}

impl fmt::Debug for Amplitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Amplitude::Exact(s) => write!(f, "{s:?}"),
            Amplitude::Approx(z) => write!(f, "≈({} + {}i)", z.re.to_f64(), z.im.to_f64()),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ApproxWire {
    re: String,
    im: String,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum AmplitudeWire {
    Approx { approx: ApproxWire },
    Exact(Scalar),
}

impl Serialize for Amplitude {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Amplitude::Exact(x) => x.serialize(s),
            Amplitude::Approx(z) => AmplitudeWire::Approx {
                approx: ApproxWire {
                    re: z.re.to_decimal(),
                    im: z.im.to_decimal(),
                },
            }
            .serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Amplitude {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        match AmplitudeWire::deserialize(d)? {
            AmplitudeWire::Exact(s) => Ok(Amplitude::Exact(s)),
            AmplitudeWire::Approx { approx } => {
                let re = Hp::parse_decimal(&approx.re).ok_or_else(|| D::Error::custom("bad decimal"))?;
                let im = Hp::parse_decimal(&approx.im).ok_or_else(|| D::Error::custom("bad decimal"))?;
                Ok(Amplitude::Approx(Complex::new(re, im)))
            }
        }
    }
}

/// Value of an integral together with an a-priori bound on its rounding
/// error (zero for exact results).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Integral {
    pub value: Amplitude,
    pub error_bound: f64,
}

impl Integral {
    pub fn exact(s: Scalar) -> Self {
        Integral {
            value: Amplitude::Exact(s),
            error_bound: 0.0,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.value.is_exact()
    }

    /// The value as an exact rational, if it is one.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.value.as_exact().and_then(|s| s.as_rational())
    }

    pub fn to_hp(&self) -> Complex<Hp> {
        self.value.to_hp()
    }

    /// Real part rounded to `f64`.
    pub fn re_f64(&self) -> f64 {
        self.to_hp().re.to_f64()
    }

    /// Sum of two integrals; error bounds add, plus one rounding of the sum
    /// when it cannot be formed exactly.
    pub fn add(&self, other: &Integral) -> Integral {
        let value = self.value.add(&other.value);
        let mut error_bound = self.error_bound + other.error_bound;
        if !value.is_exact() && !self.value.is_zero() && !other.value.is_zero() {
            error_bound += 2.0 * Hp::epsilon().to_f64() * value.abs_hp().to_f64();
        }
        Integral { value, error_bound }
    }

    /// Multiplication by an exact scalar.
    pub fn scale(&self, s: &Scalar) -> Integral {
        let factor = Hp::from_rational(&s.norm_sqr()).sqrt().to_f64();
        Integral {
            value: self.value.mul_scalar(s),
            error_bound: self.error_bound * factor,
        }
    }

    /// Human-readable value: `p/q` when rational, otherwise a decimal.
    pub fn display(&self) -> String {
        match self.as_rational() {
            Some(q) => super::rat::format_rational(&q),
            None => {
                let z = self.to_hp();
                if z.im.to_f64() == 0.0 {
                    format!("{:e}", z.re.to_f64())
                } else {
                    format!("{:e}{:+e}i", z.re.to_f64(), z.im.to_f64())
                }
            }
        }
    }

    /// Sum of a sequence of integrals, in order.
    pub fn sum<'a>(items: impl IntoIterator<Item = &'a Integral>) -> Integral {
        items
            .into_iter()
            .fold(Integral::exact(Scalar::zero()), |acc, x| acc.add(x))
    }
}
