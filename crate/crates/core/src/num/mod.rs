//! Number types: exact rationals and radicals, 128-bit floats, and the
//! scalar traits the linear-algebra layer is generic over.

pub mod amplitude;
pub mod hp;
pub mod rat;
pub mod real;
pub mod scalar;

pub use amplitude::{Amplitude, Integral};
pub use hp::{Hp, HP_PRECISION};
pub use rat::{format_rational, int, parse_rational, rat};
pub use real::{Real, RealFloat};
pub use scalar::Scalar;
