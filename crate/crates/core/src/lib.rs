//! Exact computations with shift-invariant and affine systems on the real
//! line, carried out on the Fourier side.
//!
//! Fourier transforms are finitely-piecewise functions with rational
//! breakpoints ([`ModStepFn`]). Shift-invariant spaces are described by
//! their range function over a lattice `bℤ` ([`SiSpace`]), affine systems
//! by a dilation `a`, a translation step `b`, and the transform of the
//! generator ([`AffineConfig`]).

pub mod affine;
pub mod error;
pub mod fiber;
pub mod indep;
pub mod linalg;
pub mod num;
pub mod step;

pub use affine::{element_ft, AffineConfig, Element, Mode as AffineMode};
pub use error::{Error, Result};
pub use fiber::{DimensionFunction, FiberMap, Lattice, SiSpace};
pub use indep::{GramMatrix, IndependenceVerdict};

pub use num::{format_rational, int, parse_rational, rat, Amplitude, Hp, Integral, Real, RealFloat, Scalar};
pub use step::{linear_combine, ModStepFn, Mode, Piece};

/// Exact rational numbers.
pub type Rational = num_rational::BigRational;
/// Gaussian rationals.
pub type ExactComplex = num_complex::Complex<Rational>;
/// 128-bit complex floats.
pub type HpComplex = num_complex::Complex<Hp>;
pub type Complex64 = num_complex::Complex<f64>;
pub type Complex32 = num_complex::Complex<f32>;
