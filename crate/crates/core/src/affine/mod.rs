//! Affine systems `{D_a^j T_{bk} ψ}` with a band-limited generator.
//!
//! `D_a f(x) = a^{1/2} f(ax)` and `T_t f(x) = f(x - t)`, so the element
//! `(j, k)` has Fourier transform `a^{-j/2} e^{-2πi·bk·a^{-j}ξ} ψ̂(a^{-j}ξ)`.

mod dilates;
mod examples;
mod parseval;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::fiber::Lattice;
use crate::num::rat::pow;
use crate::num::{format_rational, Amplitude, Scalar};
use crate::step::ModStepFn;

pub use dilates::{
    negative_dilates_generators, negative_dilates_space, stabilization_check, vk_invariance_check,
    NegativeDilatesSpace, Stabilization, VkInvariance, MAX_GENERATORS,
};
pub use examples::{bownik_speegle_config, bownik_speegle_residuals, heil_config, split_tile_config};
pub use parseval::{
    calderon_sum, frame_sum, parseval_verify, shift_orthogonality, t_q, CalderonSum, FrameSum, JWindow, ParsevalReport,
    ProbeResult, ShiftOrthogonality,
};

/// Which part of the frequency line the system is meant to cover.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    /// Functions with Fourier support in `[0, ∞)`.
    #[serde(rename = "H2plus")]
    H2Plus,
    /// All of `L²(ℝ)`.
    #[default]
    #[serde(rename = "full")]
    Full,
}

/// Dilation `a`, translation step `b`, and the generator's transform `ψ̂`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AffineConfig {
    a: i64,
    #[serde(serialize_with = "crate::num::rat::serialize")]
    b: BigRational,
    psi_hat: ModStepFn,
    mode: Mode,
}

impl AffineConfig {
    pub fn new(a: i64, b: BigRational, psi_hat: ModStepFn, mode: Mode) -> Result<Self> {
        if a < 2 {
            return Err(Error::InvalidArgument(format!(
                "dilation must be an integer > 1, got {a}"
            )));
        }
        if !b.is_positive() {
            return Err(Error::NonpositiveScale(format_rational(&b)));
        }
        if mode == Mode::H2Plus {
            if let Some((lo, _)) = psi_hat.support_hull() {
                if lo.is_negative() {
                    return Err(Error::UnsupportedSupport(format!(
                        "generator reaches negative frequency {} in H2plus mode",
                        format_rational(&lo)
                    )));
                }
            }
        }
        Ok(AffineConfig { a, b, psi_hat, mode })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn a_rational(&self) -> BigRational {
        BigRational::from_integer(self.a.into())
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn psi_hat(&self) -> &ModStepFn {
        &self.psi_hat
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn lattice(&self) -> Lattice {
        Lattice::new(self.b.clone()).expect("validated")
    }

    /// `a^j` as a rational.
    pub fn a_pow(&self, j: i32) -> BigRational {
        pow(&self.a_rational(), j)
    }

    /// Same configuration with a different generator.
    pub fn with_psi_hat(&self, psi_hat: ModStepFn) -> Result<Self> {
        AffineConfig::new(self.a, self.b.clone(), psi_hat, self.mode)
    }
}

impl<'de> Deserialize<'de> for AffineConfig {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Wire {
            a: i64,
            #[serde(with = "crate::num::rat")]
            b: BigRational,
            psi_hat: ModStepFn,
            #[serde(default)]
            mode: Mode,
        }
        let w = Wire::deserialize(d)?;
        AffineConfig::new(w.a, w.b, w.psi_hat, w.mode).map_err(D::Error::custom)
    }
}

/// Index `(j, k)` of the element `D_a^j T_{bk} ψ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Element {
    pub j: i32,
    pub k: i64,
}

impl Element {
    pub fn new(j: i32, k: i64) -> Self {
        Element { j, k }
    }
}

/// `a^{-j/2}` as an exact scalar.
pub(crate) fn dilation_normalizer(cfg: &AffineConfig, j: i32) -> Scalar {
    Scalar::sqrt_rational(&cfg.a_pow(-j))
}

/// Fourier transform of `D_a^j T_{bk} ψ`.
pub fn element_ft(cfg: &AffineConfig, e: Element) -> ModStepFn {
    let dilated = cfg
        .psi_hat
        .affine_reparam(&cfg.a_pow(e.j), &BigRational::zero())
        .expect("a^j is positive");
    let freq = &cfg.b * BigRational::from_integer(e.k.into()) * cfg.a_pow(-e.j);
    dilated
        .modulate(&freq)
        .scale(&Amplitude::Exact(dilation_normalizer(cfg, e.j)))
}
