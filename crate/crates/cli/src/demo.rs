use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use siframes_core::affine::{
    bownik_speegle_config, bownik_speegle_residuals, heil_config, negative_dilates_space, AffineConfig,
};
use siframes_core::indep::{SweepOptions, SweepWindow};
use siframes_core::{format_rational, int, rat, ModStepFn, Piece, Rational, Scalar};

use crate::commands::{independence_block, invariance_block, parseval_block, BlockOutcome, DEFAULT_MAX_SIZE};
use crate::error::Result;

/// Depth of the truncated space of negative dilates used by the
/// two-sided demo; deeper truncations only add cells near 0.
pub const BOWNIK_SPEEGLE_DEPTH: u32 = 2;
/// Seed of the probe functions in the one-sided demo.
pub const PROBE_SEED: u64 = 0x5eed_0001;
pub const PROBE_COUNT: usize = 10;

/// Random step functions with breakpoints on `(1/16)ℤ` inside `(0, hi)`
/// and small Gaussian-rational amplitudes.
pub fn random_probes(seed: u64, count: usize, hi: &Rational) -> Vec<ModStepFn> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let slots = (hi * int(16)).floor().to_integer();
    let slots: i64 = slots.try_into().unwrap_or(i64::MAX).max(2);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=4);
            let pieces = (0..n)
                .map(|_| {
                    let lo = rng.gen_range(1..slots);
                    let len = rng.gen_range(1..=(slots - lo).min(24));
                    let re = rng.gen_range(-4i64..=4);
                    let im = rng.gen_range(-4i64..=4);
                    let amp = if re == 0 && im == 0 {
                        Scalar::one()
                    } else {
                        Scalar::gaussian(rat(re, 2), rat(im, 2))
                    };
                    Piece::new(rat(lo, 16), rat(lo + len, 16), amp, int(0))
                })
                .collect();
            ModStepFn::superpose(pieces)
        })
        .collect()
}

/// Projection residuals of `ψ` and `T₁ψ`, and the two invariance verdicts,
/// for the two-sided example with parameter `ε`.
pub fn bownik_speegle(epsilon: &Rational) -> Result<Vec<BlockOutcome>> {
    let cfg = bownik_speegle_config(epsilon)?;
    let depth = BOWNIK_SPEEGLE_DEPTH;
    let v0 = negative_dilates_space(&cfg, depth)?.space;
    let psi = cfg.psi_hat().clone();
    let shifted = psi.modulate(&int(1));
    let r0 = &psi - &v0.project(&psi)?;
    let r1 = &shifted - &v0.project(&shifted)?;
    let (e0, e1) = bownik_speegle_residuals(epsilon);
    let exact = r0.is_exact() && r1.is_exact();
    let residuals = BlockOutcome::new(
        "residuals",
        r0 == e0 && r1 == e1,
        exact,
        json!({
            "epsilon": format_rational(epsilon),
            "depth": depth,
            "psi": { "computed": r0, "expected": e0, "match": r0 == e0 },
            "shifted_psi": { "computed": r1, "expected": e1, "match": r1 == e1 },
        }),
    );
    let by_two = invariance_block(&cfg, depth, &int(2), Some(true))?;
    let by_one = invariance_block(&cfg, depth, &int(1), Some(false))?;
    let psi_in = v0.membership_auto(&psi)?.member;
    let shifted_in = v0.membership_auto(&shifted)?.member;
    let membership = BlockOutcome::new(
        "membership",
        !psi_in && !shifted_in,
        true,
        json!({ "psi_in_v0": psi_in, "shifted_psi_in_v0": shifted_in }),
    );
    Ok(vec![residuals, by_two, by_one, membership])
}

/// Calderón sum, shift orthogonality, random probe sums, an independence
/// sweep and the invariance of the negative dilates for the one-sided
/// single-tile generator.
pub fn heil(a: i64, b: &Rational, c: &Rational) -> Result<Vec<BlockOutcome>> {
    let cfg: AffineConfig = heil_config(a, b.clone(), c.clone())?;
    let probes = random_probes(PROBE_SEED, PROBE_COUNT, &int(8));
    let parseval = parseval_block(&cfg, &probes)?;
    let opts = SweepOptions {
        max_size: DEFAULT_MAX_SIZE,
        ..SweepOptions::default()
    };
    let sweep = independence_block(&cfg, SweepWindow::new(-2, 2, 0, 3)?, &opts)?;
    let invariance = invariance_block(&cfg, 2, b, Some(true))?;
    Ok(vec![parseval, sweep, invariance])
}
