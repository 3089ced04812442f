//! Linear independence of finite families: Gram matrices of affine
//! elements, the translate criterion, and exhaustive subset sweeps.

mod gram;
mod sweep;
mod verdict;

pub use gram::GramMatrix;
pub use sweep::{
    independence_sweep, subset_count, FailingSubset, Histogram, SubsetRecord, SweepOptions, SweepReport, SweepWindow,
    DEFAULT_MAX_SUBSETS, MAX_SUBSET_SIZE,
};
pub use verdict::{
    independence_test, translates_criterion, IndependenceVerdict, Status, TranslatesVerdict, Witness,
    DEFAULT_INDEPENDENCE_TOL,
};

use crate::affine::{AffineConfig, Element};
use crate::error::Result;

/// Gram matrix of the affine elements `elements`.
pub fn gram(cfg: &AffineConfig, elements: &[Element]) -> Result<GramMatrix> {
    GramMatrix::affine(cfg, elements)
}
