use std::fmt::Write as _;

use itertools::Itertools;
use num_complex::Complex;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::{independence_test, GramMatrix, IndependenceVerdict, Status, DEFAULT_INDEPENDENCE_TOL};
use crate::affine::{parseval_verify, vk_invariance_check, AffineConfig, Element};
use crate::error::{Error, Result};
use crate::linalg::hermitian_eigen;

/// Largest subset size a sweep accepts.
pub const MAX_SUBSET_SIZE: usize = 8;
/// Default cap on the number of subsets.
pub const DEFAULT_MAX_SUBSETS: u128 = 1_000_000;
/// Subsets whose `f64` eigenvalue ratio clears the tolerance by this factor
/// skip the high-precision test.
const SCREEN_MARGIN: f64 = 1e3;
const CHUNK: usize = 1 << 16;

fn ser_u128<S: Serializer>(x: &u128, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// Elements `(j, k)` with `jmin ≤ j ≤ jmax` and `kmin ≤ k ≤ kmax`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SweepWindow {
    pub jmin: i32,
    pub jmax: i32,
    pub kmin: i64,
    pub kmax: i64,
}

impl SweepWindow {
    pub fn new(jmin: i32, jmax: i32, kmin: i64, kmax: i64) -> Result<Self> {
        if jmin > jmax || kmin > kmax {
            return Err(Error::InvalidArgument(format!(
                "empty window {jmin}:{jmax},{kmin}:{kmax}"
            )));
        }
        Ok(SweepWindow { jmin, jmax, kmin, kmax })
    }

    /// Elements ordered by `j`, then `k`.
    pub fn elements(&self) -> Vec<Element> {
        (self.jmin..=self.jmax)
            .flat_map(|j| (self.kmin..=self.kmax).map(move |k| Element::new(j, k)))
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct SweepOptions {
    pub max_size: usize,
    pub tol: f64,
    pub max_subsets: u128,
    /// Keep the smallest singular value of every subset (for CSV output).
    pub record_subsets: bool,
    /// Truncation depth for the invariance check of the negative dilates;
    /// `None` skips it.
    pub v0_depth: Option<u32>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            max_size: 4,
            tol: DEFAULT_INDEPENDENCE_TOL,
            max_subsets: DEFAULT_MAX_SUBSETS,
            record_subsets: false,
            v0_depth: Some(2),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Histogram {
    pub independent: u64,
    pub dependent: u64,
    pub inconclusive: u64,
}

impl Histogram {
    fn record(&mut self, s: Status) {
        match s {
            Status::Independent => self.independent += 1,
            Status::Dependent => self.dependent += 1,
            Status::Inconclusive => self.inconclusive += 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FailingSubset {
    /// Position in the enumeration order (sizes ascending, then
    /// lexicographic).
    pub index: u64,
    pub elements: Vec<Element>,
    pub verdict: IndependenceVerdict,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubsetRecord {
    pub elements: Vec<Element>,
    pub min_singular_value: f64,
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub window: SweepWindow,
    pub max_size: usize,
    pub tolerance: f64,
    pub element_count: usize,
    #[serde(serialize_with = "ser_u128")]
    pub subset_count: u128,
    /// Subsets examined before stopping (all of them unless one failed).
    pub evaluated: u64,
    pub histogram: Histogram,
    /// Subsets that needed the high-precision test.
    pub high_precision_checks: u64,
    pub min_singular_value: f64,
    pub max_entry_error_bound: f64,
    /// Calderón and shift-orthogonality conditions both hold.
    pub parseval_verified: bool,
    pub v0_depth: Option<u32>,
    /// Invariance of the truncated negative dilates under translation by `b`.
    pub v0_invariant: Option<bool>,
    pub first_failure: Option<FailingSubset>,
    pub pass: bool,
    #[serde(skip)]
    pub subsets: Vec<SubsetRecord>,
}

impl SweepReport {
    /// One line per recorded subset: `index,elements,min_singular_value,status`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,elements,min_singular_value,status\n");
        for (i, r) in self.subsets.iter().enumerate() {
            let els = r.elements.iter().map(|e| format!("{}:{}", e.j, e.k)).join(" ");
            let status = serde_json::to_value(r.status).expect("plain enum");
            let _ = writeln!(
                out,
                "{i},{els},{:e},{}",
                r.min_singular_value,
                status.as_str().unwrap_or("")
            );
        }
        out
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Number of nonempty subsets of at most `max_size` out of `n`.
pub fn subset_count(n: usize, max_size: usize) -> u128 {
    (1..=max_size.min(n))
        .map(|s| binomial(n as u128, s as u128))
        .fold(0u128, u128::saturating_add)
}

struct Outcome {
    sv: f64,
    verdict: Option<IndependenceVerdict>,
    status: Status,
    high_precision: bool,
}

fn evaluate(g: &GramMatrix, g64: &[Vec<Complex<f64>>], idx: &[usize], tol: f64) -> Result<Outcome> {
    let sub: Vec<Vec<Complex<f64>>> = idx.iter().map(|&p| idx.iter().map(|&q| g64[p][q]).collect()).collect();
    let eig = hermitian_eigen(&sub);
    let lmax = *eig.values.last().expect("nonempty subset");
    if lmax > 0.0 {
        let ratio = eig.values[0].max(0.0) / lmax;
        if ratio > tol * SCREEN_MARGIN {
            return Ok(Outcome {
                sv: ratio.sqrt(),
                verdict: None,
                status: Status::Independent,
                high_precision: false,
            });
        }
    }
    let v = independence_test(&g.submatrix(idx), tol)?;
    Ok(Outcome {
        sv: v.min_singular_value,
        status: v.status,
        verdict: Some(v),
        high_precision: true,
    })
}

/// Tests every subset of the window's elements up to `max_size` for linear
/// independence, stopping at the first subset (in enumeration order) that
/// is not certified independent.
pub fn independence_sweep(cfg: &AffineConfig, window: SweepWindow, opts: &SweepOptions) -> Result<SweepReport> {
    if opts.max_size == 0 || opts.max_size > MAX_SUBSET_SIZE {
        return Err(Error::InvalidArgument(format!(
            "subset size must lie in 1..={MAX_SUBSET_SIZE}, got {}",
            opts.max_size
        )));
    }
    if opts.tol.is_nan() || opts.tol <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {}",
            opts.tol
        )));
    }
    let elements = window.elements();
    let n = elements.len();
    let count = subset_count(n, opts.max_size);
    if count > opts.max_subsets {
        return Err(Error::WindowTooLarge {
            count,
            limit: opts.max_subsets,
        });
    }
    let g = GramMatrix::affine(cfg, &elements)?;
    let g64 = g.to_f64();

    let mut histogram = Histogram::default();
    let mut evaluated = 0u64;
    let mut high_precision_checks = 0u64;
    let mut min_sv = f64::INFINITY;
    let mut first_failure = None;
    let mut subsets = Vec::new();
    let mut all = (1..=opts.max_size.min(n)).flat_map(|s| (0..n).combinations(s));
    'outer: loop {
        let chunk: Vec<Vec<usize>> = all.by_ref().take(CHUNK).collect();
        if chunk.is_empty() {
            break;
        }
        let outcomes: Vec<Outcome> = chunk
            .par_iter()
            .map(|idx| evaluate(&g, &g64, idx, opts.tol))
            .collect::<Result<_>>()?;
        for (idx, o) in chunk.iter().zip(outcomes) {
            let index = evaluated;
            evaluated += 1;
            histogram.record(o.status);
            high_precision_checks += u64::from(o.high_precision);
            min_sv = min_sv.min(o.sv);
            let els: Vec<Element> = idx.iter().map(|&i| elements[i]).collect();
            if opts.record_subsets {
                subsets.push(SubsetRecord {
                    elements: els.clone(),
                    min_singular_value: o.sv,
                    status: o.status,
                });
            }
            if o.status != Status::Independent {
                first_failure = Some(FailingSubset {
                    index,
                    elements: els,
                    verdict: o.verdict.expect("failures come from the full test"),
                });
                break 'outer;
            }
        }
    }

    let parseval_verified = parseval_verify(cfg, &[]).map(|r| r.pass).unwrap_or(false);
    let v0_invariant = opts
        .v0_depth
        .and_then(|d| vk_invariance_check(cfg, d, cfg.b()).ok().map(|r| r.invariant));
    Ok(SweepReport {
        window,
        max_size: opts.max_size,
        tolerance: opts.tol,
        element_count: n,
        subset_count: count,
        evaluated,
        histogram,
        high_precision_checks,
        min_singular_value: if min_sv.is_finite() { min_sv } else { 1.0 },
        max_entry_error_bound: g.max_error_bound(),
        parseval_verified,
        v0_depth: opts.v0_depth,
        v0_invariant,
        pass: first_failure.is_none(),
        first_failure,
        subsets,
    })
}
