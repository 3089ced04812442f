use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use siframes_core::affine::{
    negative_dilates_space, parseval_verify, stabilization_check, vk_invariance_check, AffineConfig,
};
use siframes_core::fiber::dilate_space;
use siframes_core::fiber::dilation_dim_check;
use siframes_core::indep::{independence_sweep, SweepOptions, SweepWindow, DEFAULT_MAX_SUBSETS};
use siframes_core::{format_rational, parse_rational, ModStepFn, SiSpace};

use crate::error::{CliError, Result};
use crate::spec::SpecFile;

/// Truncation depth for the space of negative dilates when none is given.
pub const DEFAULT_DEPTH: u32 = 2;
pub const DEFAULT_WINDOW: &str = "-2:2,0:3";
pub const DEFAULT_MAX_SIZE: usize = 4;

/// One analysis step of a spec file.
#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Block {
    DimensionFunction {
        depth: Option<u32>,
    },
    Project {
        depth: Option<u32>,
    },
    ParsevalCheck {},
    Independence {
        window: Option<String>,
        max_size: Option<usize>,
        tol: Option<String>,
        max_subsets: Option<u64>,
    },
    DilationCheck {
        depth: Option<u32>,
    },
    Invariance {
        depth: Option<u32>,
        shift: Option<String>,
        expect: Option<bool>,
    },
    Stabilization {
        max_depth: Option<u32>,
    },
}

/// Parameters given on the command line; they take precedence over the
/// values in a block.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub tol: Option<f64>,
    pub window: Option<SweepWindow>,
    pub max_size: Option<usize>,
    pub max_subsets: Option<u128>,
    pub depth: Option<u32>,
    pub csv: bool,
    pub timings: bool,
}

/// Result of one block.
#[derive(Clone, Debug, Serialize)]
pub struct BlockOutcome {
    pub command: String,
    pub pass: bool,
    pub exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
    pub result: Value,
    #[serde(skip)]
    pub csv: Option<String>,
}

impl BlockOutcome {
    pub(crate) fn new(command: &str, pass: bool, exact: bool, result: Value) -> Self {
        BlockOutcome {
            command: command.to_string(),
            pass,
            exact,
            elapsed_ms: None,
            result,
            csv: None,
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report values serialize")
}

/// `"JMIN:JMAX,KMIN:KMAX"`.
pub fn parse_window(s: &str) -> Result<SweepWindow> {
    let bad = || CliError::Usage(format!("invalid window `{s}` (expected JMIN:JMAX,KMIN:KMAX)"));
    let (j, k) = s.split_once(',').ok_or_else(bad)?;
    let (j0, j1) = j.split_once(':').ok_or_else(bad)?;
    let (k0, k1) = k.split_once(':').ok_or_else(bad)?;
    let p = |x: &str| x.trim().parse::<i64>().map_err(|_| bad());
    let (j0, j1) = (p(j0)?, p(j1)?);
    let to_i32 = |x: i64| i32::try_from(x).map_err(|_| bad());
    Ok(SweepWindow::new(to_i32(j0)?, to_i32(j1)?, p(k0)?, p(k1)?)?)
}

/// A positive tolerance given as a rational (`1/100000000`) or a decimal
/// (`1e-8`).
pub fn parse_tol(s: &str) -> Result<f64> {
    let v = match parse_rational(s) {
        Ok(q) => siframes_core::Real::to_f64(&q),
        Err(_) => s
            .trim()
            .parse::<f64>()
            .map_err(|_| CliError::Usage(format!("invalid tolerance `{s}`")))?,
    };
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Usage(format!("tolerance must be positive, got `{s}`")))
    }
}

struct Space {
    space: SiSpace,
    source: Value,
}

fn space_for(spec: &SpecFile, depth: u32) -> Result<Space> {
    match &spec.si {
        Some(si) => Ok(Space {
            space: SiSpace::generated(&si.lattice, si.generators.clone())?,
            source: json!({ "generators": si.generators.len(), "b": format_rational(si.lattice.step()) }),
        }),
        None => Ok(Space {
            space: negative_dilates_space(&spec.affine, depth)?.space,
            source: json!({ "negative_dilates_depth": depth }),
        }),
    }
}

fn dimension_block(spec: &SpecFile, depth: u32) -> Result<BlockOutcome> {
    let s = space_for(spec, depth)?;
    let d = s.space.dimension_function();
    let mut out = BlockOutcome::new(
        "dimension-function",
        true,
        s.space.is_exact(),
        json!({
            "space": s.source,
            "dimension": d,
            "max": d.max(),
            "integral": format_rational(&d.integral()),
        }),
    );
    out.csv = Some(d.to_csv());
    Ok(out)
}

fn project_block(spec: &SpecFile, depth: u32) -> Result<BlockOutcome> {
    let s = space_for(spec, depth)?;
    let mut exact = s.space.is_exact();
    let mut probes = Vec::new();
    for (index, f) in spec.probes.iter().enumerate() {
        let p = s.space.project(f)?;
        let residual = f - &p;
        let m = s.space.membership_auto(f)?;
        exact &= p.is_exact() && residual.is_exact();
        probes.push(json!({
            "index": index,
            "projection": p,
            "residual": residual,
            "residual_norm_sqr": m.residual_norm_sqr.display(),
            "member": m.member,
        }));
    }
    Ok(BlockOutcome::new(
        "project",
        true,
        exact,
        json!({ "space": s.source, "probes": probes }),
    ))
}

pub(crate) fn parseval_block(cfg: &AffineConfig, probes: &[ModStepFn]) -> Result<BlockOutcome> {
    let r = parseval_verify(cfg, probes)?;
    let exact = r.calderon.exact && r.shift_orthogonality.exact && r.probes.iter().all(|p| p.exact);
    Ok(BlockOutcome::new("parseval-check", r.pass, exact, to_value(&r)))
}

pub(crate) fn independence_block(cfg: &AffineConfig, window: SweepWindow, opts: &SweepOptions) -> Result<BlockOutcome> {
    let r = independence_sweep(cfg, window, opts)?;
    let mut out = BlockOutcome::new("independence", r.pass, false, to_value(&r));
    if opts.record_subsets {
        out.csv = Some(r.to_csv());
    }
    Ok(out)
}

fn dilation_block(spec: &SpecFile, depth: u32) -> Result<BlockOutcome> {
    let s = space_for(spec, depth)?;
    let a = spec.affine.a();
    let c = dilation_dim_check(&s.space, a)?;
    let dilated = dilate_space(&s.space, a)?;
    let difference = s.space.span_difference(&dilated)?;
    Ok(BlockOutcome::new(
        "dilation-check",
        c.equal,
        s.space.is_exact() && dilated.is_exact(),
        json!({
            "space": s.source,
            "a": a,
            "lhs": c.lhs,
            "rhs": c.rhs,
            "equal": c.equal,
            "dilation_fixed": difference.is_none(),
            "span_difference": difference,
        }),
    ))
}

pub(crate) fn invariance_block(
    cfg: &AffineConfig,
    depth: u32,
    shift: &siframes_core::Rational,
    expect: Option<bool>,
) -> Result<BlockOutcome> {
    let r = vk_invariance_check(cfg, depth, shift)?;
    let pass = expect.is_none_or(|e| e == r.invariant);
    let mut v = to_value(&r);
    v["label"] = json!(format!("at depth {depth}"));
    v["v0_differs_from_v1"] = json!(r.v0_differs_from_v1());
    if let Some(e) = expect {
        v["expected"] = json!(e);
    }
    Ok(BlockOutcome::new("invariance", pass, true, v))
}

fn timed(timings: bool, f: impl FnOnce() -> Result<BlockOutcome>) -> Result<BlockOutcome> {
    let start = Instant::now();
    let mut out = f()?;
    if timings {
        out.elapsed_ms = Some(start.elapsed().as_millis());
    }
    Ok(out)
}

/// Runs one block against a spec, with command-line overrides applied.
pub fn run_block(spec: &SpecFile, block: &Block, o: &Overrides) -> Result<BlockOutcome> {
    let depth = |d: &Option<u32>| o.depth.or(*d).unwrap_or(DEFAULT_DEPTH);
    timed(o.timings, || match block {
        Block::DimensionFunction { depth: d } => dimension_block(spec, depth(d)),
        Block::Project { depth: d } => project_block(spec, depth(d)),
        Block::ParsevalCheck {} => parseval_block(&spec.affine, &spec.probes),
        Block::Independence {
            window,
            max_size,
            tol,
            max_subsets,
        } => {
            let window = match (o.window, window) {
                (Some(w), _) => w,
                (None, Some(w)) => parse_window(w)?,
                (None, None) => parse_window(DEFAULT_WINDOW)?,
            };
            let tol = match (o.tol, tol) {
                (Some(t), _) => t,
                (None, Some(t)) => parse_tol(t)?,
                (None, None) => SweepOptions::default().tol,
            };
            let opts = SweepOptions {
                max_size: o.max_size.or(*max_size).unwrap_or(DEFAULT_MAX_SIZE),
                tol,
                max_subsets: o
                    .max_subsets
                    .or(max_subsets.map(u128::from))
                    .unwrap_or(DEFAULT_MAX_SUBSETS),
                record_subsets: o.csv,
                ..SweepOptions::default()
            };
            independence_block(&spec.affine, window, &opts)
        }
        Block::DilationCheck { depth: d } => dilation_block(spec, depth(d)),
        Block::Invariance {
            depth: d,
            shift,
            expect,
        } => {
            let shift = match shift {
                Some(s) => parse_rational(s)?,
                None => spec.affine.b().clone(),
            };
            invariance_block(&spec.affine, depth(d), &shift, *expect)
        }
        Block::Stabilization { max_depth } => {
            let max_depth = o.depth.or(*max_depth).unwrap_or(3);
            let r = stabilization_check(&spec.affine, max_depth)?;
            Ok(BlockOutcome::new("stabilization", true, true, to_value(&r)))
        }
    })
}
