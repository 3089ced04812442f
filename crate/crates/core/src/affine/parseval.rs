use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::{AffineConfig, Mode as AffineMode};
use crate::error::{Error, Result};
use crate::num::{format_rational, Integral, Scalar};
use crate::step::{ModStepFn, Mode, DEFAULT_TOL};

type Intervals = Vec<(BigRational, BigRational)>;

const MAX_SCALE_STEPS: i32 = 4096;

fn ser_intervals<S: Serializer>(iv: &[(BigRational, BigRational)], s: S) -> std::result::Result<S::Ok, S::Error> {
    let v: Vec<[String; 2]> = iv
        .iter()
        .map(|(a, b)| [format_rational(a), format_rational(b)])
        .collect();
    v.serialize(s)
}

/// Support of `f` split at 0 into positive intervals and mirrored negative
/// intervals (both as subsets of `[0, ∞)`).
fn split_support(f: &ModStepFn) -> (Intervals, Intervals) {
    let zero = BigRational::zero();
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for (lo, hi) in f.support_intervals() {
        if hi > zero {
            pos.push((lo.clone().max(zero.clone()), hi.clone()));
        }
        if lo < zero {
            neg.push(((-hi).max(zero.clone()), -lo));
        }
    }
    (pos, neg)
}

fn hull(iv: &[(BigRational, BigRational)]) -> Option<(BigRational, BigRational)> {
    let lo = iv.iter().map(|x| &x.0).min()?;
    let hi = iv.iter().map(|x| &x.1).max()?;
    Some((lo.clone(), hi.clone()))
}

fn touches_zero(iv: &[(BigRational, BigRational)]) -> bool {
    iv.iter().any(|(lo, _)| lo.is_zero())
}

/// Integers `n` with `a^n·[dom_lo, dom_hi)` meeting `[sup_lo, sup_hi)`;
/// all endpoints positive.
fn scale_range(
    a: &BigRational,
    dom: &(BigRational, BigRational),
    sup: &(BigRational, BigRational),
) -> Result<Option<(i32, i32)>> {
    let too_far = || Error::UnboundedScaleRange("scale search did not terminate".into());
    // largest n with a^n·dom_lo < sup_hi
    let mut n_max = 0i32;
    let mut x = dom.0.clone();
    if x < sup.1 {
        while &x * a < sup.1 {
            x = &x * a;
            n_max += 1;
            if n_max > MAX_SCALE_STEPS {
                return Err(too_far());
            }
        }
    } else {
        while x >= sup.1 {
            x = &x / a;
            n_max -= 1;
            if n_max < -MAX_SCALE_STEPS {
                return Err(too_far());
            }
        }
    }
    // smallest n with a^n·dom_hi > sup_lo
    let mut n_min = 0i32;
    let mut y = dom.1.clone();
    if y > sup.0 {
        while &y / a > sup.0 {
            y = &y / a;
            n_min -= 1;
            if n_min < -MAX_SCALE_STEPS {
                return Err(too_far());
            }
        }
    } else {
        while y <= sup.0 {
            y = &y * a;
            n_min += 1;
            if n_min > MAX_SCALE_STEPS {
                return Err(too_far());
            }
        }
    }
    Ok((n_min <= n_max).then_some((n_min, n_max)))
}

fn compare(f: &ModStepFn, g: &ModStepFn) -> (bool, bool) {
    let exact = f.is_exact() && g.is_exact();
    let mode = if exact { Mode::Exact } else { Mode::Tol(DEFAULT_TOL) };
    (f.equals(g, mode).expect("mode matches exactness"), exact)
}

/// `Σ_n |ψ̂(aⁿξ)|²` on a multiplicative fundamental domain.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CalderonSum {
    #[serde(serialize_with = "crate::num::rat::serialize")]
    pub ell: BigRational,
    /// `[ℓ, aℓ)`, and `[-aℓ, -ℓ)` for two-sided systems.
    #[serde(serialize_with = "ser_intervals")]
    pub domains: Intervals,
    pub sum: ModStepFn,
    /// The sum equals `b` on every domain.
    pub pass: bool,
    pub exact: bool,
}

/// Calderón sum on `[ℓ, aℓ)` (and its mirror image for two-sided systems).
///
/// `ℓ` defaults to the smallest positive frequency in the support of `ψ̂`
/// (or of its mirror image when the positive part is empty, or 1 for the
/// zero generator). Supports touching 0 give infinitely many terms and are
/// rejected.
pub fn calderon_sum(cfg: &AffineConfig, ell: Option<BigRational>) -> Result<CalderonSum> {
    let sq = cfg.psi_hat().mul_conj(cfg.psi_hat());
    let (pos, neg) = split_support(&sq);
    if touches_zero(&pos) || touches_zero(&neg) {
        return Err(Error::UnsupportedSupport(
            "support of the generator touches frequency 0".into(),
        ));
    }
    let h2 = cfg.mode() == AffineMode::H2Plus;
    if h2 && !neg.is_empty() {
        return Err(Error::UnsupportedSupport("negative frequencies in H2plus mode".into()));
    }
    let ell = match ell {
        Some(l) if !l.is_positive() => {
            return Err(Error::InvalidArgument(format!(
                "ℓ must be positive, got {}",
                format_rational(&l)
            )))
        }
        Some(l) => l,
        None => hull(&pos).or_else(|| hull(&neg)).map_or_else(BigRational::one, |h| h.0),
    };
    let a = cfg.a_rational();
    let top = &ell * &a;
    let mut domains = vec![(ell.clone(), top.clone())];
    if !h2 {
        domains.insert(0, (-top.clone(), -ell.clone()));
    }
    let dom = (ell.clone(), top.clone());
    let mut pieces = Vec::new();
    let mut sides: Vec<(Intervals, BigRational, BigRational)> = vec![(pos, ell.clone(), top.clone())];
    if !h2 {
        sides.push((neg, -top.clone(), -ell.clone()));
    }
    for (side, lo, hi) in &sides {
        let Some(sup) = hull(side) else { continue };
        let Some((n0, n1)) = scale_range(&a, &dom, &sup)? else {
            continue;
        };
        for n in n0..=n1 {
            let term = sq
                .affine_reparam(&cfg.a_pow(-n), &BigRational::zero())?
                .restrict(lo, hi);
            pieces.extend(term.into_pieces());
        }
    }
    let sum = ModStepFn::superpose(pieces);
    let expected = ModStepFn::indicator_union(&domains).scale(&crate::num::Amplitude::rational(cfg.b().clone()));
    let (pass, exact) = compare(&sum, &expected);
    Ok(CalderonSum {
        ell,
        domains,
        sum,
        pass,
        exact,
    })
}

/// Range of scales for [`frame_sum`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JWindow {
    /// Every scale at which `f̂` and the dilated `ψ̂` overlap.
    Auto,
    /// `jmin..=jmax`.
    Range(i32, i32),
}

/// `Σ_{j,k} |⟨f, D^j T_{bk} ψ⟩|²` over a range of scales.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrameSum {
    pub scales: Option<(i32, i32)>,
    pub per_scale: Vec<(i32, Integral)>,
    pub total: Integral,
    pub norm_sqr: Integral,
    /// `total = ‖f‖²`, exactly when both sides are exact.
    pub equal: bool,
}

fn auto_scales(cfg: &AffineConfig, f: &ModStepFn) -> Result<Option<(i32, i32)>> {
    let (fp, fnn) = split_support(f);
    let (pp, pn) = split_support(cfg.psi_hat());
    let a = cfg.a_rational();
    let mut range: Option<(i32, i32)> = None;
    for (fs, ps) in [(&fp, &pp), (&fnn, &pn)] {
        if fs.is_empty() || ps.is_empty() {
            continue;
        }
        if touches_zero(fs) || touches_zero(ps) {
            return Err(Error::UnboundedScaleRange(
                "supports reach frequency 0, infinitely many scales overlap".into(),
            ));
        }
        for i in fs {
            for k in ps {
                if let Some((n0, n1)) = scale_range(&a, k, i)? {
                    range = Some(match range {
                        None => (n0, n1),
                        Some((m0, m1)) => (m0.min(n0), m1.max(n1)),
                    });
                }
            }
        }
    }
    Ok(range)
}

/// Frame sum of `f` at one scale:
/// `(1/b) ∫_{[0,1/b)} |Σ_m g(η + m/b)|² dη` with
/// `g(η) = a^{j/2} f̂(a^j η) conj(ψ̂(η))`.
fn scale_sum(cfg: &AffineConfig, f: &ModStepFn, j: i32) -> Result<Integral> {
    let g = f
        .affine_reparam(&cfg.a_pow(-j), &BigRational::zero())?
        .mul_conj(cfg.psi_hat())
        .scale(&crate::num::Amplitude::Exact(Scalar::sqrt_rational(&cfg.a_pow(j))));
    let p = g.periodize(&cfg.b().recip())?;
    Ok(p.norm_sqr().scale(&Scalar::from_rational(cfg.b().recip())))
}

pub fn frame_sum(cfg: &AffineConfig, f: &ModStepFn, window: JWindow) -> Result<FrameSum> {
    let scales = match window {
        JWindow::Auto => auto_scales(cfg, f)?,
        JWindow::Range(j0, j1) => (j0 <= j1).then_some((j0, j1)),
    };
    let js: Vec<i32> = scales.map_or_else(Vec::new, |(j0, j1)| (j0..=j1).collect());
    let per_scale: Vec<(i32, Integral)> = js
        .par_iter()
        .map(|&j| scale_sum(cfg, f, j).map(|v| (j, v)))
        .collect::<Result<_>>()?;
    let total = Integral::sum(per_scale.iter().map(|x| &x.1));
    let norm_sqr = f.norm_sqr();
    let equal = integrals_agree(&total, &norm_sqr);
    Ok(FrameSum {
        scales,
        per_scale,
        total,
        norm_sqr,
        equal,
    })
}

fn integrals_agree(x: &Integral, y: &Integral) -> bool {
    if x.is_exact() && y.is_exact() {
        return x.value == y.value;
    }
    let d = x.to_hp() - y.to_hp();
    let scale = y.to_hp().norm_sqr().sqrt().to_f64().max(1.0);
    d.norm_sqr().sqrt().to_f64() <= x.error_bound + y.error_bound + DEFAULT_TOL * scale
}

/// The shift-orthogonality condition
/// `t_q(ξ) = Σ_{j≥0} ψ̂(a^j ξ) conj(ψ̂(a^j(ξ + q/b))) ≡ 0` for `q ∉ aℤ`.
///
/// This is the standard external characterization of Parseval affine
/// frames, used here alongside the Calderón sum.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShiftOrthogonality {
    pub label: &'static str,
    /// Every `q` for which `t_q` can be nonzero at all.
    pub q_values: Vec<i64>,
    pub failing_q: Option<i64>,
    pub pass: bool,
    pub exact: bool,
}

pub const SHIFT_ORTHOGONALITY_LABEL: &str = "external characterization: t_q vanishes for q outside aZ";

/// `t_q` for a single `q`.
pub fn t_q(cfg: &AffineConfig, q: i64) -> Result<ModStepFn> {
    let psi = cfg.psi_hat();
    let Some((lo, hi)) = psi.support_hull() else {
        return Ok(ModStepFn::zero());
    };
    let diam = hi - lo;
    let shift = -(BigRational::from_integer(q.into()) / cfg.b());
    let step = BigRational::from_integer(q.abs().into()) / cfg.b();
    let mut pieces = Vec::new();
    let mut j = 0i32;
    while &step * cfg.a_pow(j) < diam {
        let s = cfg.a_pow(-j);
        let x = psi.affine_reparam(&s, &BigRational::zero())?;
        let y = psi.affine_reparam(&s, &shift)?;
        pieces.extend(x.mul_conj(&y).into_pieces());
        j += 1;
    }
    Ok(ModStepFn::superpose(pieces))
}

pub fn shift_orthogonality(cfg: &AffineConfig) -> Result<ShiftOrthogonality> {
    let mut q_values = Vec::new();
    if let Some((lo, hi)) = cfg.psi_hat().support_hull() {
        let bound = (hi - lo) * cfg.b();
        let mut q = 1i64;
        while BigRational::from_integer(q.into()) < bound {
            if q % cfg.a() != 0 {
                q_values.push(-q);
                q_values.push(q);
            }
            q += 1;
        }
        q_values.sort();
    }
    let mut exact = true;
    let mut failing_q = None;
    for &q in &q_values {
        let t = t_q(cfg, q)?;
        let (zero, ex) = compare(&t, &ModStepFn::zero());
        exact &= ex;
        if !zero {
            failing_q = Some(q);
            break;
        }
    }
    Ok(ShiftOrthogonality {
        label: SHIFT_ORTHOGONALITY_LABEL,
        q_values,
        pass: failing_q.is_none(),
        failing_q,
        exact,
    })
}

/// Frame sum against `‖f‖²` for one probe.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeResult {
    pub index: usize,
    pub norm_sqr: String,
    pub frame_sum: String,
    pub exact: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParsevalReport {
    pub calderon: CalderonSum,
    pub shift_orthogonality: ShiftOrthogonality,
    pub probes: Vec<ProbeResult>,
    pub pass: bool,
}

/// Calderón sum, shift orthogonality, and frame sums of the probes.
pub fn parseval_verify(cfg: &AffineConfig, probes: &[ModStepFn]) -> Result<ParsevalReport> {
    let calderon = calderon_sum(cfg, None)?;
    let shift_orthogonality = shift_orthogonality(cfg)?;
    let probes: Vec<ProbeResult> = probes
        .iter()
        .enumerate()
        .map(|(index, f)| {
            if cfg.mode() == AffineMode::H2Plus && f.support_hull().is_some_and(|(lo, _)| lo.is_negative()) {
                return Err(Error::UnsupportedSupport(format!(
                    "probe {index} has negative frequencies in H2plus mode"
                )));
            }
            let fs = frame_sum(cfg, f, JWindow::Auto)?;
            Ok(ProbeResult {
                index,
                norm_sqr: fs.norm_sqr.display(),
                frame_sum: fs.total.display(),
                exact: fs.total.is_exact() && fs.norm_sqr.is_exact(),
                pass: fs.equal,
            })
        })
        .collect::<Result<_>>()?;
    let pass = calderon.pass && shift_orthogonality.pass && probes.iter().all(|p| p.pass);
    Ok(ParsevalReport {
        calderon,
        shift_orthogonality,
        probes,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int, rat, Amplitude};

    fn cfg(psi: ModStepFn, mode: AffineMode) -> AffineConfig {
        AffineConfig::new(2, int(1), psi, mode).unwrap()
    }

    #[test]
    fn heil_calderon_is_one() {
        let c = calderon_sum(&cfg(ModStepFn::indicator(int(1), int(2)), AffineMode::H2Plus), None).unwrap();
        assert_eq!(c.sum, ModStepFn::indicator(int(1), int(2)));
        assert!(c.pass && c.exact);
    }

    #[test]
    fn overlapping_scales_double_up() {
        let c = calderon_sum(&cfg(ModStepFn::indicator(int(1), int(3)), AffineMode::H2Plus), None).unwrap();
        assert!(!c.pass);
        assert_eq!(c.sum.terms_at(&rat(5, 4)).len(), 1);
        assert_eq!(c.sum.terms_at(&rat(5, 4))[0].0, &Amplitude::rational(int(2)));
    }

    #[test]
    fn zero_generator_fails_calderon() {
        let c = calderon_sum(&cfg(ModStepFn::zero(), AffineMode::Full), None).unwrap();
        assert!(!c.pass);
        assert!(c.sum.is_zero());
    }

    #[test]
    fn support_at_zero_is_rejected() {
        let e = calderon_sum(&cfg(ModStepFn::indicator(int(0), int(1)), AffineMode::H2Plus), None);
        assert!(matches!(e, Err(Error::UnsupportedSupport(_))));
    }

    #[test]
    fn frame_sum_single_and_double_scale() {
        let c = cfg(ModStepFn::indicator(int(1), int(2)), AffineMode::H2Plus);
        let one = frame_sum(&c, &ModStepFn::indicator(int(1), int(2)), JWindow::Auto).unwrap();
        assert_eq!(one.scales, Some((0, 0)));
        assert_eq!(one.total.as_rational(), Some(int(1)));
        assert!(one.equal);
        let two = frame_sum(&c, &ModStepFn::indicator(int(1), int(3)), JWindow::Auto).unwrap();
        assert_eq!(two.scales, Some((0, 1)));
        assert_eq!(two.total.as_rational(), Some(int(2)));
        assert!(two.equal);
        let zero = frame_sum(&c, &ModStepFn::zero(), JWindow::Auto).unwrap();
        assert_eq!(zero.total.as_rational(), Some(int(0)));
    }

    #[test]
    fn unbounded_scale_range_is_reported() {
        let c = cfg(ModStepFn::indicator(int(1), int(2)), AffineMode::Full);
        let e = frame_sum(&c, &ModStepFn::indicator(int(0), int(1)), JWindow::Auto);
        assert!(matches!(e, Err(Error::UnboundedScaleRange(_))));
    }

    #[test]
    fn heil_shift_orthogonality() {
        let s = shift_orthogonality(&cfg(ModStepFn::indicator(int(1), int(2)), AffineMode::H2Plus)).unwrap();
        assert!(s.pass && s.exact);
        // support width 1 leaves no admissible q
        assert!(s.q_values.is_empty());
        let wide = shift_orthogonality(&cfg(ModStepFn::indicator(int(1), int(3)), AffineMode::H2Plus)).unwrap();
        assert_eq!(wide.q_values, vec![-1, 1]);
        assert!(!wide.pass);
    }
}
