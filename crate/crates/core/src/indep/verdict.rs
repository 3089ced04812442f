use std::collections::BTreeMap;

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::GramMatrix;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, null_vector};
use crate::num::{Amplitude, Hp, Scalar};
use crate::step::linear_combine;

/// Relative eigenvalue threshold below which a family is not certified
/// independent.
pub const DEFAULT_INDEPENDENCE_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Independent,
    Dependent,
    Inconclusive,
}

/// Coefficients of a (near-)vanishing combination.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub coefficients: Vec<Amplitude>,
    /// `‖Σ c_p f_p‖ / √λmax` for a unit coefficient vector.
    pub residual_norm: f64,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndependenceVerdict {
    pub status: Status,
    pub witness: Option<Witness>,
    /// `√(λmin / λmax)` of the Gram matrix.
    pub min_singular_value: f64,
    /// `λmax / λmin` when the verdict is not `independent`.
    pub condition_number: Option<f64>,
    pub tolerance: f64,
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")))
    }
}

fn gaussian_matrix(g: &GramMatrix) -> Option<Vec<Vec<Complex<BigRational>>>> {
    g.entries()
        .iter()
        .map(|r| r.iter().map(|a| a.as_exact()?.as_gaussian()).collect())
        .collect()
}

/// Residual of the combination, relative to `√λmax`, and whether it was
/// computed exactly.
fn residual(g: &GramMatrix, coeffs: &[Amplitude], lmax: &Hp) -> (f64, bool) {
    if g.functions().len() == g.len() {
        let r = linear_combine(coeffs, g.functions()).expect("lengths match");
        let n = r.norm_sqr();
        if n.is_exact() && n.value.is_zero() {
            return (0.0, true);
        }
        let num = n.to_hp().re;
        return (relative(&num, coeffs, lmax), false);
    }
    // quadratic form c^H G c
    let mut q = Complex::new(Hp::zero(), Hp::zero());
    for (p, cp) in coeffs.iter().enumerate() {
        for (r, cr) in coeffs.iter().enumerate() {
            q = q + cp.to_hp() * g.entry(r, p).to_hp() * cr.to_hp().conj();
        }
    }
    (relative(&q.re, coeffs, lmax), false)
}

fn relative(num: &Hp, coeffs: &[Amplitude], lmax: &Hp) -> f64 {
    let cn = coeffs.iter().fold(Hp::zero(), |a, c| a + c.norm_sqr_hp());
    let denom = cn * lmax.clone();
    if num <= &Hp::zero() {
        return 0.0;
    }
    if denom <= Hp::zero() {
        return num.sqrt().to_f64();
    }
    (num.clone() / denom).sqrt().to_f64()
}

/// Certifies linear independence of the functions behind a Gram matrix.
///
/// Independent when `λmin > tol·λmax`. Otherwise the eigenvector of the
/// smallest eigenvalue is recombined and reported as a dependence witness
/// when its residual is below `tol`, and the verdict is inconclusive when
/// it is not. Exact Gaussian Gram matrices are reduced exactly first.
pub fn independence_test(g: &GramMatrix, tol: f64) -> Result<IndependenceVerdict> {
    check_tol(tol)?;
    let independent = |sv: f64| IndependenceVerdict {
        status: Status::Independent,
        witness: None,
        min_singular_value: sv,
        condition_number: None,
        tolerance: tol,
    };
    if g.is_empty() {
        return Ok(independent(1.0));
    }
    let eig = hermitian_eigen(&g.to_hp());
    let lmax = eig.values.last().cloned().unwrap_or_else(Hp::zero);
    let lmin = eig.values[0].clone().max(Hp::zero());
    let ratio = if lmax > Hp::zero() {
        (lmin.clone() / lmax.clone()).to_f64()
    } else {
        0.0
    };
    let sv = ratio.max(0.0).sqrt();

    if let Some(m) = gaussian_matrix(g) {
        return Ok(match null_vector(&m) {
            Some(v) => {
                let coefficients: Vec<Amplitude> = v
                    .into_iter()
                    .map(|z| Amplitude::Exact(Scalar::gaussian(z.re, z.im)))
                    .collect();
                let (residual_norm, exact) = residual(g, &coefficients, &lmax);
                IndependenceVerdict {
                    status: Status::Dependent,
                    witness: Some(Witness {
                        coefficients,
                        residual_norm,
                        exact,
                    }),
                    min_singular_value: 0.0,
                    condition_number: None,
                    tolerance: tol,
                }
            }
            // exact full rank
            None => independent(sv),
        });
    }

    if ratio > tol {
        return Ok(independent(sv));
    }
    let coefficients: Vec<Amplitude> = eig.vectors[0].iter().cloned().map(Amplitude::Approx).collect();
    let (residual_norm, exact) = residual(g, &coefficients, &lmax);
    let status = if residual_norm < tol {
        Status::Dependent
    } else {
        Status::Inconclusive
    };
    let condition_number = (lmin > Hp::zero()).then(|| (lmax / lmin).to_f64());
    Ok(IndependenceVerdict {
        status,
        witness: Some(Witness {
            coefficients,
            residual_norm,
            exact,
        }),
        min_singular_value: sv,
        condition_number,
        tolerance: tol,
    })
}

/// Verdict for a finite combination of lattice translates `Σ c_k T_{bk}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TranslatesVerdict {
    pub status: Status,
    /// A frequency where `Σ c_k e^{2πi·bkξ}` does not vanish.
    #[serde(serialize_with = "crate::num::rat::serialize")]
    pub witness_point: BigRational,
    pub witness_value: Amplitude,
    pub witness_abs: f64,
}

/// The trigonometric polynomial `Σ c_k e^{2πi·bkξ}` of a nonzero
/// coefficient vector vanishes only on a null set, so the translates are
/// independent. The witness is the largest value among the `N` equispaced
/// samples `ξ = j/(bN)`, `N = kmax - kmin + 1`, which cannot all vanish.
pub fn translates_criterion(b: &BigRational, coeffs: &BTreeMap<i64, Amplitude>) -> Result<TranslatesVerdict> {
    let nonzero: Vec<(i64, &Amplitude)> = coeffs
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (*k, c))
        .collect();
    let (Some(first), Some(last)) = (nonzero.first(), nonzero.last()) else {
        return Err(Error::DegenerateCoefficients);
    };
    let n = last.0 - first.0 + 1;
    let mut best: Option<(i64, Amplitude, Hp)> = None;
    for j in 0..n {
        let value = nonzero.iter().fold(Amplitude::zero(), |acc, (k, c)| {
            let turns = BigRational::new((k * j).into(), n.into());
            acc.add(&c.mul_scalar(&Scalar::cis_turns(&turns)))
        });
        let abs = value.abs_hp();
        if best.as_ref().is_none_or(|b| abs > b.2) {
            best = Some((j, value, abs));
        }
    }
    let (j, witness_value, abs) = best.expect("n ≥ 1");
    let witness_point = BigRational::new(j.into(), n.into()) / b;
    let status = if abs > Hp::zero() {
        Status::Independent
    } else {
        Status::Inconclusive
    };
    Ok(TranslatesVerdict {
        status,
        witness_point,
        witness_value,
        witness_abs: abs.to_f64(),
    })
}
