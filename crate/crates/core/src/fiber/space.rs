use std::collections::BTreeSet;

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::{DimensionFunction, FiberMap, Lattice};
use crate::error::{Error, Result};
use crate::linalg::{orthogonal_basis, span_basis};
use crate::num::{format_rational, Amplitude, Hp, Integral, Scalar};
use crate::step::{linear_combine, ModStepFn, Mode, Piece, DEFAULT_TOL};

/// Relative singular-value cutoff for rank decisions in rounded arithmetic.
pub const RANK_TOL: f64 = 1e-9;

/// One cell of the dual domain with a constant fiber subspace.
///
/// `basis` is orthonormal over the component indices in `indices`. Exact
/// cells hold exact scalars; others hold 128-bit approximations.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cell {
    #[serde(serialize_with = "crate::num::rat::serialize")]
    pub lo: BigRational,
    #[serde(serialize_with = "crate::num::rat::serialize")]
    pub hi: BigRational,
    pub indices: Vec<i64>,
    pub exact: bool,
    pub basis: Vec<Vec<Amplitude>>,
    #[serde(skip)]
    projector: Vec<Vec<Amplitude>>,
}

impl Cell {
    fn empty(lo: BigRational, hi: BigRational) -> Self {
        Cell {
            lo,
            hi,
            indices: Vec::new(),
            exact: true,
            basis: Vec::new(),
            projector: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Orthogonal projector onto the cell subspace, indexed like `indices`.
    pub fn projector(&self) -> &[Vec<Amplitude>] {
        &self.projector
    }

    /// Projector entry for component indices `(m, n)`.
    fn projector_entry(&self, m: i64, n: i64) -> Amplitude {
        match (self.indices.binary_search(&m), self.indices.binary_search(&n)) {
            (Ok(i), Ok(j)) => self.projector[i][j].clone(),
            _ => Amplitude::zero(),
        }
    }
}

/// A lattice-invariant space described cell by cell over `[0, 1/b)`,
/// optionally together with the generators it was built from.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SiSpace {
    lattice: Lattice,
    cells: Vec<Cell>,
    #[serde(skip_serializing_if = "Option::is_none")]
    generators: Option<Vec<ModStepFn>>,
}

/// Outcome of a membership test.
#[derive(Clone, Debug, PartialEq)]
pub struct Membership {
    pub member: bool,
    /// `‖f - P f‖²`.
    pub residual_norm_sqr: Integral,
    /// True when the decision was made in exact arithmetic.
    pub exact: bool,
}

/// First cell of a common refinement on which two spaces differ.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpanDifference {
    #[serde(serialize_with = "crate::num::rat::serialize")]
    pub lo: BigRational,
    #[serde(serialize_with = "crate::num::rat::serialize")]
    pub hi: BigRational,
    pub dim_left: usize,
    pub dim_right: usize,
}

fn varying(lo: &BigRational, hi: &BigRational) -> Error {
    Error::VaryingFiber {
        lo: format_rational(lo),
        hi: format_rational(hi),
    }
}

/// Fiber vector of one generator on a cell, normalized so that its first
/// nonzero entry is 1. Modulation is constant across the entries, so the
/// normalized vector does not depend on the point of the cell.
fn cell_vector(fm: &FiberMap, lo: &BigRational, hi: &BigRational) -> Result<Vec<(i64, Amplitude)>> {
    let mut freq: Option<&BigRational> = None;
    let mut entries = Vec::new();
    for (&m, comp) in fm.components() {
        let terms = comp.terms_at(lo);
        match terms.as_slice() {
            [] => continue,
            [(amp, tau)] => {
                if freq.is_some_and(|f| f != *tau) {
                    return Err(varying(lo, hi));
                }
                freq = Some(tau);
                entries.push((m, (*amp).clone()));
            }
            _ => return Err(varying(lo, hi)),
        }
    }
    let Some(first) = entries.first() else {
        return Ok(entries);
    };
    let inv = first.1.inv().expect("stored amplitudes are nonzero");
    Ok(entries.into_iter().map(|(m, a)| (m, a.mul(&inv))).collect())
}

fn build_cell(lo: BigRational, hi: BigRational, fibers: &[FiberMap]) -> Result<Cell> {
    let mut vectors = Vec::new();
    for fm in fibers {
        let v = cell_vector(fm, &lo, &hi)?;
        if !v.is_empty() {
            vectors.push(v);
        }
    }
    if vectors.is_empty() {
        return Ok(Cell::empty(lo, hi));
    }
    let indices: Vec<i64> = vectors
        .iter()
        .flat_map(|v| v.iter().map(|e| e.0))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let dense: Vec<Vec<Amplitude>> = vectors
        .iter()
        .map(|v| {
            let mut row = vec![Amplitude::zero(); indices.len()];
            for (m, a) in v {
                row[indices.binary_search(m).expect("index collected above")] = a.clone();
            }
            row
        })
        .collect();

    let gaussian: Option<Vec<Vec<Complex<BigRational>>>> = dense
        .iter()
        .map(|row| row.iter().map(|a| a.as_exact().and_then(Scalar::as_gaussian)).collect())
        .collect();

    let (exact, basis, projector) = match gaussian {
        Some(gv) => {
            let ws = orthogonal_basis(&gv);
            let n = indices.len();
            let mut proj = vec![vec![Complex::<BigRational>::zero(); n]; n];
            let mut basis = Vec::with_capacity(ws.len());
            for w in &ws {
                let q: BigRational = w.iter().map(|z| z.norm_sqr()).sum();
                let scale = Scalar::sqrt_rational(&q.recip());
                basis.push(
                    w.iter()
                        .map(|z| Amplitude::Exact(Scalar::gaussian(z.re.clone(), z.im.clone()).mul(&scale)))
                        .collect(),
                );
                for i in 0..n {
                    for j in 0..n {
                        proj[i][j] = &proj[i][j] + (&w[i] * w[j].conj()).unscale(q.clone());
                    }
                }
            }
            let projector = proj
                .into_iter()
                .map(|row| {
                    row.into_iter()
                        .map(|z| Amplitude::Exact(Scalar::gaussian(z.re, z.im)))
                        .collect()
                })
                .collect();
            (true, basis, projector)
        }
        None => {
            let hv: Vec<Vec<Complex<Hp>>> = dense
                .iter()
                .map(|row| row.iter().map(Amplitude::to_hp).collect())
                .collect();
            let sb = span_basis(&hv, Hp::from_f64(RANK_TOL));
            let n = indices.len();
            let projector = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let z = sb.basis.iter().fold(Complex::new(Hp::zero(), Hp::zero()), |acc, u| {
                                acc + u[i].clone() * u[j].conj()
                            });
                            Amplitude::Approx(z)
                        })
                        .collect()
                })
                .collect();
            let basis = sb
                .basis
                .into_iter()
                .map(|u| u.into_iter().map(Amplitude::Approx).collect())
                .collect();
            (false, basis, projector)
        }
    };
    Ok(Cell {
        lo,
        hi,
        indices,
        exact,
        basis,
        projector,
    })
}

impl SiSpace {
    /// The space whose fiber at each point is spanned by the given fibers.
    ///
    /// Cells are the common refinement of all component breakpoints. Each
    /// generator must carry a single modulation frequency per cell
    /// (`VaryingFiber` otherwise). Cells whose normalized fiber vectors are
    /// Gaussian rationals are orthonormalized exactly; the rest use 128-bit
    /// arithmetic with relative rank cutoff [`RANK_TOL`].
    pub fn range_function(lattice: &Lattice, fibers: &[FiberMap]) -> Result<SiSpace> {
        for fm in fibers {
            lattice.check_same(fm.lattice())?;
        }
        let period = lattice.period();
        let mut cuts: Vec<BigRational> = vec![BigRational::zero(), period];
        for fm in fibers {
            for comp in fm.components().values() {
                cuts.extend(comp.breakpoints());
            }
        }
        cuts.sort();
        cuts.dedup();
        let raw: Vec<Cell> = cuts
            .par_windows(2)
            .map(|w| build_cell(w[0].clone(), w[1].clone(), fibers))
            .collect::<Result<_>>()?;
        let mut cells: Vec<Cell> = Vec::with_capacity(raw.len());
        for c in raw {
            match cells.last_mut() {
                Some(last) if last.indices == c.indices && last.basis == c.basis && last.exact == c.exact => {
                    last.hi = c.hi
                }
                _ => cells.push(c),
            }
        }
        Ok(SiSpace {
            lattice: lattice.clone(),
            cells,
            generators: None,
        })
    }

    /// The space generated by the lattice translates of `generators`
    /// (given as Fourier transforms); the generator list is kept.
    pub fn generated(lattice: &Lattice, generators: Vec<ModStepFn>) -> Result<SiSpace> {
        let fibers = generators
            .par_iter()
            .map(|g| FiberMap::fiberize(g, lattice))
            .collect::<Result<Vec<_>>>()?;
        let mut space = SiSpace::range_function(lattice, &fibers)?;
        space.generators = Some(generators);
        Ok(space)
    }

    pub fn zero(lattice: &Lattice) -> SiSpace {
        SiSpace::generated(lattice, Vec::new()).expect("empty generator list")
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn generators(&self) -> Result<&[ModStepFn]> {
        self.generators.as_deref().ok_or(Error::MissingGenerators)
    }

    /// True when every cell basis is exact.
    pub fn is_exact(&self) -> bool {
        self.cells.iter().all(|c| c.exact)
    }

    pub fn cell_at(&self, x: &BigRational) -> Option<&Cell> {
        let i = self.cells.partition_point(|c| &c.lo <= x);
        i.checked_sub(1).map(|i| &self.cells[i]).filter(|c| x < &c.hi)
    }

    pub fn dimension_function(&self) -> DimensionFunction {
        let steps = self
            .cells
            .iter()
            .map(|c| (c.lo.clone(), c.hi.clone(), c.dim() as u32))
            .collect();
        DimensionFunction::from_steps(self.lattice.period(), steps).expect("cells partition the domain")
    }

    /// Orthogonal projection of `f` (given as `f̂`) onto the space, applied
    /// fiberwise.
    pub fn project(&self, f: &ModStepFn) -> Result<ModStepFn> {
        let fm = FiberMap::fiberize(f, &self.lattice)?;
        let parts: Vec<Vec<Piece>> = self
            .cells
            .par_iter()
            .filter(|c| c.dim() > 0)
            .map(|cell| {
                let sources: Vec<(i64, ModStepFn)> = fm
                    .components()
                    .iter()
                    .filter(|(m, _)| cell.indices.binary_search(m).is_ok())
                    .map(|(&m, g)| (m, g.restrict(&cell.lo, &cell.hi)))
                    .filter(|(_, g)| !g.is_zero())
                    .collect();
                if sources.is_empty() {
                    return Ok(Vec::new());
                }
                let fns: Vec<ModStepFn> = sources.iter().map(|(_, g)| g.clone()).collect();
                let one = BigRational::from_integer(1.into());
                let mut pieces = Vec::new();
                for &m in &cell.indices {
                    let coeffs: Vec<Amplitude> = sources.iter().map(|(n, _)| cell.projector_entry(m, *n)).collect();
                    let g = linear_combine(&coeffs, &fns)?;
                    let shift = BigRational::from_integer(m.into()) * self.lattice.period();
                    pieces.extend(g.affine_reparam(&one, &shift)?.into_pieces());
                }
                Ok(pieces)
            })
            .collect::<Result<_>>()?;
        Ok(ModStepFn::superpose(parts.into_iter().flatten().collect()))
    }

    /// Whether `f` lies in the space.
    ///
    /// `Mode::Exact` requires an exact residual (`InexactOperand`
    /// otherwise) and tests it for zero. `Mode::Tol(ε)` accepts when
    /// `‖f - Pf‖ < ε·‖f‖` or the residual vanishes.
    pub fn membership(&self, f: &ModStepFn, mode: Mode) -> Result<Membership> {
        let residual = f - &self.project(f)?;
        let residual_norm_sqr = residual.norm_sqr();
        match mode {
            Mode::Exact => {
                if !residual.is_exact() {
                    return Err(Error::InexactOperand);
                }
                Ok(Membership {
                    member: residual.is_zero(),
                    residual_norm_sqr,
                    exact: true,
                })
            }
            Mode::Tol(eps) => {
                let r = residual_norm_sqr.re_f64().max(0.0).sqrt();
                let n = f.norm_sqr().re_f64().max(0.0).sqrt();
                Ok(Membership {
                    member: residual.is_zero() || r < eps * n,
                    residual_norm_sqr,
                    exact: false,
                })
            }
        }
    }

    /// Exact membership when the residual is exact, otherwise the default
    /// tolerance.
    pub fn membership_auto(&self, f: &ModStepFn) -> Result<Membership> {
        match self.membership(f, Mode::Exact) {
            Err(Error::InexactOperand) => self.membership(f, Mode::Tol(DEFAULT_TOL)),
            other => other,
        }
    }

    /// Whether translating every stored generator by `t` stays inside the
    /// space. Together with the lattice's own translations this decides
    /// invariance under the lattice generated by `t` and `bℤ`.
    pub fn invariance_test(&self, t: &BigRational) -> Result<bool> {
        for g in self.generators()? {
            if !self.membership_auto(&g.modulate(t))?.member {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// First cell of the common refinement where the fiber subspaces of
    /// `self` and `other` differ, or `None` if they agree everywhere.
    pub fn span_difference(&self, other: &SiSpace) -> Result<Option<SpanDifference>> {
        self.lattice.check_same(&other.lattice)?;
        let mut cuts: Vec<&BigRational> = self.cells.iter().chain(&other.cells).map(|c| &c.lo).collect();
        cuts.sort();
        cuts.dedup();
        let period = self.lattice.period();
        for (i, lo) in cuts.iter().enumerate() {
            let hi = cuts.get(i + 1).copied().unwrap_or(&period);
            let a = self.cell_at(lo).expect("cells cover the domain");
            let b = other.cell_at(lo).expect("cells cover the domain");
            if !same_subspace(a, b) {
                return Ok(Some(SpanDifference {
                    lo: (*lo).clone(),
                    hi: hi.clone(),
                    dim_left: a.dim(),
                    dim_right: b.dim(),
                }));
            }
        }
        Ok(None)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("space serializes")
    }
}

fn same_subspace(a: &Cell, b: &Cell) -> bool {
    if a.dim() != b.dim() {
        return false;
    }
    if a.dim() == 0 {
        return true;
    }
    let idx: BTreeSet<i64> = a.indices.iter().chain(&b.indices).copied().collect();
    let exact = a.exact && b.exact;
    let mut worst = 0.0f64;
    for &m in &idx {
        for &n in &idx {
            let (p, q) = (a.projector_entry(m, n), b.projector_entry(m, n));
            if exact {
                if p != q {
                    return false;
                }
            } else {
                let d = p.to_hp() - q.to_hp();
                worst = worst.max(d.norm_sqr().sqrt().to_f64());
            }
        }
    }
    worst <= DEFAULT_TOL
}
