use std::collections::HashSet;

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::affine::{element_ft, AffineConfig, Element};
use crate::error::{Error, Result};
use crate::num::{Amplitude, Hp};
use crate::step::ModStepFn;

/// Hermitian matrix of inner products `G[p][q] = ⟨f_p, f_q⟩`.
///
/// Only the upper triangle is integrated; the lower triangle holds the
/// conjugates, so the matrix is Hermitian by construction.
#[derive(Clone, Debug, Serialize)]
pub struct GramMatrix {
    elements: Option<Vec<Element>>,
    entries: Vec<Vec<Amplitude>>,
    error_bounds: Vec<Vec<f64>>,
    #[serde(skip)]
    functions: Vec<ModStepFn>,
}

fn pick<T: Clone>(m: &[Vec<T>], idx: &[usize]) -> Vec<Vec<T>> {
    idx.iter()
        .map(|&p| idx.iter().map(|&q| m[p][q].clone()).collect())
        .collect()
}

impl GramMatrix {
    /// Gram matrix of affine elements.
    pub fn affine(cfg: &AffineConfig, elements: &[Element]) -> Result<Self> {
        let mut seen = HashSet::new();
        for e in elements {
            if !seen.insert(*e) {
                return Err(Error::DuplicateElements { j: e.j, k: e.k });
            }
        }
        let fns: Vec<ModStepFn> = elements.par_iter().map(|e| element_ft(cfg, *e)).collect();
        let mut g = GramMatrix::from_functions(fns);
        g.elements = Some(elements.to_vec());
        Ok(g)
    }

    /// Gram matrix of arbitrary functions (given by their transforms).
    pub fn from_functions(functions: Vec<ModStepFn>) -> Self {
        let n = functions.len();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|p| (p..n).map(move |q| (p, q))).collect();
        let values: Vec<_> = pairs
            .par_iter()
            .map(|&(p, q)| functions[p].inner(&functions[q]))
            .collect();
        let mut entries = vec![vec![Amplitude::zero(); n]; n];
        let mut error_bounds = vec![vec![0.0; n]; n];
        for (&(p, q), v) in pairs.iter().zip(values) {
            entries[q][p] = v.value.conj();
            error_bounds[q][p] = v.error_bound;
            entries[p][q] = v.value;
            error_bounds[p][q] = v.error_bound;
        }
        GramMatrix {
            elements: None,
            entries,
            error_bounds,
            functions,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn elements(&self) -> Option<&[Element]> {
        self.elements.as_deref()
    }

    pub fn functions(&self) -> &[ModStepFn] {
        &self.functions
    }

    pub fn entry(&self, p: usize, q: usize) -> &Amplitude {
        &self.entries[p][q]
    }

    pub fn entries(&self) -> &[Vec<Amplitude>] {
        &self.entries
    }

    pub fn error_bound(&self, p: usize, q: usize) -> f64 {
        self.error_bounds[p][q]
    }

    pub fn max_error_bound(&self) -> f64 {
        self.error_bounds.iter().flatten().fold(0.0, |a, &b| f64::max(a, b))
    }

    pub fn is_exact(&self) -> bool {
        self.entries.iter().flatten().all(Amplitude::is_exact)
    }

    pub fn to_hp(&self) -> Vec<Vec<Complex<Hp>>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(Amplitude::to_hp).collect())
            .collect()
    }

    pub fn to_f64(&self) -> Vec<Vec<Complex<f64>>> {
        self.entries
            .iter()
            .map(|r| {
                r.iter()
                    .map(|a| {
                        let z = a.to_hp();
                        Complex::new(z.re.to_f64(), z.im.to_f64())
                    })
                    .collect()
            })
            .collect()
    }

    /// Principal submatrix on the given indices, in the given order.
    pub fn submatrix(&self, idx: &[usize]) -> GramMatrix {
        GramMatrix {
            elements: self.elements.as_ref().map(|e| idx.iter().map(|&i| e[i]).collect()),
            entries: pick(&self.entries, idx),
            error_bounds: pick(&self.error_bounds, idx),
            functions: idx.iter().map(|&i| self.functions[i].clone()).collect(),
        }
    }

    /// Same matrix after multiplying function `i` by the amplitude `c`.
    pub fn scale_function(&self, i: usize, c: &Amplitude) -> GramMatrix {
        let mut out = self.clone();
        let cc = c.conj();
        for q in 0..self.len() {
            out.entries[i][q] = out.entries[i][q].mul(c);
            out.entries[q][i] = out.entries[q][i].mul(&cc);
        }
        out.functions[i] = self.functions[i].scale(c);
        out
    }
}
