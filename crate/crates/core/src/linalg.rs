//! Small dense complex linear algebra, generic over the scalar field.
//!
//! Exact fields ([`BigRational`](num_rational::BigRational)) get
//! Gram–Schmidt with exact zero tests; rounded fields (`f32`, `f64`,
//! [`Hp`](crate::num::Hp)) get a cyclic Jacobi eigensolver for Hermitian
//! matrices and a rank-revealing span basis built on it.

#![allow(clippy::needless_range_loop)]

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::num::{Real, RealFloat};

/// Row-major dense complex matrix.
pub type CMatrix<T> = Vec<Vec<Complex<T>>>;

const MAX_SWEEPS: usize = 64;

/// `Σ uᵢ·conj(vᵢ)`.
pub fn inner<T: Real>(u: &[Complex<T>], v: &[Complex<T>]) -> Complex<T> {
    u.iter()
        .zip(v)
        .fold(Complex::zero(), |acc, (a, b)| acc + a.clone() * b.conj())
}

/// Gram matrix `G[p][q] = ⟨v_q, v_p⟩`, i.e. `G = V^H V` for the matrix
/// whose columns are the given vectors.
pub fn gram<T: Real>(vectors: &[Vec<Complex<T>>]) -> CMatrix<T> {
    let k = vectors.len();
    let mut g = vec![vec![Complex::zero(); k]; k];
    for p in 0..k {
        for q in p..k {
            let z = inner(&vectors[q], &vectors[p]);
            g[q][p] = z.conj();
            g[p][q] = z;
        }
    }
    g
}

/// Orthogonal (not normalized) basis of the span, by Gram–Schmidt with
/// exact zero tests. Vectors dependent on earlier ones are dropped.
pub fn orthogonal_basis<T: Real>(vectors: &[Vec<Complex<T>>]) -> Vec<Vec<Complex<T>>> {
    let mut basis: Vec<(Vec<Complex<T>>, T)> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for (u, nu) in &basis {
            let c = inner(&w, u).unscale(nu.clone());
            for (wi, ui) in w.iter_mut().zip(u) {
                *wi = wi.clone() - c.clone() * ui.clone();
            }
        }
        let nw = w.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr());
        if !nw.is_zero() {
            basis.push((w, nw));
        }
    }
    basis.into_iter().map(|(w, _)| w).collect()
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
/// `vectors[i]` is a unit eigenvector for `values[i]`.
#[derive(Clone, Debug)]
pub struct Eigen<T> {
    pub values: Vec<T>,
    pub vectors: Vec<Vec<Complex<T>>>,
}

/// Cyclic Jacobi eigensolver for Hermitian matrices.
///
/// Each rotation first rotates the pivot entry onto the positive real axis
/// with a diagonal phase, then applies the classical real rotation.
pub fn hermitian_eigen<T: RealFloat>(m: &[Vec<Complex<T>>]) -> Eigen<T> {
    let n = m.len();
    let mut a: CMatrix<T> = m.to_vec();
    let mut v: CMatrix<T> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Complex::one() } else { Complex::zero() })
                .collect()
        })
        .collect();
    for (i, row) in a.iter_mut().enumerate() {
        row[i].im = T::zero();
    }
    let two = T::one() + T::one();
    let eps = T::epsilon();

    for _ in 0..MAX_SWEEPS {
        let mut off = T::zero();
        let mut total = T::zero();
        for p in 0..n {
            for q in 0..n {
                let s = a[p][q].norm_sqr();
                if p != q {
                    off = off + s.clone();
                }
                total = total + s;
            }
        }
        if off <= eps.clone() * eps.clone() * total {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let r2 = a[p][q].norm_sqr();
                if r2.is_zero() {
                    continue;
                }
                let r = r2.sqrt();
                let w = a[p][q].conj().unscale(r.clone());
                let theta = (a[q][q].re.clone() - a[p][p].re.clone()) / (two.clone() * r);
                let root = (theta.clone() * theta.clone() + T::one()).sqrt();
                let t = if theta < T::zero() {
                    -T::one() / (root - theta)
                } else {
                    T::one() / (theta + root)
                };
                let c = T::one() / (t.clone() * t.clone() + T::one()).sqrt();
                let s = t * c.clone();
                let wc = w.conj();
                for row in a.iter_mut().chain(v.iter_mut()) {
                    let x = row[p].clone();
                    let y = row[q].clone();
                    row[p] = x.scale(c.clone()) - (y.clone() * w.clone()).scale(s.clone());
                    row[q] = x.scale(s.clone()) + (y * w.clone()).scale(c.clone());
                }
                for k in 0..n {
                    let x = a[p][k].clone();
                    let y = a[q][k].clone();
                    a[p][k] = x.scale(c.clone()) - (y.clone() * wc.clone()).scale(s.clone());
                    a[q][k] = x.scale(s.clone()) + (y * wc.clone()).scale(c.clone());
                }
                a[p][q] = Complex::zero();
                a[q][p] = Complex::zero();
                a[p][p].im = T::zero();
                a[q][q].im = T::zero();
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i][i].re.partial_cmp(&a[j][j].re).unwrap_or(std::cmp::Ordering::Equal));
    Eigen {
        values: order.iter().map(|&i| a[i][i].re.clone()).collect(),
        vectors: order
            .iter()
            .map(|&i| v.iter().map(|row| row[i].clone()).collect())
            .collect(),
    }
}

/// Orthonormal basis of a span computed in rounded arithmetic.
#[derive(Clone, Debug)]
pub struct SpanBasis<T> {
    pub basis: Vec<Vec<Complex<T>>>,
    /// Singular values of the generator matrix that were kept, descending.
    pub kept: Vec<T>,
    /// Largest singular value that was treated as zero, if any.
    pub largest_dropped: Option<T>,
}

/// Orthonormal basis for the span of `vectors`, discarding directions whose
/// singular value is at most `rel_tol` times the largest.
pub fn span_basis<T: RealFloat>(vectors: &[Vec<Complex<T>>], rel_tol: T) -> SpanBasis<T> {
    let empty = SpanBasis {
        basis: Vec::new(),
        kept: Vec::new(),
        largest_dropped: None,
    };
    let Some(dim) = vectors.first().map(Vec::len) else {
        return empty;
    };
    let eig = hermitian_eigen(&gram(vectors));
    let lmax = eig.values.last().cloned().unwrap_or_else(T::zero);
    if lmax <= T::zero() {
        return SpanBasis {
            largest_dropped: Some(T::zero()),
            ..empty
        };
    }
    let cutoff = rel_tol.clone() * rel_tol * lmax;
    let mut out = empty;
    for (lambda, w) in eig.values.iter().zip(&eig.vectors).rev() {
        if *lambda <= cutoff {
            let sv = if *lambda > T::zero() { lambda.sqrt() } else { T::zero() };
            if out.largest_dropped.is_none() {
                out.largest_dropped = Some(sv);
            }
            continue;
        }
        let sigma = lambda.sqrt();
        let u: Vec<Complex<T>> = (0..dim)
            .map(|i| {
                vectors
                    .iter()
                    .zip(w)
                    .fold(Complex::zero(), |acc, (vq, wq)| acc + vq[i].clone() * wq.clone())
                    .unscale(sigma.clone())
            })
            .collect();
        out.basis.push(u);
        out.kept.push(sigma);
    }
    out
}

/// A nonzero vector in the kernel of `m`, by exact row reduction; `None`
/// when the kernel is trivial.
pub fn null_vector<T: Real>(m: &[Vec<Complex<T>>]) -> Option<Vec<Complex<T>>> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a: CMatrix<T> = m.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = Complex::<T>::one() / a[r][c].clone();
        for x in a[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let d = f.clone() * a[r][j].clone();
                    a[i][j] = a[i][j].clone() - d;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let free = (0..cols).find(|c| !pivots.contains(c))?;
    let mut v = vec![Complex::zero(); cols];
    v[free] = Complex::one();
    for (row, &pc) in pivots.iter().enumerate() {
        v[pc] = -a[row][free].clone();
    }
    Some(v)
}
