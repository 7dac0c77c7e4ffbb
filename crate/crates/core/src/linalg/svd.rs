/*
Copyright 2026 The nodeloc Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

//! Singular value decomposition by one-sided (Hestenes) Jacobi rotations,
//! plus the rank and null-space helpers built on it.
//!
//! Problem sizes here are at most a few dozen rows by a few hundred
//! columns, so the quadratic convergence and high relative accuracy of
//! Jacobi matter more than raw speed.

use crate::error::{Error, Result};
use crate::linalg::{dot, norm2, Matrix};
use crate::scalar::Scalar;

const MAX_SWEEPS: usize = 80;

/// Thin SVD `A = U diag(s) V^T` with `k = min(rows, cols)` singular triplets.
#[derive(Clone, Debug)]
pub struct Svd<T> {
    /// `rows x k`, orthonormal columns.
    pub u: Matrix<T>,
    /// Descending, non-negative.
    pub singular_values: Vec<T>,
    /// `cols x k`, orthonormal columns.
    pub v: Matrix<T>,
}

impl<T: Scalar> Svd<T> {
    /// Number of singular values above `rank_tol * sigma_max`.
    pub fn rank(&self) -> usize {
        numerical_rank(&self.singular_values)
    }

    pub fn reconstruct(&self) -> Matrix<T> {
        let mut us = self.u.clone();
        for j in 0..us.cols() {
            for i in 0..us.rows() {
                us[(i, j)] *= self.singular_values[j];
            }
        }
        &us * &self.v.transpose()
    }
}

pub(crate) fn numerical_rank<T: Scalar>(sv: &[T]) -> usize {
    let smax = sv.iter().fold(T::zero(), |m, &s| m.max(s));
    if smax == T::zero() {
        return 0;
    }
    let cut = T::rank_tol() * smax;
    sv.iter().filter(|&&s| s >= cut).count()
}

/// Result of running Jacobi on the columns of `W`: `W V = C`, with the
/// columns of `C` mutually orthogonal and `V` square orthogonal.
struct Jacobi<T> {
    /// Columns of `W V`, sorted by descending norm.
    cols: Vec<Vec<T>>,
    norms: Vec<T>,
    /// Columns of `V`, same order.
    v: Vec<Vec<T>>,
}

fn jacobi<T: Scalar>(w: &Matrix<T>) -> Result<Jacobi<T>> {
    if !w.is_finite() {
        return Err(Error::NonFinite);
    }
    let (p, q) = w.shape();
    let mut cols: Vec<Vec<T>> = (0..q).map(|j| w.column(j)).collect();
    let mut v: Vec<Vec<T>> = (0..q)
        .map(|j| {
            let mut e = vec![T::zero(); q];
            e[j] = T::one();
            e
        })
        .collect();

    let eps = T::epsilon();
    // rotation threshold on the cosine between two columns
    let ortho_tol = eps * T::lit((p.max(1) as f64).sqrt());
    let fro = w.frobenius_norm();
    // Columns shorter than this are numerically zero and left alone.
    let tiny = (eps * fro) * (eps * fro);

    let mut converged = q < 2 || fro == T::zero();
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::SolverFailure {
                rows: p,
                cols: q,
                sweeps,
            });
        }
        sweeps += 1;
        let mut rotated = false;
        for i in 0..q - 1 {
            for j in i + 1..q {
                let alpha = dot(&cols[i], &cols[i]);
                let beta = dot(&cols[j], &cols[j]);
                if alpha <= tiny || beta <= tiny {
                    continue;
                }
                let gamma = dot(&cols[i], &cols[j]);
                if gamma.abs() <= ortho_tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (gamma + gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                rotate(&mut cols, i, j, c, s);
                rotate(&mut v, i, j, c, s);
            }
        }
        converged = !rotated;
    }

    let norms: Vec<T> = cols.iter().map(|c| norm2(c)).collect();
    let mut order: Vec<usize> = (0..q).collect();
    // Stable: equal norms keep their original column order.
    order.sort_by(|&a, &b| norms[b].partial_cmp(&norms[a]).unwrap());
    Ok(Jacobi {
        cols: order.iter().map(|&k| cols[k].clone()).collect(),
        norms: order.iter().map(|&k| norms[k]).collect(),
        v: order.iter().map(|&k| v[k].clone()).collect(),
    })
}

fn rotate<T: Scalar>(cols: &mut [Vec<T>], i: usize, j: usize, c: T, s: T) {
    let (left, right) = cols.split_at_mut(j);
    let (ci, cj) = (&mut left[i], &mut right[0]);
    for (a, b) in ci.iter_mut().zip(cj.iter_mut()) {
        let (x, y) = (*a, *b);
        *a = c * x - s * y;
        *b = s * x + c * y;
    }
}

/// Flips `v` (and the paired `u`, if any) so its largest-magnitude entry is
/// positive. Ties go to the lowest index.
fn fix_sign<T: Scalar>(v: &mut [T], u: Option<&mut [T]>) {
    let mut best = 0;
    for (k, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = k;
        }
    }
    if v.get(best).is_some_and(|&x| x < T::zero()) {
        v.iter_mut().for_each(|x| *x = -*x);
        if let Some(u) = u {
            u.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// Extends an orthonormal set in `R^n` by `count` further orthonormal
/// vectors, drawn greedily from the standard basis.
pub(crate) fn complete_basis<T: Scalar>(basis: &[Vec<T>], n: usize, count: usize) -> Vec<Vec<T>> {
    let mut all: Vec<Vec<T>> = basis.to_vec();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut best: Option<(T, Vec<T>)> = None;
        for e in 0..n {
            let mut x = vec![T::zero(); n];
            x[e] = T::one();
            // two passes of Gram-Schmidt
            for _ in 0..2 {
                for b in &all {
                    let d = dot(b, &x);
                    x.iter_mut().zip(b).for_each(|(xi, &bi)| *xi -= d * bi);
                }
            }
            let nx = norm2(&x);
            if best.as_ref().is_none_or(|(bn, _)| nx > *bn) {
                best = Some((nx, x));
            }
        }
        let (nx, mut x) = best.expect("n > 0");
        x.iter_mut().for_each(|xi| *xi /= nx);
        all.push(x.clone());
        out.push(x);
    }
    out
}

/// Thin singular value decomposition.
pub fn svd<T: Scalar>(a: &Matrix<T>) -> Result<Svd<T>> {
    let (p, q) = a.shape();
    if p < q {
        let t = svd(&a.transpose())?;
        let mut out = Svd {
            u: t.v,
            singular_values: t.singular_values,
            v: t.u,
        };
        // re-apply the sign rule to the new right vectors
        let k = out.singular_values.len();
        for j in 0..k {
            let mut vj = out.v.column(j);
            let mut uj = out.u.column(j);
            fix_sign(&mut vj, Some(&mut uj));
            out.v.set_column(j, &vj);
            out.u.set_column(j, &uj);
        }
        return Ok(out);
    }

    let jac = jacobi(a)?;
    let k = q;
    let smax = jac.norms.first().copied().unwrap_or(T::zero());
    let cut = smax * T::epsilon() * T::lit(p.max(q) as f64);
    let mut u_cols: Vec<Vec<T>> = Vec::with_capacity(k);
    let mut v_cols: Vec<Vec<T>> = Vec::with_capacity(k);
    let mut missing = 0;
    for j in 0..k {
        let mut vj = jac.v[j].clone();
        if jac.norms[j] > cut && jac.norms[j] > T::zero() {
            let mut uj: Vec<T> = jac.cols[j].iter().map(|&x| x / jac.norms[j]).collect();
            fix_sign(&mut vj, Some(&mut uj));
            u_cols.push(uj);
        } else {
            fix_sign(&mut vj, None);
            missing += 1;
        }
        v_cols.push(vj);
    }
    // Left vectors for (numerically) zero singular values are arbitrary;
    // complete them to an orthonormal set.
    u_cols.extend(complete_basis(&u_cols, p, missing));

    let singular_values = jac
        .norms
        .iter()
        .map(|&s| if s > cut { s } else { T::zero() })
        .collect();
    Ok(Svd {
        u: Matrix::from_columns(p, &u_cols)?,
        singular_values,
        v: Matrix::from_columns(q, &v_cols)?,
    })
}

/// Numerical rank (`sigma_i >= rank_tol * sigma_max`).
pub fn rank<T: Scalar>(a: &Matrix<T>) -> Result<usize> {
    Ok(svd(a)?.rank())
}

/// Orthonormal rows spanning the left null space of `a`.
///
/// For a `p x d` input the result `R` has `p - rank(a)` rows, satisfies
/// `R a = 0` and `R R^T = I`. The basis comes from the right singular
/// vectors of `a^T` whose singular values fall below `rank_tol * sigma_max`.
pub fn nullspace_rows<T: Scalar>(a: &Matrix<T>) -> Result<Matrix<T>> {
    let (p, d) = a.shape();
    let jac = jacobi(&a.transpose())?;
    let smax = jac.norms.first().copied().unwrap_or(T::zero());
    let cut = T::rank_tol() * smax;
    let null: Vec<Vec<T>> = jac
        .norms
        .iter()
        .zip(&jac.v)
        .filter(|(&s, _)| smax == T::zero() || s < cut)
        .map(|(_, v)| {
            let mut v = v.clone();
            fix_sign(&mut v, None);
            v
        })
        .collect();
    if null.is_empty() {
        return Err(Error::EmptyNullspace { rows: p, cols: d });
    }
    let mut r = Matrix::zeros(null.len(), p);
    for (i, v) in null.iter().enumerate() {
        for (j, &x) in v.iter().enumerate() {
            r[(i, j)] = x;
        }
    }
    Ok(r)
}
