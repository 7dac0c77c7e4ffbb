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

//! Equality-constrained l1 minimization (basis pursuit) by ADMM.
//!
//! ```text
//! minimize ||s||_1  subject to  R s = y
//! ```
//!
//! The columns of `R` are scaled to unit norm first, so the objective is
//! the l1 norm weighted by column length. This is the setting in which
//! mutual coherence governs exact recovery; for `R` with equal column norms
//! it is plain l1.
//!
//! Iterates on the normalized problem `y / ||y||`: a projection onto the
//! affine constraint set, soft thresholding, and a scaled dual update. Once
//! ADMM stops, the solution is polished by re-solving the constraint
//! restricted to the detected support, which removes the residual ADMM
//! error whenever the support is identified correctly.

use crate::error::{shape, Result};
use crate::linalg::{dot, least_squares, norm1, norm2, svd, Matrix};
use crate::scalar::Scalar;
use crate::solvers::{SolveReport, SolverOptions};

/// Entries below this fraction of the largest magnitude are treated as off
/// the support when polishing.
const SUPPORT_REL_TOL: f64 = 1e-6;

/// Constraint rewritten with orthonormal rows: `Q s = b`.
struct OrthoConstraint<T> {
    q: Matrix<T>,
    b: Vec<T>,
}

fn orthonormalize<T: Scalar>(r: &Matrix<T>, y: &[T]) -> Result<OrthoConstraint<T>> {
    let gram = r * &r.transpose();
    let off = gram.sub(&Matrix::identity(r.rows()))?.max_abs();
    if off <= T::lit(1e3) * T::epsilon() {
        return Ok(OrthoConstraint {
            q: r.clone(),
            b: y.to_vec(),
        });
    }
    // R = U S V^T  =>  R s = y  <=>  V_k^T s = S_k^-1 U_k^T y
    let dec = svd(r)?;
    let k = dec.rank();
    let mut q = Matrix::zeros(k, r.cols());
    let mut b = vec![T::zero(); k];
    for i in 0..k {
        let ui = dec.u.column(i);
        b[i] = dot(&ui, y) / dec.singular_values[i];
        for j in 0..r.cols() {
            q[(i, j)] = dec.v[(j, i)];
        }
    }
    Ok(OrthoConstraint { q, b })
}

fn soft<T: Scalar>(x: T, t: T) -> T {
    if x > t {
        x - t
    } else if x < -t {
        x + t
    } else {
        T::zero()
    }
}

/// Solves `min sum_j ||r_j|| |s_j|  s.t.  R s = y`.
///
/// Any full-row-rank `R` is accepted; after column scaling the rows are
/// orthonormalized through an SVD. Non-convergence is reported through
/// [`SolveReport::converged`] rather than as an error.
pub fn basis_pursuit<T: Scalar>(
    r: &Matrix<T>,
    y: &[T],
    opts: &SolverOptions,
) -> Result<(Vec<T>, SolveReport)> {
    opts.validate()?;
    if y.len() != r.rows() {
        return Err(shape(format!(
            "constraint matrix is {}x{} but right-hand side has length {}",
            r.rows(),
            r.cols(),
            y.len()
        )));
    }
    let n = r.cols();
    let scale = norm2(y);
    if scale == T::zero() {
        return Ok((
            vec![T::zero(); n],
            SolveReport {
                converged: true,
                ..Default::default()
            },
        ));
    }
    let yn: Vec<T> = y.iter().map(|&v| v / scale).collect();
    // Zero columns keep weight 1; they never enter a minimizer.
    let weights: Vec<T> = r
        .column_norms()
        .into_iter()
        .map(|w| if w > T::zero() { w } else { T::one() })
        .collect();
    let mut rw = r.clone();
    for i in 0..rw.rows() {
        for j in 0..n {
            rw[(i, j)] /= weights[j];
        }
    }
    let OrthoConstraint { q, b } = orthonormalize(&rw, &yn)?;

    let rho = opts.rho_as::<T>();
    let tol = opts.tol_as::<T>();
    let thresh = T::one() / rho;

    // Projection onto {s : Q s = b}:  v - Q^T (Q v - b)
    let project = |v: &[T]| -> Vec<T> {
        let mut resid = q.mul_vec(v).expect("shape checked");
        resid.iter_mut().zip(&b).for_each(|(ri, &bi)| *ri -= bi);
        let corr = q.tr_mul_vec(&resid).expect("shape checked");
        v.iter().zip(&corr).map(|(&a, &c)| a - c).collect()
    };

    // Least-norm feasible point as the starting iterate.
    let mut z = q.tr_mul_vec(&b)?;
    let mut u = vec![T::zero(); n];
    let mut x;
    let mut report = SolveReport::default();
    for it in 1..=opts.max_iter {
        let v: Vec<T> = z.iter().zip(&u).map(|(&a, &b)| a - b).collect();
        x = project(&v);
        let z_prev = std::mem::take(&mut z);
        z = x
            .iter()
            .zip(&u)
            .map(|(&xi, &ui)| soft(xi + ui, thresh))
            .collect();
        let mut primal = T::zero();
        let mut dual = T::zero();
        for i in 0..n {
            let r_i = x[i] - z[i];
            u[i] += r_i;
            primal += r_i * r_i;
            let d = z[i] - z_prev[i];
            dual += d * d;
        }
        let primal = primal.sqrt();
        let dual = rho * dual.sqrt();
        report = SolveReport {
            iterations: it,
            primal_residual: primal.as_f64(),
            dual_residual: dual.as_f64(),
            converged: primal <= tol && dual <= tol,
        };
        if report.converged {
            break;
        }
    }

    let t = polish(&q, &b, z);
    Ok((
        t.iter().zip(&weights).map(|(&v, &w)| v * scale / w).collect(),
        report,
    ))
}

/// Re-solves `Q s = b` on the support of `z`. Keeps the polished point only
/// if it is feasible and does not increase the l1 norm.
fn polish<T: Scalar>(q: &Matrix<T>, b: &[T], z: Vec<T>) -> Vec<T> {
    let zmax = z.iter().fold(T::zero(), |m, &v| m.max(v.abs()));
    if zmax == T::zero() {
        return z;
    }
    let cut = T::lit(SUPPORT_REL_TOL) * zmax;
    let support: Vec<usize> = (0..z.len()).filter(|&i| z[i].abs() > cut).collect();
    if support.is_empty() || support.len() > q.rows() {
        return z;
    }
    let sub = q.select_columns(&support);
    let Ok(coef) = least_squares(&sub, b) else {
        return z;
    };
    let mut cand = vec![T::zero(); z.len()];
    for (&i, &c) in support.iter().zip(&coef) {
        cand[i] = c;
    }
    let resid: Vec<T> = q
        .mul_vec(&cand)
        .expect("shape checked")
        .iter()
        .zip(b)
        .map(|(&a, &c)| a - c)
        .collect();
    let feasible = norm2(&resid) <= T::lit(1e3) * T::epsilon() * (T::one() + norm2(b));
    let no_worse = norm1(&cand) <= norm1(&z) * (T::one() + T::lit(1e-6));
    if feasible && no_worse {
        cand
    } else {
        z
    }
}
