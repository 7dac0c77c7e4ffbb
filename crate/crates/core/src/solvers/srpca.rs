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

//! Low-rank plus column-sparse decomposition by ADMM.
//!
//! ```text
//! minimize ||F||_* + w ||S||_{1,2}  subject to  F + S = D,   w = LAMBDA_UNIT * lambda
//! ```
//!
//! The column-sparsity weight `w` never needs to exceed 1: `S = 0` is
//! optimal for every `w >= 1`, whatever `D` is. The user-facing `lambda` is
//! therefore measured in units of [`LAMBDA_UNIT`], which keeps a grid such
//! as `{1, 2, 5, 10, 20}` from being almost entirely degenerate.
//!
//! The iteration works on `D / ||D||_F` and rescales the result, so the
//! penalty and tolerance do not depend on the units of the input.

use crate::error::{domain, Result};
use crate::linalg::{svd, Matrix};
use crate::scalar::Scalar;
use crate::solvers::{SolveReport, SolverOptions};

/// Weight on `||S||_{1,2}` per unit of `lambda`.
pub const LAMBDA_UNIT: f64 = 0.3;

/// Result of [`srpca`]: `input ~ low_rank + sparse`.
#[derive(Clone, Debug)]
pub struct Decomposition<T> {
    pub low_rank: Matrix<T>,
    pub sparse: Matrix<T>,
    pub report: SolveReport,
}

/// Singular value thresholding: shrinks every singular value by `t`.
///
/// Works on the Gram matrix of the shorter side. With `A A^T = U L U^T`,
/// the result is `P A` where `P = sum (1 - t / sigma_k) u_k u_k^T` over the
/// singular values above `t`.
fn svt<T: Scalar>(a: &Matrix<T>, t: T) -> Result<Matrix<T>> {
    let wide = a.rows() <= a.cols();
    let at = a.transpose();
    let gram = if wide { a * &at } else { &at * a };
    let dec = svd(&gram)?;
    let k = gram.rows();
    let mut proj = Matrix::zeros(k, k);
    for (c, &ev) in dec.singular_values.iter().enumerate() {
        let sigma = ev.sqrt();
        if sigma <= t {
            break;
        }
        let w = T::one() - t / sigma;
        for i in 0..k {
            let ui = dec.u[(i, c)] * w;
            for j in 0..k {
                proj[(i, j)] += ui * dec.u[(j, c)];
            }
        }
    }
    Ok(if wide { &proj * a } else { a * &proj })
}

/// Largest column norm of `U V^T` over the nonzero singular triplets. For
/// any `lambda` at or above it, `S = 0` is optimal.
fn zero_split_threshold<T: Scalar>(d: &Matrix<T>) -> Result<T> {
    let dec = svd(d)?;
    let k = dec.rank();
    Ok((0..d.cols())
        .map(|j| (0..k).map(|c| dec.v[(j, c)].powi(2)).sum::<T>().sqrt())
        .fold(T::zero(), |m, v| m.max(v)))
}

/// Column shrinkage, the proximal map of `t ||.||_{1,2}`.
fn column_shrink<T: Scalar>(a: &Matrix<T>, t: T) -> Matrix<T> {
    let norms = a.column_norms();
    let mut out = a.clone();
    for (j, &nj) in norms.iter().enumerate() {
        let f = if nj > t { T::one() - t / nj } else { T::zero() };
        for i in 0..a.rows() {
            out[(i, j)] *= f;
        }
    }
    out
}

/// Decomposes `d` into low-rank and column-sparse parts.
///
/// Reaching `max_iter` is not an error; check `report.converged`.
pub fn srpca<T: Scalar>(d: &Matrix<T>, lambda: T, opts: &SolverOptions) -> Result<Decomposition<T>> {
    srpca_traced(d, lambda, opts, |_, _| {})
}

/// Same as [`srpca`], calling `trace(iteration, ||F + S - D||_F)` after
/// every iteration. The residual is reported in the units of `d`.
pub fn srpca_traced<T, C>(
    d: &Matrix<T>,
    lambda: T,
    opts: &SolverOptions,
    mut trace: C,
) -> Result<Decomposition<T>>
where
    T: Scalar,
    C: FnMut(usize, f64),
{
    opts.validate()?;
    if !(lambda > T::zero() && lambda.is_finite()) {
        return Err(domain(format!("lambda must be positive, got {lambda}")));
    }
    if !d.is_finite() {
        return Err(crate::Error::NonFinite);
    }
    let (p, q) = d.shape();
    let scale = d.frobenius_norm();
    if scale == T::zero() || p == 0 || q == 0 {
        return Ok(Decomposition {
            low_rank: Matrix::zeros(p, q),
            sparse: Matrix::zeros(p, q),
            report: SolveReport {
                converged: true,
                ..Default::default()
            },
        });
    }
    let dn = d.scale(T::one() / scale);
    let weight = lambda * T::lit(LAMBDA_UNIT);
    if weight >= zero_split_threshold(&dn)? {
        // U V^T is a dual certificate for (F, S) = (D, 0).
        return Ok(Decomposition {
            low_rank: d.clone(),
            sparse: Matrix::zeros(p, q),
            report: SolveReport {
                converged: true,
                ..Default::default()
            },
        });
    }
    let rho = opts.rho_as::<T>();
    let tol = opts.tol_as::<T>();
    let inv = T::one() / rho;

    let mut f = Matrix::zeros(p, q);
    let mut s = Matrix::zeros(p, q);
    let mut y = Matrix::<T>::zeros(p, q);
    let mut report = SolveReport::default();
    for it in 1..=opts.max_iter {
        // F-step
        let mut work = dn.clone();
        for ((w, &si), &yi) in work.data.iter_mut().zip(&s.data).zip(&y.data) {
            *w += yi * inv - si;
        }
        f = svt(&work, inv)?;
        // S-step
        let mut work = dn.clone();
        for ((w, &fi), &yi) in work.data.iter_mut().zip(&f.data).zip(&y.data) {
            *w += yi * inv - fi;
        }
        let s_new = column_shrink(&work, weight * inv);
        // dual step
        let mut primal = T::zero();
        let mut dual = T::zero();
        for k in 0..dn.data.len() {
            let r = dn.data[k] - f.data[k] - s_new.data[k];
            y.data[k] += rho * r;
            primal += r * r;
            let ds = s_new.data[k] - s.data[k];
            dual += ds * ds;
        }
        s = s_new;
        let primal = primal.sqrt();
        let dual = rho * dual.sqrt();
        trace(it, (primal * scale).as_f64());
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
    if !report.converged {
        log::debug!(
            "srpca stopped after {} iterations (primal {:.3e}, dual {:.3e})",
            report.iterations,
            report.primal_residual,
            report.dual_residual
        );
    }
    Ok(Decomposition {
        low_rank: f.scale(scale),
        sparse: s.scale(scale),
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svt_matches_direct_shrinkage() {
        for (p, q) in [(4, 9), (9, 4)] {
            let a = Matrix::from_fn(p, q, |i, j| ((i * 7 + j * 3) as f64 * 0.41).cos());
            let dec = svd(&a).unwrap();
            let t = dec.singular_values[1] * 0.7;
            let mut want = Matrix::zeros(p, q);
            for (c, &s) in dec.singular_values.iter().enumerate() {
                for i in 0..p {
                    for j in 0..q {
                        want[(i, j)] += (s - t).max(0.0) * dec.u[(i, c)] * dec.v[(j, c)];
                    }
                }
            }
            assert!(svt(&a, t).unwrap().sub(&want).unwrap().max_abs() < 1e-10);
        }
    }

    #[test]
    fn svt_zero_threshold_is_identity() {
        let a = Matrix::from_fn(4, 6, |i, j| ((i * 5 + j) as f64 * 0.7).sin());
        let b = svt(&a, 0.0).unwrap();
        assert!(b.sub(&a).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn column_shrink_kills_small_columns() {
        let a: Matrix<f64> = Matrix::from_rows(&[&[3.0, 0.1], &[4.0, 0.0]]);
        let b = column_shrink(&a, 1.0);
        assert!((b[(0, 0)] - 2.4).abs() < 1e-15 && (b[(1, 0)] - 3.2).abs() < 1e-15);
        assert_eq!(b.column(1), vec![0.0, 0.0]);
    }

    #[test]
    fn rejects_bad_lambda() {
        let a = Matrix::<f64>::identity(3);
        assert!(srpca(&a, 0.0, &SolverOptions::srpca()).is_err());
        assert!(srpca(&a, f64::NAN, &SolverOptions::srpca()).is_err());
    }
}
