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

use crate::error::{shape, Error, Result};
use crate::linalg::{svd, Matrix};
use crate::scalar::Scalar;

/// Thin Householder QR `A = Q R` of a `p x d` matrix with `p >= d`.
///
/// `Q` is `p x d` with orthonormal columns and `R` is `d x d` upper
/// triangular with a non-negative diagonal.
#[derive(Clone, Debug)]
pub struct Qr<T> {
    pub q: Matrix<T>,
    pub r: Matrix<T>,
}

pub fn qr<T: Scalar>(a: &Matrix<T>) -> Result<Qr<T>> {
    let (p, d) = a.shape();
    if p < d {
        return Err(shape(format!("QR needs rows >= cols, got {p}x{d}")));
    }
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let mut work = a.clone();
    let mut reflectors: Vec<Vec<T>> = Vec::with_capacity(d);
    for k in 0..d {
        let x: Vec<T> = (k..p).map(|i| work[(i, k)]).collect();
        let nx = super::norm2(&x);
        let mut v = x;
        if nx > T::zero() {
            let alpha = if v[0] >= T::zero() { -nx } else { nx };
            v[0] -= alpha;
            let nv = super::norm2(&v);
            v.iter_mut().for_each(|vi| *vi /= nv);
            for j in k..d {
                let s: T = (k..p).map(|i| v[i - k] * work[(i, j)]).sum();
                for i in k..p {
                    work[(i, j)] -= (s + s) * v[i - k];
                }
            }
        } else {
            v.iter_mut().for_each(|vi| *vi = T::zero());
        }
        reflectors.push(v);
    }

    // Accumulate Q = H_0 H_1 ... H_{d-1} applied to the first d columns of I.
    let mut q = Matrix::from_fn(p, d, |i, j| if i == j { T::one() } else { T::zero() });
    for k in (0..d).rev() {
        let v = &reflectors[k];
        for j in 0..d {
            let s: T = (k..p).map(|i| v[i - k] * q[(i, j)]).sum();
            for i in k..p {
                q[(i, j)] -= (s + s) * v[i - k];
            }
        }
    }
    let mut r = Matrix::from_fn(d, d, |i, j| if j >= i { work[(i, j)] } else { T::zero() });
    for i in 0..d {
        if r[(i, i)] < T::zero() {
            for j in 0..d {
                r[(i, j)] = -r[(i, j)];
            }
            for row in 0..p {
                q[(row, i)] = -q[(row, i)];
            }
        }
    }
    Ok(Qr { q, r })
}

/// Smallest-to-largest singular value ratio below which a least-squares
/// system is rejected as rank deficient.
fn ls_rank_tol<T: Scalar>() -> T {
    T::lit(1e-12).max(T::lit(10.0) * T::epsilon())
}

/// `argmin_x ||A x - b||` for a full-column-rank `A`, solved through QR.
pub fn least_squares<T: Scalar>(a: &Matrix<T>, b: &[T]) -> Result<Vec<T>> {
    let (p, d) = a.shape();
    if b.len() != p {
        return Err(shape(format!(
            "right-hand side of length {} for a {p}x{d} system",
            b.len()
        )));
    }
    if p < d || d == 0 {
        return Err(shape(format!("least squares needs rows >= cols >= 1, got {p}x{d}")));
    }
    if b.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let sv = svd(a)?.singular_values;
    let smax = sv[0];
    let smin = sv[sv.len() - 1];
    if smax == T::zero() || smin < ls_rank_tol::<T>() * smax {
        let ratio = if smax == T::zero() { 0.0 } else { (smin / smax).as_f64() };
        return Err(Error::RankDeficient { ratio });
    }
    let Qr { q, r } = qr(a)?;
    let qtb = q.tr_mul_vec(b)?;
    Ok(back_substitute(&r, &qtb))
}

fn back_substitute<T: Scalar>(r: &Matrix<T>, y: &[T]) -> Vec<T> {
    let d = r.cols();
    let mut x = vec![T::zero(); d];
    for i in (0..d).rev() {
        let mut s = y[i];
        for j in i + 1..d {
            s -= r[(i, j)] * x[j];
        }
        x[i] = s / r[(i, i)];
    }
    x
}
