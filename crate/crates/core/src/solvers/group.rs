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

//! Column-sparse recovery under `R S = R M`.
//!
//! Minimizing the sum of column norms subject to `R S = R M` separates by
//! column, and each column's minimizer is the minimum-norm solution of
//! `R s = R m`. With orthonormal rows that is `s = R^T (R m)`, and
//! `||s|| = ||R m||`.

use crate::error::{shape, Result};
use crate::linalg::{svd, Matrix};
use crate::scalar::Scalar;

pub fn group_min_norm<T: Scalar>(r: &Matrix<T>, m: &Matrix<T>) -> Result<Matrix<T>> {
    if r.cols() != m.rows() {
        return Err(shape(format!(
            "R is {}x{} but the measurement matrix has {} rows",
            r.rows(),
            r.cols(),
            m.rows()
        )));
    }
    let gram = r * &r.transpose();
    let orthonormal = gram.sub(&Matrix::identity(r.rows()))?.max_abs() <= T::lit(1e3) * T::epsilon();
    let basis = if orthonormal {
        r.clone()
    } else {
        // minimum-norm solution projects onto the row space of R
        let dec = svd(r)?;
        let k = dec.rank();
        Matrix::from_fn(k, r.cols(), |i, j| dec.v[(j, i)])
    };
    let projected = &basis * m;
    Ok(&basis.transpose() * &projected)
}
