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

//! Small dense linear-algebra kernel: SVD, QR least squares, null spaces,
//! mutual coherence and k-means.

mod coherence;
mod kmeans;
mod matrix;
mod qr;
mod svd;

pub use coherence::{coherence, welch_bound};
pub use kmeans::{kmeans, KMEANS_MAX_ITER, KMEANS_TOL};
pub use matrix::Matrix;
pub use qr::{least_squares, qr, Qr};
pub use svd::{nullspace_rows, rank, svd, Svd};


use crate::scalar::Scalar;

#[inline]
pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(T::zero(), |s, (&x, &y)| s + x * y)
}

#[inline]
pub fn norm2<T: Scalar>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

#[inline]
pub fn norm1<T: Scalar>(a: &[T]) -> T {
    a.iter().fold(T::zero(), |s, &x| s + x.abs())
}

/// `a - b`, elementwise.
pub fn sub<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}
