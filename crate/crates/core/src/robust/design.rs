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

//! Anchor layouts with a low-coherence annihilator.
//!
//! The rows of `R` span a subspace of `1^⊥`; any orthonormal basis of that
//! subspace gives the same Frobenius objective, so the choice of basis is
//! what decides the coherence. We use the real Fourier basis of `1^⊥`,
//! keep the highest frequencies for `R`, and leave the lowest frequencies
//! to the anchors, which puts them on a circle (or a Lissajous curve in
//! 3-D) around the central anchor.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::geometry::AnchorSet;
use crate::linalg::{qr, Matrix};
use crate::scalar::Scalar;

/// Half-width of the square the designed anchors are scaled into.
pub const DESIGN_EXTENT: f64 = 400.0;

/// Orthonormal basis of `1^⊥` in `R^n`, highest frequency first. Columns
/// of the returned `n x (n-1)` matrix.
pub fn harmonic_basis<T: Scalar>(n: usize) -> Matrix<T> {
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n.saturating_sub(1));
    let nf = n as f64;
    if n.is_multiple_of(2) && n > 0 {
        cols.push((0..n).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 } / nf.sqrt()).collect());
    }
    let amp = (2.0 / nf).sqrt();
    for k in (1..=(n.saturating_sub(1)) / 2).rev() {
        let w = 2.0 * PI * k as f64 / nf;
        cols.push((0..n).map(|i| amp * (w * i as f64).cos()).collect());
        cols.push((0..n).map(|i| amp * (w * i as f64).sin()).collect());
    }
    Matrix::from_fn(n, cols.len(), |i, j| T::lit(cols[j][i]))
}

/// Low-coherence annihilator and matching anchor coordinates.
///
/// Returns `(R, X)` with `R` of shape `(m-r-2) x (m-1)` and `X` of shape
/// `(m-1) x r`: `R 1 = 0`, `R X = 0`, `R R^T = I`. `X` holds the
/// non-central anchors relative to the central one, scaled so that the
/// largest coordinate magnitude is [`DESIGN_EXTENT`]. The seed only rotates
/// the rows of `R`.
pub fn design_low_coherence<T: Scalar>(m: usize, r: usize, seed: u64) -> Result<(Matrix<T>, Matrix<T>)> {
    if m <= r + 2 {
        return Err(Error::InsufficientAnchors { m, r });
    }
    let n = m - 1;
    let p = m - r - 2;
    let basis: Matrix<T> = harmonic_basis(n);
    let v = basis.select_columns(&(0..p).collect::<Vec<_>>());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = Matrix::from_fn(p, p, |_, _| {
        let x: f64 = StandardNormal.sample(&mut rng);
        T::lit(x)
    });
    let u = qr(&g)?.q;
    let rbar = u.matmul(&v.transpose())?;

    let x = basis.select_columns(&(p..n - 1).collect::<Vec<_>>());
    let scale = T::lit(DESIGN_EXTENT) / x.max_abs();
    Ok((rbar, x.scale(scale)))
}

/// Anchor set for designed coordinates: the rows of `x` become anchors
/// `0..m-1` and the central anchor sits at the origin as the last anchor.
pub fn designed_anchor_set<T: Scalar>(x: &Matrix<T>) -> Result<AnchorSet<T>> {
    let (n, r) = x.shape();
    let pos = Matrix::from_fn(r, n + 1, |d, j| if j < n { x[(j, d)] } else { T::zero() });
    AnchorSet::with_last_central(pos)
}
