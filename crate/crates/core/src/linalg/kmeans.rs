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

//! Seeded k-means (k-means++ seeding followed by Lloyd iterations).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

pub const KMEANS_MAX_ITER: usize = 300;
pub const KMEANS_TOL: f64 = 1e-6;

fn sq_dist<T: Scalar>(points: &Matrix<T>, i: usize, centers: &Matrix<T>, c: usize) -> T {
    (0..points.rows())
        .map(|d| {
            let x = points[(d, i)] - centers[(d, c)];
            x * x
        })
        .sum()
}

fn nearest<T: Scalar>(points: &Matrix<T>, i: usize, centers: &Matrix<T>) -> (usize, T) {
    let mut best = (0, sq_dist(points, i, centers, 0));
    for c in 1..centers.cols() {
        let d = sq_dist(points, i, centers, c);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

/// Clusters the columns of `points` (`dim x n`) into `k` groups and returns
/// the `dim x k` matrix of centers.
///
/// Lloyd iterations stop once no center moves more than `1e-6` or after 300
/// rounds. A cluster that empties is re-seeded at the point currently
/// farthest from its own center (lowest index on ties). Output depends only
/// on `(points, k, seed)`.
pub fn kmeans<T: Scalar>(points: &Matrix<T>, k: usize, seed: u64) -> Result<Matrix<T>> {
    let (dim, n) = points.shape();
    if k == 0 || n < k {
        return Err(domain(format!("k-means with k={k} on {n} points")));
    }
    if !points.is_finite() {
        return Err(Error::NonFinite);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centers = Matrix::zeros(dim, k);

    // k-means++ seeding
    let first = rng.random_range(0..n);
    centers.set_column(0, &points.column(first));
    let mut d2: Vec<T> = (0..n).map(|i| sq_dist(points, i, &centers, 0)).collect();
    for c in 1..k {
        let total: T = d2.iter().copied().sum();
        let pick = if total > T::zero() {
            let target = T::lit(rng.random::<f64>()) * total;
            let mut acc = T::zero();
            let mut pick = n - 1;
            for (i, &w) in d2.iter().enumerate() {
                acc += w;
                if acc > target && w > T::zero() {
                    pick = i;
                    break;
                }
            }
            pick
        } else {
            // every point coincides with a chosen center
            rng.random_range(0..n)
        };
        centers.set_column(c, &points.column(pick));
        for (i, di) in d2.iter_mut().enumerate() {
            *di = di.min(sq_dist(points, i, &centers, c));
        }
    }

    let tol = T::lit(KMEANS_TOL);
    let mut labels = vec![0usize; n];
    for _ in 0..KMEANS_MAX_ITER {
        let mut dist = vec![T::zero(); n];
        for i in 0..n {
            let (c, d) = nearest(points, i, &centers);
            labels[i] = c;
            dist[i] = d;
        }
        let mut sums = Matrix::<T>::zeros(dim, k);
        let mut counts = vec![0usize; k];
        for (i, &c) in labels.iter().enumerate() {
            counts[c] += 1;
            for d in 0..dim {
                sums[(d, c)] += points[(d, i)];
            }
        }
        let mut next = centers.clone();
        for c in 0..k {
            if counts[c] == 0 {
                let mut far = 0;
                for i in 1..n {
                    if dist[i] > dist[far] {
                        far = i;
                    }
                }
                next.set_column(c, &points.column(far));
                dist[far] = T::zero();
            } else {
                let cnt = T::lit(counts[c] as f64);
                for d in 0..dim {
                    next[(d, c)] = sums[(d, c)] / cnt;
                }
            }
        }
        let shift = (0..k)
            .map(|c| {
                (0..dim)
                    .map(|d| (next[(d, c)] - centers[(d, c)]).powi(2))
                    .sum::<T>()
                    .sqrt()
            })
            .fold(T::zero(), T::max);
        centers = next;
        if shift < tol {
            break;
        }
    }
    Ok(centers)
}
