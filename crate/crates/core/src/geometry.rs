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

//! Trilateration: the linear system obtained by subtracting the central
//! anchor's range equation from every other anchor's.
//!
//! With the central anchor `x_c` moved to the origin, every other anchor
//! `x_i` contributes one row
//!
//! ```text
//! (x_i - x_c)^T q = 1/2 (d_c^2 - d_i^2 + ||x_i - x_c||^2)
//! ```
//!
//! so `X q = m` with `X` of shape `(m-1) x r`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, shape, Error, Result};
use crate::linalg::{least_squares, svd, Matrix};
use crate::scalar::Scalar;

/// Known anchor positions, one per column, with a designated central anchor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnchorSet<T> {
    positions: Matrix<T>,
    central_index: usize,
}

impl<T: Scalar> AnchorSet<T> {
    /// `positions` is `r x m` with `r` in `{2, 3}` and `m >= r + 1`.
    pub fn new(positions: Matrix<T>, central_index: usize) -> Result<Self> {
        let (r, m) = positions.shape();
        if !(r == 2 || r == 3) {
            return Err(domain(format!("anchor dimension must be 2 or 3, got {r}")));
        }
        if m < r + 1 {
            return Err(domain(format!(
                "{m} anchors cannot localize in dimension {r}; need at least {}",
                r + 1
            )));
        }
        if central_index >= m {
            return Err(domain(format!(
                "central index {central_index} out of range for {m} anchors"
            )));
        }
        if !positions.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            positions,
            central_index,
        })
    }

    /// Uses the last anchor as the central one.
    pub fn with_last_central(positions: Matrix<T>) -> Result<Self> {
        let m = positions.cols();
        Self::new(positions, m.saturating_sub(1))
    }

    pub fn positions(&self) -> &Matrix<T> {
        &self.positions
    }

    pub fn central_index(&self) -> usize {
        self.central_index
    }

    pub fn dim(&self) -> usize {
        self.positions.rows()
    }

    pub fn len(&self) -> usize {
        self.positions.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn anchor(&self, j: usize) -> Vec<T> {
        self.positions.column(j)
    }

    pub fn central(&self) -> Vec<T> {
        self.anchor(self.central_index)
    }

    /// Indices of the non-central anchors, in system-row order.
    pub fn row_anchors(&self) -> Vec<usize> {
        (0..self.len()).filter(|&j| j != self.central_index).collect()
    }

    /// Squared distances from `q` to every anchor.
    pub fn squared_distances_to(&self, q: &[T]) -> Vec<T> {
        (0..self.len())
            .map(|j| {
                (0..self.dim())
                    .map(|d| (q[d] - self.positions[(d, j)]).powi(2))
                    .sum()
            })
            .collect()
    }
}

/// `X q = m` with the central anchor eliminated and moved to the origin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrilaterationSystem<T> {
    /// `(m-1) x r`; row `i` is `(x_i - x_c)^T`.
    pub x: Matrix<T>,
    /// `||x_i - x_c||^2` per row.
    pub rhs_offsets: Vec<T>,
    pub central_index: usize,
    /// Position of the central anchor; added back to every solution.
    pub origin: Vec<T>,
    /// Anchor index behind each row of `x`.
    pub row_anchors: Vec<usize>,
}

impl<T: Scalar> TrilaterationSystem<T> {
    pub fn dim(&self) -> usize {
        self.x.cols()
    }

    pub fn anchor_count(&self) -> usize {
        self.x.rows() + 1
    }

    /// `[X 1]`
    pub fn augmented(&self) -> Matrix<T> {
        let ones = Matrix::from_fn(self.x.rows(), 1, |_, _| T::one());
        self.x.hstack(&ones).expect("row counts agree")
    }
}

/// Builds the trilateration system for an anchor set.
///
/// Fails with [`Error::DegenerateConfiguration`] when the anchors are
/// affinely dependent (`rank(X) < r`).
pub fn build_system<T: Scalar>(anchors: &AnchorSet<T>) -> Result<TrilaterationSystem<T>> {
    let r = anchors.dim();
    let origin = anchors.central();
    let row_anchors = anchors.row_anchors();
    let x = Matrix::from_fn(row_anchors.len(), r, |i, d| {
        anchors.positions()[(d, row_anchors[i])] - origin[d]
    });
    if svd(&x)?.rank() < r {
        return Err(Error::DegenerateConfiguration { dim: r });
    }
    let rhs_offsets = (0..x.rows())
        .map(|i| x.row(i).iter().map(|&v| v * v).sum())
        .collect();
    Ok(TrilaterationSystem {
        x,
        rhs_offsets,
        central_index: anchors.central_index(),
        origin,
        row_anchors,
    })
}

/// Right-hand side `m_i = 1/2 (d_c^2 - d_i^2 + ||x_i - x_c||^2)` from the
/// squared distances to all `m` anchors (in anchor order).
pub fn assemble_rhs<T: Scalar>(system: &TrilaterationSystem<T>, squared_dists: &[T]) -> Result<Vec<T>> {
    let m = system.anchor_count();
    if squared_dists.len() != m {
        return Err(shape(format!(
            "{} squared distances for {m} anchors",
            squared_dists.len()
        )));
    }
    if let Some(bad) = squared_dists.iter().find(|d| !d.is_finite() || **d < T::zero()) {
        return Err(domain(format!("squared distance must be finite and >= 0, got {bad}")));
    }
    let half = T::lit(0.5);
    let dc = squared_dists[system.central_index];
    Ok(system
        .row_anchors
        .iter()
        .zip(&system.rhs_offsets)
        .map(|(&j, &off)| half * (dc - squared_dists[j] + off))
        .collect())
}

/// Stacks [`assemble_rhs`] over the columns of an `m x n` squared-distance
/// matrix, giving the `(m-1) x n` measurement matrix.
pub fn assemble_rhs_matrix<T: Scalar>(
    system: &TrilaterationSystem<T>,
    squared: &Matrix<T>,
) -> Result<Matrix<T>> {
    let cols = (0..squared.cols())
        .map(|i| assemble_rhs(system, &squared.column(i)))
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_columns(system.x.rows(), &cols)
}

/// Position from exact distances: least-squares solve of `X q = m`,
/// translated back to the original frame.
pub fn exact_trilateration<T: Scalar>(
    system: &TrilaterationSystem<T>,
    squared_dists: &[T],
) -> Result<Vec<T>> {
    let rhs = assemble_rhs(system, squared_dists)?;
    let q = least_squares(&system.x, &rhs).map_err(|e| match e {
        Error::RankDeficient { .. } => Error::DegenerateConfiguration { dim: system.dim() },
        other => other,
    })?;
    Ok(q.iter().zip(&system.origin).map(|(&a, &b)| a + b).collect())
}

/// `F[j, i] = ||t_i - a_j||^2` for anchors `a_j` and target columns `t_i`.
pub fn squared_distance_matrix<T: Scalar>(anchors: &AnchorSet<T>, targets: &Matrix<T>) -> Result<Matrix<T>> {
    if targets.rows() != anchors.dim() {
        return Err(shape(format!(
            "targets live in R^{}, anchors in R^{}",
            targets.rows(),
            anchors.dim()
        )));
    }
    let a = anchors.positions();
    Ok(Matrix::from_fn(anchors.len(), targets.cols(), |j, i| {
        (0..a.rows()).map(|d| (targets[(d, i)] - a[(d, j)]).powi(2)).sum()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> AnchorSet<f64> {
        let p = Matrix::from_rows(&[&[1.0, 0.0, 1.0, 0.0], &[0.0, 1.0, 1.0, 0.0]]);
        AnchorSet::with_last_central(p).unwrap()
    }

    #[test]
    fn square_configuration_system() {
        let sys = build_system(&square()).unwrap();
        assert_eq!(sys.x, Matrix::from_rows(&[&[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0]]));
        assert_eq!(sys.rhs_offsets, vec![1.0, 1.0, 2.0]);
        assert_eq!(sys.x.rows(), 3);
        assert_eq!(sys.row_anchors, vec![0, 1, 2]);
    }

    #[test]
    fn collinear_anchors_are_degenerate() {
        let p = Matrix::from_rows(&[&[0.0, 1.0, 2.0], &[0.0, 1.0, 2.0]]);
        let a = AnchorSet::new(p, 1).unwrap();
        assert!(matches!(
            build_system(&a),
            Err(Error::DegenerateConfiguration { dim: 2 })
        ));
    }

    #[test]
    fn target_at_central_anchor_gives_zero_rhs() {
        let a = square();
        let sys = build_system(&a).unwrap();
        let d = a.squared_distances_to(&[0.0, 0.0]);
        assert_eq!(assemble_rhs(&sys, &d).unwrap(), vec![0.0, 0.0, 0.0]);
        assert_eq!(exact_trilateration(&sys, &d).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn square_round_trip() {
        let a = square();
        let sys = build_system(&a).unwrap();
        let d = a.squared_distances_to(&[1.0, 1.0]);
        assert_eq!(d, vec![1.0, 1.0, 0.0, 2.0]);
        let q = exact_trilateration(&sys, &d).unwrap();
        assert!((q[0] - 1.0).abs() < 1e-12 && (q[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn negative_distance_rejected() {
        let a = square();
        let sys = build_system(&a).unwrap();
        assert!(matches!(
            assemble_rhs(&sys, &[1.0, -1.0, 0.0, 2.0]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(assemble_rhs(&sys, &[1.0, 0.0]), Err(Error::Shape(_))));
    }

    #[test]
    fn minimal_anchor_sets() {
        let p = Matrix::from_rows(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]);
        let a = AnchorSet::new(p, 0).unwrap();
        let sys = build_system(&a).unwrap();
        let truth = [0.25f64, 0.75];
        let q = exact_trilateration(&sys, &a.squared_distances_to(&truth)).unwrap();
        assert!((q[0] - 0.25).abs() < 1e-12 && (q[1] - 0.75).abs() < 1e-12);

        let p = Matrix::from_rows(&[&[0.0, 2.0, 0.0, 0.5], &[0.0, 0.0, 3.0, 1.0], &[1.0, 0.0, 0.0, 4.0]]);
        let a = AnchorSet::with_last_central(p).unwrap();
        let sys = build_system(&a).unwrap();
        let truth = [-7.0f64, 3.5, 11.0];
        let q = exact_trilateration(&sys, &a.squared_distances_to(&truth)).unwrap();
        for (x, y) in q.iter().zip(truth) {
            assert!((x - y).abs() < 1e-8 * 13.0);
        }
    }

    #[test]
    fn target_on_a_non_central_anchor() {
        let a = square();
        let sys = build_system(&a).unwrap();
        let q = exact_trilateration(&sys, &a.squared_distances_to(&[0.0, 1.0])).unwrap();
        assert!(q[0].abs() < 1e-12 && (q[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn distance_matrix() {
        let a = AnchorSet::new(
            Matrix::from_rows(&[&[0.0, 10.0, 0.0], &[0.0, 0.0, 10.0]]),
            0,
        )
        .unwrap();
        let t = Matrix::from_rows(&[&[3.0], &[4.0]]);
        let f = squared_distance_matrix(&a, &t).unwrap();
        assert_eq!(f[(0, 0)], 25.0);
        let f = squared_distance_matrix(&a, a.positions()).unwrap();
        for j in 0..3 {
            assert_eq!(f[(j, j)], 0.0);
        }
        assert!(squared_distance_matrix(&a, &Matrix::zeros(3, 1)).is_err());
    }

    #[test]
    fn anchor_set_validation() {
        assert!(AnchorSet::<f64>::new(Matrix::zeros(4, 6), 0).is_err());
        assert!(AnchorSet::<f64>::new(Matrix::zeros(2, 2), 0).is_err());
        assert!(AnchorSet::<f64>::new(Matrix::zeros(2, 4), 4).is_err());
    }
}
