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

//! Robust position estimation from a single target's measurements.

use serde::{Deserialize, Serialize};

use crate::error::{shape, Error, Result};
use crate::geometry::{build_system, AnchorSet, TrilaterationSystem};
use crate::linalg::{coherence, least_squares, nullspace_rows, Matrix};
use crate::scalar::Scalar;
use crate::solvers::{basis_pursuit, SolveReport, SolverOptions};

/// Decomposition `m~ = X q + s + c 1` recovered for one target.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RobustEstimate<T> {
    /// Estimated position in the original frame.
    pub position: Vec<T>,
    /// Offset picked up from a corrupted distance to the central anchor.
    pub central_corruption: T,
    /// Sparse outlier vector, one entry per system row.
    pub outlier: Vec<T>,
    pub solver_report: SolveReport,
}

/// Largest number of corrupted rows that the coherence bound
/// `k < (1 + 1/mu) / 2` still guarantees to be recoverable.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutlierBudget {
    pub k_max: usize,
    pub coherence: f64,
}

impl OutlierBudget {
    pub fn from_coherence(mu: f64) -> Self {
        let bound = 0.5 * (1.0 + 1.0 / mu);
        let mut k = bound.ceil() as usize;
        while k as f64 >= bound && k > 0 {
            k -= 1;
        }
        Self {
            k_max: k,
            coherence: mu,
        }
    }
}

/// Orthonormal rows `R` with `R X = 0` and `R 1 = 0`, shaped
/// `(m - r - 2) x (m - 1)`.
pub fn annihilator<T: Scalar>(anchors: &AnchorSet<T>) -> Result<Matrix<T>> {
    let system = build_system(anchors)?;
    system_annihilator(&system)
}

pub(crate) fn system_annihilator<T: Scalar>(system: &TrilaterationSystem<T>) -> Result<Matrix<T>> {
    let m = system.anchor_count();
    let r = system.dim();
    if m <= r + 2 {
        return Err(Error::InsufficientAnchors { m, r });
    }
    // Column scaling leaves the left null space unchanged and keeps the
    // coordinate columns comparable to the ones column.
    let mut aug = system.augmented();
    for (j, nj) in aug.column_norms().into_iter().enumerate() {
        if nj > T::zero() {
            for i in 0..aug.rows() {
                aug[(i, j)] /= nj;
            }
        }
    }
    let rbar = nullspace_rows(&aug)?;
    if rbar.rows() != m - r - 2 {
        return Err(Error::AugmentedRankDeficient);
    }
    Ok(rbar)
}

/// Precomputed system and annihilator for one anchor layout. Cheap to share
/// across threads; every estimate reads it immutably.
#[derive(Clone, Debug)]
pub struct RobustLocalizer<T> {
    system: TrilaterationSystem<T>,
    rbar: Matrix<T>,
    augmented: Matrix<T>,
}

impl<T: Scalar> RobustLocalizer<T> {
    pub fn new(anchors: &AnchorSet<T>) -> Result<Self> {
        let system = build_system(anchors)?;
        let rbar = system_annihilator(&system)?;
        let augmented = system.augmented();
        Ok(Self {
            system,
            rbar,
            augmented,
        })
    }

    pub fn system(&self) -> &TrilaterationSystem<T> {
        &self.system
    }

    pub fn annihilator(&self) -> &Matrix<T> {
        &self.rbar
    }

    pub fn budget(&self) -> Result<OutlierBudget> {
        Ok(OutlierBudget::from_coherence(coherence(&self.rbar)?.as_f64()))
    }

    /// Sparse recovery of the outliers, then a least-squares solve of
    /// `[X 1](q; c) = m~ - s`.
    ///
    /// A non-converged l1 solve still yields an estimate; the report carries
    /// the flag.
    pub fn estimate(&self, m_tilde: &[T], opts: &SolverOptions) -> Result<RobustEstimate<T>> {
        if m_tilde.len() != self.system.x.rows() {
            return Err(shape(format!(
                "measurement vector has length {}, system has {} rows",
                m_tilde.len(),
                self.system.x.rows()
            )));
        }
        if m_tilde.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let y = self.rbar.mul_vec(m_tilde)?;
        let (s, report) = basis_pursuit(&self.rbar, &y, opts)?;
        let rhs: Vec<T> = m_tilde.iter().zip(&s).map(|(&a, &b)| a - b).collect();
        let sol = least_squares(&self.augmented, &rhs).map_err(|e| match e {
            Error::RankDeficient { .. } => Error::AugmentedRankDeficient,
            other => other,
        })?;
        let r = self.system.dim();
        let position = (0..r).map(|d| sol[d] + self.system.origin[d]).collect();
        Ok(RobustEstimate {
            position,
            central_corruption: sol[r],
            outlier: s,
            solver_report: report,
        })
    }
}

/// One-shot form of [`RobustLocalizer::estimate`].
pub fn estimate_position<T: Scalar>(
    anchors: &AnchorSet<T>,
    m_tilde: &[T],
    opts: &SolverOptions,
) -> Result<RobustEstimate<T>> {
    RobustLocalizer::new(anchors)?.estimate(m_tilde, opts)
}

pub fn outlier_budget<T: Scalar>(anchors: &AnchorSet<T>) -> Result<OutlierBudget> {
    let rbar = annihilator(anchors)?;
    Ok(OutlierBudget::from_coherence(coherence(&rbar)?.as_f64()))
}
