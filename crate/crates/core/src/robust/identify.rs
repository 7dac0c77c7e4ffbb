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

//! Identification of heavily corrupted targets: the annihilator-based
//! method and the two baselines.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::geometry::{assemble_rhs_matrix, build_system, AnchorSet};
use crate::linalg::Matrix;
use crate::robust::estimate::system_annihilator;
use crate::scalar::Scalar;
use crate::solvers::{group_min_norm, srpca, SolveReport, SolverOptions};

/// Selected node indices, most suspicious first, with the per-node scores
/// they were ranked by.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentificationResult<T> {
    pub indices: Vec<usize>,
    pub column_norms: Vec<T>,
}

/// Default regularization grid for [`srpca_identify`].
pub const SRPCA_LAMBDAS: [f64; 5] = [1.0, 2.0, 5.0, 10.0, 20.0];

/// Indices of the `alpha` largest scores; ties go to the lower index.
pub fn top_alpha<T: Scalar>(scores: &[T], alpha: usize) -> Result<Vec<usize>> {
    if alpha > scores.len() {
        return Err(domain(format!(
            "cannot select {alpha} of {} nodes",
            scores.len()
        )));
    }
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| {
        scores[b]
            .partial_cmp(&scores[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    idx.truncate(alpha);
    Ok(idx)
}

/// Ranks targets by the column norms of the minimum-l1,2 outlier matrix
/// `S = R^T R M~` and returns the `alpha` largest.
///
/// `m_tilde` holds one assembled measurement column per target.
pub fn identify_corrupted<T: Scalar>(
    anchors: &AnchorSet<T>,
    m_tilde: &Matrix<T>,
    alpha: usize,
) -> Result<IdentificationResult<T>> {
    let system = build_system(anchors)?;
    let rbar = system_annihilator(&system)?;
    identify_with(&rbar, m_tilde, alpha)
}

/// Same as [`identify_corrupted`], starting from squared distances
/// (`m x n`, anchors by targets).
pub fn identify_from_distances<T: Scalar>(
    anchors: &AnchorSet<T>,
    f_tilde: &Matrix<T>,
    alpha: usize,
) -> Result<IdentificationResult<T>> {
    let system = build_system(anchors)?;
    let rbar = system_annihilator(&system)?;
    let m_tilde = assemble_rhs_matrix(&system, f_tilde)?;
    identify_with(&rbar, &m_tilde, alpha)
}

/// Identification against a precomputed annihilator.
pub fn identify_with<T: Scalar>(
    rbar: &Matrix<T>,
    m_tilde: &Matrix<T>,
    alpha: usize,
) -> Result<IdentificationResult<T>> {
    if alpha > m_tilde.cols() {
        return Err(domain(format!(
            "cannot select {alpha} of {} nodes",
            m_tilde.cols()
        )));
    }
    let s = group_min_norm(rbar, m_tilde)?;
    let column_norms = s.column_norms();
    Ok(IdentificationResult {
        indices: top_alpha(&column_norms, alpha)?,
        column_norms,
    })
}

/// Picks the `alpha` columns of the squared-distance matrix with the
/// largest norms.
pub fn naive_identify<T: Scalar>(f_tilde: &Matrix<T>, alpha: usize) -> Result<IdentificationResult<T>> {
    let column_norms = f_tilde.column_norms();
    Ok(IdentificationResult {
        indices: top_alpha(&column_norms, alpha)?,
        column_norms,
    })
}

/// Runs [`srpca`] for every `lambda` and votes over the per-run top-`alpha`
/// sets.
///
/// Nodes are ranked by how many runs selected them, then by their mean
/// sparse-column norm over the runs, then by index. Runs whose sparse part
/// vanishes carry no ranking and do not vote. A failing run is skipped with
/// a warning; the call fails only when every run fails.
pub fn srpca_identify<T: Scalar>(
    f_tilde: &Matrix<T>,
    alpha: usize,
    lambdas: &[f64],
    opts: &SolverOptions,
) -> Result<IdentificationResult<T>> {
    srpca_identify_reported(f_tilde, alpha, lambdas, opts).map(|(res, _)| res)
}

/// [`srpca_identify`] plus the solver report of every successful run.
pub fn srpca_identify_reported<T: Scalar>(
    f_tilde: &Matrix<T>,
    alpha: usize,
    lambdas: &[f64],
    opts: &SolverOptions,
) -> Result<(IdentificationResult<T>, Vec<SolveReport>)> {
    if lambdas.is_empty() {
        return Err(domain("empty lambda grid"));
    }
    let n = f_tilde.cols();
    if alpha > n {
        return Err(domain(format!("cannot select {alpha} of {n} nodes")));
    }
    let mut votes = vec![0usize; n];
    let mut norm_sum = vec![T::zero(); n];
    let mut reports = Vec::with_capacity(lambdas.len());
    let mut last_err = None;
    for &lambda in lambdas {
        let dec = match srpca(f_tilde, T::lit(lambda), opts) {
            Ok(d) => d,
            Err(e) => {
                log::warn!("srpca failed for lambda = {lambda}: {e}");
                last_err = Some(e);
                continue;
            }
        };
        reports.push(dec.report);
        let norms = dec.sparse.column_norms();
        let top = norms.iter().fold(T::zero(), |m, &v| m.max(v));
        if top <= T::epsilon() * f_tilde.frobenius_norm() {
            continue;
        }
        for i in top_alpha(&norms, alpha)? {
            votes[i] += 1;
        }
        for (acc, v) in norm_sum.iter_mut().zip(norms) {
            *acc += v;
        }
    }
    let ok_runs = reports.len();
    if ok_runs == 0 {
        return Err(last_err.unwrap_or(Error::AllSolvesFailed));
    }
    let column_norms: Vec<T> = norm_sum
        .iter()
        .map(|&s| s / T::lit(ok_runs as f64))
        .collect();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| {
        votes[b]
            .cmp(&votes[a])
            .then(
                column_norms[b]
                    .partial_cmp(&column_norms[a])
                    .unwrap_or(std::cmp::Ordering::Equal),
            )
            .then(a.cmp(&b))
    });
    idx.truncate(alpha);
    Ok((
        IdentificationResult {
            indices: idx,
            column_norms,
        },
        reports,
    ))
}
