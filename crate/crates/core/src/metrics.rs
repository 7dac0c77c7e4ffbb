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

//! Evaluation metrics over a set of corrupted nodes.
//!
//! Position arguments hold one node per column; distance matrices are
//! `m x n` (anchors by nodes) and unsquared.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{domain, shape, Result};
use crate::geometry::AnchorSet;
use crate::linalg::Matrix;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    /// Identification accuracy.
    pub ia: f64,
    /// Mean relative position error.
    pub mre: f64,
    /// Mean squared position error.
    pub msp: f64,
    /// Mean squared distance error of the data itself.
    pub msd: f64,
    /// Mean anchor distance ratio.
    pub madr: f64,
}

/// Fraction of `truth` found in `predicted`.
pub fn identification_accuracy(predicted: &[usize], truth: &[usize]) -> Result<f64> {
    if predicted.len() != truth.len() {
        return Err(domain(format!(
            "predicted {} nodes, truth has {}",
            predicted.len(),
            truth.len()
        )));
    }
    if truth.is_empty() {
        return Err(domain("empty corrupted set"));
    }
    let t: BTreeSet<_> = truth.iter().collect();
    let hits = predicted.iter().collect::<BTreeSet<_>>().intersection(&t).count();
    Ok(hits as f64 / truth.len() as f64)
}

fn check_pair<T: Scalar>(truth: &Matrix<T>, est: &Matrix<T>) -> Result<()> {
    if truth.shape() != est.shape() {
        return Err(shape(format!(
            "truth is {:?}, estimate is {:?}",
            truth.shape(),
            est.shape()
        )));
    }
    if truth.cols() == 0 {
        return Err(domain("no nodes to evaluate"));
    }
    Ok(())
}

fn col_dist<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>, j: usize) -> f64 {
    (0..a.rows())
        .map(|d| (a[(d, j)] - b[(d, j)]).as_f64().powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Mean of `||q - q_hat|| / ||q||`.
pub fn mean_relative_error<T: Scalar>(truth: &Matrix<T>, est: &Matrix<T>) -> Result<f64> {
    check_pair(truth, est)?;
    let norms = truth.column_norms();
    let mut acc = 0.0;
    for (j, n) in norms.iter().enumerate() {
        if *n == T::zero() {
            return Err(domain(format!("node {j} sits at the origin")));
        }
        acc += col_dist(truth, est, j) / n.as_f64();
    }
    Ok(acc / truth.cols() as f64)
}

/// Mean of `||q - q_hat||^2`.
pub fn mean_square_position_error<T: Scalar>(truth: &Matrix<T>, est: &Matrix<T>) -> Result<f64> {
    check_pair(truth, est)?;
    let acc: f64 = (0..truth.cols()).map(|j| col_dist(truth, est, j).powi(2)).sum();
    Ok(acc / truth.cols() as f64)
}

/// Mean of `(d_ij - d~_ij)^2` over the given nodes and all anchors.
pub fn mean_square_distance_error<T: Scalar>(
    clean: &Matrix<T>,
    corrupted: &Matrix<T>,
    nodes: &[usize],
) -> Result<f64> {
    if clean.shape() != corrupted.shape() {
        return Err(shape(format!(
            "clean is {:?}, corrupted is {:?}",
            clean.shape(),
            corrupted.shape()
        )));
    }
    if nodes.is_empty() {
        return Err(domain("empty corrupted set"));
    }
    if let Some(&i) = nodes.iter().find(|&&i| i >= clean.cols()) {
        return Err(domain(format!("node {i} out of range")));
    }
    let m = clean.rows();
    let acc: f64 = nodes
        .iter()
        .flat_map(|&i| (0..m).map(move |j| (j, i)))
        .map(|ji| (clean[ji] - corrupted[ji]).as_f64().powi(2))
        .sum();
    Ok(acc / (nodes.len() * m) as f64)
}

/// Mean over nodes of `sum_j ||q_hat - a_j|| / sum_j ||q - a_j||`.
pub fn mean_anchor_distance_ratio<T: Scalar>(
    truth: &Matrix<T>,
    est: &Matrix<T>,
    anchors: &AnchorSet<T>,
) -> Result<f64> {
    check_pair(truth, est)?;
    if truth.rows() != anchors.dim() {
        return Err(shape(format!(
            "nodes live in R^{}, anchors in R^{}",
            truth.rows(),
            anchors.dim()
        )));
    }
    let sum_dist = |p: &Matrix<T>, i: usize| -> f64 {
        (0..anchors.len())
            .map(|j| {
                let a = anchors.anchor(j);
                (0..p.rows())
                    .map(|d| (p[(d, i)] - a[d]).as_f64().powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .sum()
    };
    let mut acc = 0.0;
    for i in 0..truth.cols() {
        let den = sum_dist(truth, i);
        if den == 0.0 {
            return Err(domain(format!("node {i} coincides with every anchor")));
        }
        acc += sum_dist(est, i) / den;
    }
    Ok(acc / truth.cols() as f64)
}
