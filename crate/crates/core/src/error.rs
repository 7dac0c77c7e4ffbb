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

use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the localization pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("SVD failed to converge for a {rows}x{cols} matrix after {sweeps} sweeps")]
    SolverFailure {
        rows: usize,
        cols: usize,
        sweeps: usize,
    },
    #[error("null space of a {rows}x{cols} matrix is empty (full row rank)")]
    EmptyNullspace { rows: usize, cols: usize },
    #[error("matrix is rank deficient (sigma_min / sigma_max = {ratio:e})")]
    RankDeficient { ratio: f64 },
    #[error("column {0} has zero norm")]
    DegenerateColumn(usize),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix contains a non-finite entry")]
    NonFinite,
    #[error("anchors are affinely dependent (anchor matrix rank < {dim})")]
    DegenerateConfiguration { dim: usize },
    #[error("augmented anchor matrix [X 1] is rank deficient")]
    AugmentedRankDeficient,
    #[error("{m} anchors in dimension {r} is not enough; need m > r + 2")]
    InsufficientAnchors { m: usize, r: usize },
    #[error("could not place targets in zone `{zone}` after {attempts} attempts")]
    SamplingExhausted { zone: String, attempts: usize },
    #[error("every regularization value in the grid failed to produce a solution")]
    AllSolvesFailed,
    #[error("{failed} of {total} trials failed; aborting")]
    TooManyFailures { failed: usize, total: usize },
    #[error("i/o error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn shape(msg: impl Into<String>) -> Error {
    Error::Shape(msg.into())
}
