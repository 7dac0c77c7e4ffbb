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

//! Paired comparison of designed and k-means anchor layouts.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::config::{ExperimentConfig, ExperimentId};
use crate::experiments::run::{scenario_seed, ExperimentReport};
use crate::geometry::{assemble_rhs, AnchorSet};
use crate::linalg::{coherence, norm2, welch_bound, Matrix};
use crate::robust::{design_low_coherence, designed_anchor_set, OutlierBudget, RobustLocalizer, DESIGN_EXTENT};
use crate::scenario::kmeans_anchor_layout;
use crate::solvers::SolverOptions;

/// Random corrupted measurements tried per sparsity level.
pub const RECOVERY_PROBES: usize = 5;
/// Half-width of the cube target positions are drawn from.
const PROBE_EXTENT: f64 = 1200.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DesignRow {
    pub m: usize,
    pub dim: usize,
    pub trial: usize,
    pub seed: u64,
    pub mu_designed: f64,
    pub mu_kmeans: f64,
    pub welch_bound: f64,
    /// `||R^T R - I||_F^2` of the designed annihilator.
    pub objective: f64,
    pub k_max_designed: usize,
    pub k_max_kmeans: usize,
    /// Largest `k` for which every probe was recovered exactly.
    pub recovered_k_designed: usize,
    pub recovered_k_kmeans: usize,
}

/// Designed versus k-means layouts over `trials` seeds.
pub fn run_design_study(m: usize, dim: usize, trials: usize, base_seed: u64) -> Result<ExperimentReport> {
    let config = ExperimentConfig {
        m_values: vec![m],
        trials,
        base_seed,
        dim,
        ..ExperimentConfig::design_study()
    };
    crate::experiments::run_experiment(&config)
}

pub(crate) fn run_design_rows(
    m: usize,
    dim: usize,
    trials: usize,
    base_seed: u64,
    config: &ExperimentConfig,
) -> Result<Vec<DesignRow>> {
    debug_assert_eq!(config.experiment_id, ExperimentId::DesignStudy);
    if m <= dim + 2 {
        return Err(Error::InsufficientAnchors { m, r: dim });
    }
    let welch = welch_bound::<f64>(m - dim - 2, m - 1)?;
    (0..trials)
        .map(|t| {
            let seed = scenario_seed(base_seed, t);
            let (rbar, x) = design_low_coherence::<f64>(m, dim, seed)?;
            let gram = &rbar.transpose() * &rbar;
            let objective = gram.sub(&Matrix::identity(m - 1))?.frobenius_norm().powi(2);
            let designed = designed_anchor_set(&x)?;
            let kmeans = kmeans_anchor_layout::<f64>(dim, m, config.region.kmeans_cloud, DESIGN_EXTENT, seed)?;
            let loc_d = RobustLocalizer::new(&designed)?;
            let loc_k = RobustLocalizer::new(&kmeans)?;
            let mu_designed = coherence(&rbar)?;
            let mu_kmeans = coherence(loc_k.annihilator())?;
            let probe_seed = seed.wrapping_add(1);
            Ok(DesignRow {
                m,
                dim,
                trial: t,
                seed,
                mu_designed,
                mu_kmeans,
                welch_bound: welch,
                objective,
                k_max_designed: OutlierBudget::from_coherence(mu_designed).k_max,
                k_max_kmeans: OutlierBudget::from_coherence(mu_kmeans).k_max,
                recovered_k_designed: empirical_recovery(&designed, &loc_d, probe_seed, &config.bp_options)?,
                recovered_k_kmeans: empirical_recovery(&kmeans, &loc_k, probe_seed, &config.bp_options)?,
            })
        })
        .collect()
}

/// Largest `k` such that [`RECOVERY_PROBES`] random targets, each with `k`
/// corrupted non-central distances, are all localized exactly.
pub fn empirical_recovery(
    anchors: &AnchorSet<f64>,
    localizer: &RobustLocalizer<f64>,
    seed: u64,
    opts: &SolverOptions,
) -> Result<usize> {
    let system = localizer.system();
    let rows = system.x.rows();
    let k_limit = localizer.annihilator().rows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0;
    for k in 1..=k_limit {
        for _ in 0..RECOVERY_PROBES {
            let q: Vec<f64> = (0..anchors.dim())
                .map(|_| rng.random_range(-PROBE_EXTENT..PROBE_EXTENT))
                .collect();
            let mut d2 = anchors.squared_distances_to(&q);
            for row in sample(&mut rng, rows, k) {
                let j = system.row_anchors[row];
                d2[j] *= rng.random_range(1.2..3.0);
            }
            let m_tilde = assemble_rhs(system, &d2)?;
            let est = localizer.estimate(&m_tilde, opts)?;
            let err: Vec<f64> = est.position.iter().zip(&q).map(|(a, b)| a - b).collect();
            if norm2(&err) > 1e-6 * (1.0 + norm2(&q)) {
                return Ok(best);
            }
        }
        best = k;
    }
    Ok(best)
}
