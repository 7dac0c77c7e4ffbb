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

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::config::{CorruptionModel, ExperimentConfig, ExperimentId, Method};
use crate::experiments::design::{run_design_rows, DesignRow};
use crate::geometry::assemble_rhs_matrix;
use crate::linalg::Matrix;
use crate::metrics::{
    identification_accuracy, mean_anchor_distance_ratio, mean_relative_error,
    mean_square_distance_error, mean_square_position_error,
};
use crate::robust::{identify_with, naive_identify, srpca_identify_reported, RobustLocalizer};
use crate::scenario::{corrupt_additive_mixture, corrupt_multiplicative, generate_scenario};

/// Fraction of trials allowed to fail before a run is aborted.
pub const MAX_FAILURE_FRACTION: f64 = 0.2;

/// A trial number, or the aggregate over all trials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum TrialLabel {
    Index(usize),
    Mean,
}

impl std::fmt::Display for TrialLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Index(i) => write!(f, "{i}"),
            Self::Mean => f.write_str("mean"),
        }
    }
}

impl Serialize for TrialLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Index(i) => s.serialize_u64(*i as u64),
            Self::Mean => s.serialize_str("mean"),
        }
    }
}

impl<'de> Deserialize<'de> for TrialLabel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Index(usize),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Index(i) => Ok(Self::Index(i)),
            Raw::Text(t) if t == "mean" => Ok(Self::Mean),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("bad trial label {t:?}"))),
        }
    }
}

/// One report line. Metrics a method does not produce are `None`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub experiment_id: ExperimentId,
    pub method: Method,
    pub m: usize,
    pub trial: TrialLabel,
    pub ia: Option<f64>,
    pub mre: Option<f64>,
    pub msp: Option<f64>,
    pub msd: Option<f64>,
    pub madr: Option<f64>,
    pub converged_fraction: f64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialFailure {
    pub m: usize,
    pub trial: usize,
    pub seed: u64,
    pub error: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub version: String,
    /// Per-trial rows sorted by `(method, m, trial)`.
    pub rows: Vec<TrialRow>,
    /// Per-`(method, m)` means of `rows`, same order.
    pub aggregates: Vec<TrialRow>,
    pub failures: Vec<TrialFailure>,
    /// Only filled by the design study.
    #[serde(default)]
    pub design: Vec<DesignRow>,
}

impl ExperimentReport {
    pub fn aggregate(&self, method: Method, m: usize) -> Option<&TrialRow> {
        self.aggregates.iter().find(|r| r.method == method && r.m == m)
    }
}

/// Seed of the scenario in trial `t`; the corruption uses the next value.
pub fn scenario_seed(base_seed: u64, trial: usize) -> u64 {
    base_seed.wrapping_add(1000 * trial as u64)
}

/// Runs every `(m, trial)` pair of the config and aggregates the results.
///
/// Trials run in parallel; the report does not depend on scheduling. A
/// failing trial is recorded and skipped, and the run fails with
/// [`Error::TooManyFailures`] once more than [`MAX_FAILURE_FRACTION`] of
/// the trials fail.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    if config.experiment_id == ExperimentId::DesignStudy {
        let mut design = Vec::new();
        for &m in &config.m_values {
            design.extend(run_design_rows(m, config.dim, config.trials, config.base_seed, config)?);
        }
        return Ok(ExperimentReport {
            config: config.clone(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            rows: Vec::new(),
            aggregates: Vec::new(),
            failures: Vec::new(),
            design,
        });
    }

    let jobs: Vec<(usize, usize)> = config
        .m_values
        .iter()
        .flat_map(|&m| (0..config.trials).map(move |t| (m, t)))
        .collect();
    let outcomes: Vec<(usize, usize, Result<Vec<TrialRow>>)> = jobs
        .par_iter()
        .map(|&(m, t)| (m, t, run_trial(config, m, t)))
        .collect();

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (m, t, out) in outcomes {
        match out {
            Ok(r) => rows.extend(r),
            Err(e) => {
                log::warn!("m = {m}, trial {t} failed: {e}");
                failures.push(TrialFailure {
                    m,
                    trial: t,
                    seed: scenario_seed(config.base_seed, t),
                    error: e.to_string(),
                });
            }
        }
    }
    if failures.len() as f64 > MAX_FAILURE_FRACTION * jobs.len() as f64 {
        return Err(Error::TooManyFailures {
            failed: failures.len(),
            total: jobs.len(),
        });
    }
    rows.sort_by_key(|r| (r.method, r.m, r.trial));
    failures.sort_by_key(|f| (f.m, f.trial));
    let aggregates = aggregate_rows(&rows, config.base_seed);
    Ok(ExperimentReport {
        config: config.clone(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        rows,
        aggregates,
        failures,
        design: Vec::new(),
    })
}

fn mean_opt(vals: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let mut sum = 0.0;
    let mut n = 0usize;
    for v in vals {
        sum += v?;
        n += 1;
    }
    (n > 0).then(|| sum / n as f64)
}

/// Means over consecutive rows with the same `(method, m)`; expects
/// sorted input.
pub fn aggregate_rows(rows: &[TrialRow], base_seed: u64) -> Vec<TrialRow> {
    rows.chunk_by(|a, b| a.method == b.method && a.m == b.m)
        .map(|g| TrialRow {
            experiment_id: g[0].experiment_id,
            method: g[0].method,
            m: g[0].m,
            trial: TrialLabel::Mean,
            ia: mean_opt(g.iter().map(|r| r.ia)),
            mre: mean_opt(g.iter().map(|r| r.mre)),
            msp: mean_opt(g.iter().map(|r| r.msp)),
            msd: mean_opt(g.iter().map(|r| r.msd)),
            madr: mean_opt(g.iter().map(|r| r.madr)),
            converged_fraction: g.iter().map(|r| r.converged_fraction).sum::<f64>() / g.len() as f64,
            seed: base_seed,
        })
        .collect()
}

fn run_trial(config: &ExperimentConfig, m: usize, trial: usize) -> Result<Vec<TrialRow>> {
    let seed = scenario_seed(config.base_seed, trial);
    let scenario = generate_scenario::<f64>(&config.region, m, seed)?;
    let (data, alpha) = match &config.corruption {
        CorruptionModel::Multiplicative(spec) => (
            corrupt_multiplicative(&scenario, spec, seed.wrapping_add(1))?,
            Some(spec.alpha),
        ),
        CorruptionModel::Additive(spec) => (
            corrupt_additive_mixture(&scenario, spec, seed.wrapping_add(1))?,
            None,
        ),
    };
    // nodes on which positions are evaluated
    let eval: Vec<usize> = match alpha {
        Some(_) => data.truth_corrupted_nodes.clone(),
        None => scenario.far_indices().collect(),
    };
    let localizer = RobustLocalizer::new(&scenario.anchors)?;
    let m_tilde = assemble_rhs_matrix(localizer.system(), &data.f_tilde)?;
    let row = |method, ia, conv| TrialRow {
        experiment_id: config.experiment_id,
        method,
        m,
        trial: TrialLabel::Index(trial),
        ia,
        mre: None,
        msp: None,
        msd: None,
        madr: None,
        converged_fraction: conv,
        seed,
    };

    let targets = scenario.targets();
    let dist = |f: &Matrix<f64>| f.map(|v| v.sqrt());
    let (d_clean, d_tilde) = (dist(&data.f_clean), dist(&data.f_tilde));
    let estimate_row = |mut r: TrialRow, nodes: &[usize]| -> Result<TrialRow> {
        let truth = targets.select_columns(nodes);
        let mut est = Matrix::zeros(truth.rows(), nodes.len());
        let mut converged = 0usize;
        for (c, &i) in nodes.iter().enumerate() {
            let e = localizer.estimate(&m_tilde.column(i), &config.bp_options)?;
            converged += e.solver_report.converged as usize;
            est.set_column(c, &e.position);
        }
        r.converged_fraction = converged as f64 / nodes.len() as f64;
        r.mre = Some(mean_relative_error(&truth, &est)?);
        r.msp = Some(mean_square_position_error(&truth, &est)?);
        r.msd = Some(mean_square_distance_error(&d_clean, &d_tilde, nodes)?);
        r.madr = Some(mean_anchor_distance_ratio(&truth, &est, &scenario.anchors)?);
        Ok(r)
    };

    let mut out = Vec::with_capacity(config.methods.len());
    for &method in &config.methods {
        match method {
            Method::Ours => {
                let ia = match alpha {
                    Some(a) => {
                        let id = identify_with(localizer.annihilator(), &m_tilde, a)?;
                        Some(identification_accuracy(&id.indices, &data.truth_corrupted_nodes)?)
                    }
                    None => None,
                };
                out.push(estimate_row(row(method, ia, 1.0), &eval)?);
            }
            Method::Pipeline => {
                let Some(a) = alpha else { continue };
                let id = identify_with(localizer.annihilator(), &m_tilde, a)?;
                let ia = identification_accuracy(&id.indices, &data.truth_corrupted_nodes)?;
                out.push(estimate_row(row(method, Some(ia), 1.0), &id.indices)?);
            }
            Method::Srpca => {
                let Some(a) = alpha else { continue };
                let (id, reports) = srpca_identify_reported(
                    &data.f_tilde,
                    a,
                    &config.srpca_lambdas,
                    &config.srpca_options,
                )?;
                let conv = reports.iter().filter(|r| r.converged).count() as f64 / reports.len() as f64;
                let ia = identification_accuracy(&id.indices, &data.truth_corrupted_nodes)?;
                out.push(row(method, Some(ia), conv));
            }
            Method::Naive => {
                let Some(a) = alpha else { continue };
                let id = naive_identify(&data.f_tilde, a)?;
                let ia = identification_accuracy(&id.indices, &data.truth_corrupted_nodes)?;
                out.push(row(method, Some(ia), 1.0));
            }
        }
    }
    Ok(out)
}
