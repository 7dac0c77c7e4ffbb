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

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::robust::SRPCA_LAMBDAS;
use crate::scenario::{AdditiveSpec, CorruptionSpec, RegionSpec};
use crate::solvers::SolverOptions;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentId {
    Exp1,
    Exp2,
    BaselineCompare,
    DesignStudy,
}

impl ExperimentId {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Exp1 => "exp1",
            Self::Exp2 => "exp2",
            Self::BaselineCompare => "baseline_compare",
            Self::DesignStudy => "design_study",
        }
    }
}

/// Identification / estimation method. `Ours` estimates positions of the
/// planted corrupted set; `Pipeline` estimates the nodes it identified
/// itself. The baselines only identify.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Ours,
    Pipeline,
    Srpca,
    Naive,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Ours => "ours",
            Self::Pipeline => "pipeline",
            Self::Srpca => "srpca",
            Self::Naive => "naive",
        }
    }
}

/// Which noise model corrupts the distances.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "model")]
pub enum CorruptionModel {
    /// Relative noise on squared distances; a planted set of far targets is
    /// heavily corrupted and has to be identified.
    Multiplicative(CorruptionSpec),
    /// Additive mixture noise on every distance. There is no planted set;
    /// estimation is evaluated on all far targets.
    Additive(AdditiveSpec),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub experiment_id: ExperimentId,
    pub m_values: Vec<usize>,
    pub trials: usize,
    pub base_seed: u64,
    pub region: RegionSpec,
    pub corruption: CorruptionModel,
    pub methods: Vec<Method>,
    pub srpca_lambdas: Vec<f64>,
    pub bp_options: SolverOptions,
    pub srpca_options: SolverOptions,
    /// Spatial dimension; only the design study supports 3.
    pub dim: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self::exp1()
    }
}

impl ExperimentConfig {
    pub fn exp1() -> Self {
        Self {
            experiment_id: ExperimentId::Exp1,
            m_values: vec![6, 9, 12, 15],
            trials: 50,
            base_seed: 0,
            region: RegionSpec::default(),
            corruption: CorruptionModel::Multiplicative(CorruptionSpec::idealized()),
            methods: vec![Method::Ours, Method::Srpca, Method::Naive],
            srpca_lambdas: SRPCA_LAMBDAS.to_vec(),
            bp_options: SolverOptions::basis_pursuit(),
            srpca_options: SolverOptions::srpca(),
            dim: 2,
        }
    }

    pub fn exp2() -> Self {
        Self {
            experiment_id: ExperimentId::Exp2,
            corruption: CorruptionModel::Multiplicative(CorruptionSpec::realistic()),
            ..Self::exp1()
        }
    }

    pub fn baseline_compare() -> Self {
        Self {
            experiment_id: ExperimentId::BaselineCompare,
            corruption: CorruptionModel::Additive(AdditiveSpec::default()),
            methods: vec![Method::Ours],
            ..Self::exp1()
        }
    }

    pub fn design_study() -> Self {
        Self {
            experiment_id: ExperimentId::DesignStudy,
            m_values: vec![15],
            trials: 100,
            methods: vec![Method::Ours],
            ..Self::exp1()
        }
    }

    pub fn for_id(id: ExperimentId) -> Self {
        match id {
            ExperimentId::Exp1 => Self::exp1(),
            ExperimentId::Exp2 => Self::exp2(),
            ExperimentId::BaselineCompare => Self::baseline_compare(),
            ExperimentId::DesignStudy => Self::design_study(),
        }
    }

    /// Reads a JSON config; absent fields take the defaults of the
    /// experiment named in the file (or of `exp1`).
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json_str(&text)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: serde_json::Value = serde_json::from_str(text)?;
        let id = match raw.get("experiment_id") {
            Some(v) => serde_json::from_value(v.clone())?,
            None => ExperimentId::Exp1,
        };
        let mut base = serde_json::to_value(Self::for_id(id))?;
        let mut raw = raw;
        // switching noise models must not inherit the other model's fields
        let switched = raw
            .get("corruption")
            .and_then(|c| c.get("model"))
            .is_some_and(|m| Some(m) != base["corruption"].get("model"));
        if switched {
            if let Some(c) = raw.as_object_mut().and_then(|o| o.remove("corruption")) {
                base["corruption"] = c;
            }
        }
        merge(&mut base, raw);
        let cfg: Self = serde_json::from_value(base)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(domain("trials must be at least 1"));
        }
        if self.m_values.is_empty() {
            return Err(domain("m_values must not be empty"));
        }
        if self.methods.is_empty() && self.experiment_id != ExperimentId::DesignStudy {
            return Err(domain("no methods requested"));
        }
        if !(self.dim == 2 || (self.dim == 3 && self.experiment_id == ExperimentId::DesignStudy)) {
            return Err(domain(format!("unsupported dimension {}", self.dim)));
        }
        self.region.validate()?;
        self.bp_options.validate()?;
        self.srpca_options.validate()?;
        match &self.corruption {
            CorruptionModel::Multiplicative(c) => c.validate()?,
            CorruptionModel::Additive(a) => a.validate()?,
        }
        if self.methods.contains(&Method::Srpca) && self.srpca_lambdas.is_empty() {
            return Err(domain("empty lambda grid"));
        }
        Ok(())
    }
}

/// Recursive JSON object merge; `patch` wins.
fn merge(base: &mut serde_json::Value, patch: serde_json::Value) {
    match (base, patch) {
        (serde_json::Value::Object(b), serde_json::Value::Object(p)) => {
            for (k, v) in p {
                match b.get_mut(&k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}
