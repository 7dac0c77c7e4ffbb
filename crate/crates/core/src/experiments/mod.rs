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

//! Seeded multi-trial experiment sweeps and their reports.

mod config;
mod design;
mod report;
mod run;

pub use config::{CorruptionModel, ExperimentConfig, ExperimentId, Method};
pub use design::{empirical_recovery, run_design_study, DesignRow, RECOVERY_PROBES};
pub use report::{emit_report, load_report, report_csv, ReportFormat, CSV_HEADER, DESIGN_CSV_HEADER};
pub use run::{
    aggregate_rows, run_experiment, scenario_seed, ExperimentReport, TrialFailure, TrialLabel,
    TrialRow, MAX_FAILURE_FRACTION,
};
