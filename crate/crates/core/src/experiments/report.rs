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

use std::fs::File;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::run::{ExperimentReport, TrialRow};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportFormat {
    Csv,
    Json,
}

/// Column order of the CSV report.
pub const CSV_HEADER: [&str; 11] = [
    "experiment_id",
    "method",
    "m",
    "trial",
    "ia",
    "mre",
    "msp",
    "msd",
    "madr",
    "converged_fraction",
    "seed",
];

/// Column order of the design-study CSV.
pub const DESIGN_CSV_HEADER: [&str; 12] = [
    "m",
    "dim",
    "trial",
    "seed",
    "mu_designed",
    "mu_kmeans",
    "welch_bound",
    "objective",
    "k_max_designed",
    "k_max_kmeans",
    "recovered_k_designed",
    "recovered_k_kmeans",
];

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes the report. CSV output lists, per `(method, m)`, the trial rows
/// followed by their `mean` row; the design study uses its own columns.
pub fn emit_report(report: &ExperimentReport, format: ReportFormat, path: &Path) -> Result<()> {
    let mut file = File::create(path).map_err(io_err(path))?;
    match format {
        ReportFormat::Json => {
            let text = serde_json::to_string_pretty(report)?;
            file.write_all(text.as_bytes()).map_err(io_err(path))?;
            file.write_all(b"\n").map_err(io_err(path))?;
        }
        ReportFormat::Csv => {
            file.write_all(&report_csv(report)?).map_err(io_err(path))?;
        }
    }
    Ok(())
}

pub fn load_report(path: &Path) -> Result<ExperimentReport> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    Ok(serde_json::from_str(&text)?)
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn row_record(r: &TrialRow) -> Vec<String> {
    vec![
        r.experiment_id.as_str().to_string(),
        r.method.as_str().to_string(),
        r.m.to_string(),
        r.trial.to_string(),
        opt(r.ia),
        opt(r.mre),
        opt(r.msp),
        opt(r.msd),
        opt(r.madr),
        r.converged_fraction.to_string(),
        r.seed.to_string(),
    ]
}

/// CSV text of a report, with the design columns for a design study.
pub fn report_csv(report: &ExperimentReport) -> Result<Vec<u8>> {
    if !report.design.is_empty() {
        return design_csv(report);
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for agg in &report.aggregates {
        for r in report
            .rows
            .iter()
            .filter(|r| r.method == agg.method && r.m == agg.m)
        {
            w.write_record(row_record(r))?;
        }
        w.write_record(row_record(agg))?;
    }
    w.into_inner().map_err(|e| Error::Csv(e.into_error().into()))
}

fn design_csv(report: &ExperimentReport) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(DESIGN_CSV_HEADER)?;
    for d in &report.design {
        w.write_record([
            d.m.to_string(),
            d.dim.to_string(),
            d.trial.to_string(),
            d.seed.to_string(),
            d.mu_designed.to_string(),
            d.mu_kmeans.to_string(),
            d.welch_bound.to_string(),
            d.objective.to_string(),
            d.k_max_designed.to_string(),
            d.k_max_kmeans.to_string(),
            d.recovered_k_designed.to_string(),
            d.recovered_k_kmeans.to_string(),
        ])?;
    }
    w.into_inner().map_err(|e| Error::Csv(e.into_error().into()))
}
