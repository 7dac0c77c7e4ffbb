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

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use nodeloc::experiments::{
    emit_report, report_csv, run_experiment, CorruptionModel, ExperimentConfig,
    ExperimentId, ExperimentReport, ReportFormat,
};
use nodeloc::metrics::{
    identification_accuracy, mean_anchor_distance_ratio, mean_relative_error,
    mean_square_position_error,
};
use nodeloc::geometry::assemble_rhs_matrix;
use nodeloc::robust::{identify_with, RobustLocalizer};
use nodeloc::scenario::{corrupt_multiplicative, generate_scenario, CorruptionSpec, RegionSpec};
use nodeloc::solvers::SolverOptions;
use nodeloc::{Matrix64, Scenario64};
use serde_json::json;

#[derive(Parser)]
#[command(name = "nodeloc", version, about = "Identify and localize target nodes with corrupted anchor distances")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Idealized sweep: only the planted nodes are perturbed
    Exp1(ExpArgs),
    /// Realistic sweep: every node carries mild noise
    Exp2(ExpArgs),
    /// Additive mixture noise on all distances
    Compare(ExpArgs),
    /// Designed versus k-means anchor layouts
    Design(ExpArgs),
    /// Identify corrupted nodes in one scenario
    Identify(NodeArgs),
    /// Identify corrupted nodes and estimate their positions
    Estimate(NodeArgs),
}

#[derive(Args)]
struct ExpArgs {
    /// Anchor counts, comma separated
    #[arg(long, value_delimiter = ',')]
    m: Option<Vec<usize>>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of corrupted far nodes
    #[arg(long)]
    alpha: Option<usize>,
    /// Corrupted anchors per corrupted node
    #[arg(long)]
    k: Option<usize>,
    /// Output file; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// JSON config overriding the experiment defaults
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct NodeArgs {
    #[arg(long, default_value_t = 15)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 4)]
    alpha: usize,
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Replay a saved scenario instead of generating one
    #[arg(long)]
    scenario: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Noise::Idealized)]
    noise: Noise,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Noise {
    Idealized,
    Realistic,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => ReportFormat::Csv,
            Format::Json => ReportFormat::Json,
        }
    }
}

fn experiment_config(id: ExperimentId, args: &ExpArgs) -> Result<ExperimentConfig> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let mut raw: serde_json::Value = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", path.display()))?;
            // the subcommand decides which experiment runs
            raw["experiment_id"] = serde_json::to_value(id)?;
            ExperimentConfig::from_json_str(&raw.to_string())?
        }
        None => ExperimentConfig::for_id(id),
    };
    if let Some(m) = &args.m {
        cfg.m_values = m.clone();
    }
    if let Some(t) = args.trials {
        cfg.trials = t;
    }
    if let Some(s) = args.seed {
        cfg.base_seed = s;
    }
    if args.alpha.is_some() || args.k.is_some() {
        let CorruptionModel::Multiplicative(spec) = &mut cfg.corruption else {
            bail!("--alpha and --k apply to the multiplicative model only");
        };
        spec.alpha = args.alpha.unwrap_or(spec.alpha);
        spec.k = args.k.unwrap_or(spec.k);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn write_report(report: &ExperimentReport, format: Format, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => emit_report(report, format.into(), path)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            match format {
                Format::Json => writeln!(stdout, "{}", serde_json::to_string_pretty(report)?)?,
                Format::Csv => stdout.write_all(&report_csv(report)?)?,
            }
        }
    }
    Ok(())
}

fn run_sweep(id: ExperimentId, args: &ExpArgs) -> Result<()> {
    let cfg = experiment_config(id, args)?;
    info!("running {} over m = {:?}, {} trials", id.as_str(), cfg.m_values, cfg.trials);
    let report = run_experiment(&cfg)?;
    if !report.failures.is_empty() {
        log::warn!("{} trials failed", report.failures.len());
    }
    write_report(&report, args.format, args.out.as_deref())
}

fn run_node(args: &NodeArgs, estimate: bool) -> Result<()> {
    let scenario: Scenario64 = match &args.scenario {
        Some(path) => Scenario64::from_json_file(path)?,
        None => generate_scenario(&RegionSpec::default(), args.m, args.seed)?,
    };
    let base = match args.noise {
        Noise::Idealized => CorruptionSpec::idealized(),
        Noise::Realistic => CorruptionSpec::realistic(),
    };
    let spec = CorruptionSpec {
        alpha: args.alpha,
        k: args.k,
        ..base
    };
    let data = corrupt_multiplicative(&scenario, &spec, scenario.seed.wrapping_add(1))?;
    let localizer = RobustLocalizer::new(&scenario.anchors)?;
    let m_tilde = assemble_rhs_matrix(localizer.system(), &data.f_tilde)?;
    let id = identify_with(localizer.annihilator(), &m_tilde, args.alpha)?;
    let ia = identification_accuracy(&id.indices, &data.truth_corrupted_nodes)?;

    let mut out = json!({
        "m": scenario.anchors.len(),
        "seed": scenario.seed,
        "alpha": args.alpha,
        "k": args.k,
        "identified": id.indices,
        "truth": data.truth_corrupted_nodes,
        "ia": ia,
    });
    if estimate {
        let targets = scenario.targets();
        let truth = targets.select_columns(&id.indices);
        let mut est = Matrix64::zeros(truth.rows(), id.indices.len());
        let mut nodes = Vec::new();
        for (c, &i) in id.indices.iter().enumerate() {
            let e = localizer.estimate(&m_tilde.column(i), &SolverOptions::basis_pursuit())?;
            est.set_column(c, &e.position);
            nodes.push(json!({
                "node": i,
                "position": e.position,
                "true_position": targets.column(i),
                "converged": e.solver_report.converged,
            }));
        }
        out["estimates"] = json!(nodes);
        out["mre"] = json!(mean_relative_error(&truth, &est)?);
        out["msp"] = json!(mean_square_position_error(&truth, &est)?);
        out["madr"] = json!(mean_anchor_distance_ratio(&truth, &est, &scenario.anchors)?);
    }
    let text = serde_json::to_string_pretty(&out)?;
    match &args.out {
        Some(path) => std::fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match &cli.command {
        Command::Exp1(a) => run_sweep(ExperimentId::Exp1, a),
        Command::Exp2(a) => run_sweep(ExperimentId::Exp2, a),
        Command::Compare(a) => run_sweep(ExperimentId::BaselineCompare, a),
        Command::Design(a) => run_sweep(ExperimentId::DesignStudy, a),
        Command::Identify(a) => run_node(a, false),
        Command::Estimate(a) => run_node(a, true),
    }
}
