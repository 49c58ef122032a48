//! Command-line pipeline: traces -> scenario stats -> metrics -> projection
//! -> report.
//!
//! Exit codes: 0 success, 2 input/usage error, 3 data-invariant violation.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use wattrace_core::error::Error;
use wattrace_core::measurement::{
    aggregate_scenario, parse_trace, trial_summary, ColumnMapping, NodeAnalytics, ScenarioStats,
    DEFAULT_UNIFORMITY_TOL,
};
use wattrace_core::metrics::{derive_tables, ensure_per_node_division, ScenarioSet};
use wattrace_core::projection::{annual_total, AnnualEstimate, AnnualEstimateDoc, Fleet, RateProfile};
use wattrace_core::report::{
    compare_report, default_baselines, parse_baselines, render_json, render_text, Baseline, Section,
};

const EXIT_INPUT: u8 = 2;
const EXIT_INVARIANT: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Parser)]
#[command(name = "wattrace", version, about = "Power-trace analysis and annual network energy projection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Baselines file; defaults to the bundled set.
    #[arg(long, global = true)]
    baselines: Option<PathBuf>,
    /// Permit per-node division even when node analytics are missing or
    /// fail the uniformity check.
    #[arg(long, global = true)]
    allow_nonuniform: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Parse trial traces per scenario and aggregate them into statistics.
    Analyze {
        /// Manifest mapping scenario labels to trial trace files.
        manifest: PathBuf,
        /// Directory trace paths are resolved against (default: the
        /// manifest's directory).
        #[arg(long)]
        trace_dir: Option<PathBuf>,
    },
    /// Derive normalized power tables and the per-message energy curve.
    Metrics {
        /// Scenario-set JSON file.
        scenario_set: PathBuf,
    },
    /// Project the annual energy of a fleet over a rate profile.
    Project {
        /// Fleet configuration JSON file.
        fleet: PathBuf,
        /// Rate profile JSON file (daily list or constant shorthand).
        profile: PathBuf,
    },
    /// Compare an annual estimate against named baselines.
    Compare {
        /// Annual estimate JSON file, as emitted by `project`.
        estimate: PathBuf,
    },
    /// Render a combined report from any of the pipeline artifacts.
    Report {
        /// Scenario-set JSON file: adds statistics and metrics sections.
        #[arg(long)]
        scenario_set: Option<PathBuf>,
        /// Annual estimate JSON file: adds projection and comparison
        /// sections.
        #[arg(long)]
        estimate: Option<PathBuf>,
    },
}

/// Maps scenario labels to trial trace files. Labels `reference` and
/// `resting` plus numeric mps labels form a full scenario set.
#[derive(Deserialize)]
struct Manifest {
    node_count: u32,
    scenarios: BTreeMap<String, Vec<PathBuf>>,
    #[serde(default)]
    analytics: Vec<NodeAnalytics>,
    #[serde(default)]
    mapping: Option<ColumnMapping>,
    #[serde(default)]
    declared_duration_s: BTreeMap<String, f64>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INPUT, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = if err.is_data_invariant() { EXIT_INVARIANT } else { EXIT_INPUT };
        Failure { code, message: err.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let output = match &cli.command {
        Command::Analyze { manifest, trace_dir } => {
            cmd_analyze(manifest, trace_dir.as_deref(), cli)?
        }
        Command::Metrics { scenario_set } => cmd_metrics(scenario_set, cli)?,
        Command::Project { fleet, profile } => cmd_project(fleet, profile, cli)?,
        Command::Compare { estimate } => cmd_compare(estimate, cli)?,
        Command::Report { scenario_set, estimate } => {
            cmd_report(scenario_set.as_deref(), estimate.as_deref(), cli)?
        }
    };
    match &cli.output {
        Some(path) => fs::write(path, output)
            .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?,
        None => print!("{output}"),
    }
    Ok(())
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_baselines(cli: &Cli) -> Result<Vec<Baseline>, Failure> {
    match &cli.baselines {
        Some(path) => Ok(parse_baselines(&read_file(path)?)?),
        None => Ok(default_baselines()),
    }
}

fn cmd_analyze(manifest_path: &Path, trace_dir: Option<&Path>, cli: &Cli) -> Result<String, Failure> {
    let manifest: Manifest = serde_json::from_str(&read_file(manifest_path)?)
        .map_err(|e| Failure::input(format!("{}: {e}", manifest_path.display())))?;
    if manifest.scenarios.is_empty() {
        return Err(Failure::input("manifest names no scenarios"));
    }
    let base_dir = trace_dir
        .map(Path::to_path_buf)
        .or_else(|| manifest_path.parent().map(Path::to_path_buf))
        .unwrap_or_default();
    let mapping = manifest.mapping.clone().unwrap_or_default();

    let mut stats_by_label: BTreeMap<String, ScenarioStats> = BTreeMap::new();
    for (label, files) in &manifest.scenarios {
        let mut summaries = Vec::with_capacity(files.len());
        for file in files {
            let path = base_dir.join(file);
            let reader = fs::File::open(&path)
                .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
            let declared = manifest.declared_duration_s.get(label).copied();
            let trace = parse_trace(reader, &mapping, label, declared).map_err(|e| {
                let mut failure = Failure::from(e);
                failure.message = format!("{}: {}", path.display(), failure.message);
                failure
            })?;
            summaries.push(trial_summary(&trace));
        }
        stats_by_label.insert(label.clone(), aggregate_scenario(label.clone(), &summaries)?);
    }

    // When the labels form a full scenario set, emit one; the result feeds
    // straight into `metrics`.
    let as_set = try_build_set(manifest.node_count, &stats_by_label, &manifest.analytics)?;
    let json = match &as_set {
        Some(set) => serde_json::to_string_pretty(set).map_err(Error::from)?,
        None => {
            #[derive(serde::Serialize)]
            struct Scenarios<'a> {
                node_count: u32,
                scenarios: &'a BTreeMap<String, ScenarioStats>,
            }
            serde_json::to_string_pretty(&Scenarios {
                node_count: manifest.node_count,
                scenarios: &stats_by_label,
            })
            .map_err(Error::from)?
        }
    };
    Ok(match cli.format {
        Format::Json => json + "\n",
        Format::Text => {
            let stats: Vec<ScenarioStats> = stats_by_label.into_values().collect();
            render_text(&[Section::Scenarios(stats)])?
        }
    })
}

fn try_build_set(
    node_count: u32,
    stats: &BTreeMap<String, ScenarioStats>,
    analytics: &[NodeAnalytics],
) -> Result<Option<ScenarioSet>, Failure> {
    let (Some(reference), Some(resting)) = (stats.get("reference"), stats.get("resting")) else {
        return Ok(None);
    };
    let mut loaded = Vec::new();
    for (label, s) in stats {
        if label == "reference" || label == "resting" {
            continue;
        }
        let Ok(rate) = label.trim_end_matches("mps").parse::<f64>() else {
            return Ok(None);
        };
        loaded.push((rate, s.clone()));
    }
    let set = ScenarioSet::new(
        node_count,
        reference.clone(),
        resting.clone(),
        loaded,
        analytics.to_vec(),
    )?;
    Ok(Some(set))
}

fn cmd_metrics(scenario_set: &Path, cli: &Cli) -> Result<String, Failure> {
    let set: ScenarioSet = serde_json::from_str(&read_file(scenario_set)?).map_err(map_set_error)?;
    ensure_per_node_division(
        set.node_count(),
        set.analytics(),
        DEFAULT_UNIFORMITY_TOL,
        cli.allow_nonuniform,
    )?;
    let tables = derive_tables(&set)?;
    Ok(match cli.format {
        Format::Json => serde_json::to_string_pretty(&tables).map_err(Error::from)? + "\n",
        Format::Text => render_text(&[Section::Metrics(tables)])?,
    })
}

// Construction failures surface through serde as strings; negative
// normalization must still exit 3, so match it back out of the message.
fn map_set_error(err: serde_json::Error) -> Failure {
    let message = err.to_string();
    let code = if message.contains("measurement error") { EXIT_INVARIANT } else { EXIT_INPUT };
    Failure { code, message }
}

fn cmd_project(fleet_path: &Path, profile_path: &Path, cli: &Cli) -> Result<String, Failure> {
    let fleet: Fleet = serde_json::from_str(&read_file(fleet_path)?)
        .map_err(|e| Failure::input(format!("{}: {e}", fleet_path.display())))?;
    let profile: RateProfile = serde_json::from_str(&read_file(profile_path)?)
        .map_err(|e| Failure::input(format!("{}: {e}", profile_path.display())))?;
    let estimate = annual_total(&fleet, &profile)?;
    Ok(match cli.format {
        Format::Json => serde_json::to_string_pretty(&estimate.to_doc()).map_err(Error::from)? + "\n",
        Format::Text => render_text(&[Section::Annual(estimate)])?,
    })
}

fn load_estimate(path: &Path) -> Result<AnnualEstimate, Failure> {
    let doc: AnnualEstimateDoc = serde_json::from_str(&read_file(path)?)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    Ok(AnnualEstimate::from_doc(&doc))
}

fn cmd_compare(estimate_path: &Path, cli: &Cli) -> Result<String, Failure> {
    let estimate = load_estimate(estimate_path)?;
    let baselines = load_baselines(cli)?;
    let report = compare_report(
        format!("annual estimate from {}", estimate_path.display()),
        &estimate,
        &baselines,
    )?;
    Ok(match cli.format {
        Format::Json => serde_json::to_string_pretty(&report).map_err(Error::from)? + "\n",
        Format::Text => render_text(&[Section::Comparisons(report)])?,
    })
}

fn cmd_report(
    scenario_set: Option<&Path>,
    estimate: Option<&Path>,
    cli: &Cli,
) -> Result<String, Failure> {
    let mut sections = Vec::new();
    if let Some(path) = scenario_set {
        let set: ScenarioSet = serde_json::from_str(&read_file(path)?).map_err(map_set_error)?;
        let mut stats = vec![set.reference().clone(), set.resting().clone()];
        stats.extend(set.loaded().iter().map(|(_, s)| s.clone()));
        sections.push(Section::Scenarios(stats));
        ensure_per_node_division(
            set.node_count(),
            set.analytics(),
            DEFAULT_UNIFORMITY_TOL,
            cli.allow_nonuniform,
        )?;
        sections.push(Section::Metrics(derive_tables(&set)?));
    }
    if let Some(path) = estimate {
        let est = load_estimate(path)?;
        let baselines = load_baselines(cli)?;
        let comparisons = compare_report("annual estimate", &est, &baselines)?;
        sections.push(Section::Annual(est));
        sections.push(Section::Comparisons(comparisons));
    }
    if sections.is_empty() {
        return Err(Failure::input(
            "report needs at least one of --scenario-set or --estimate",
        ));
    }
    Ok(match cli.format {
        Format::Json => render_json(&sections)? + "\n",
        Format::Text => render_text(&sections)?,
    })
}
