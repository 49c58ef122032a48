//! Power-meter trace parsing and per-scenario statistics.
//!
//! A trace is a CSV of timestamped voltage-current readings taken during one
//! measurement trial. The canonical layout is `t_s,volts,amps` with a header
//! row; foreign layouts are handled through a [`ColumnMapping`]. Trials are
//! reduced to mean power and scenarios to the statistics reported per test
//! (mean of trial means, min/max, sample standard deviation, standard error).

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One meter reading: elapsed seconds, bus voltage and current.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerSample {
    pub t_s: f64,
    pub volts: f64,
    pub amps: f64,
}

/// Power drawn at the instant of a sample, from P = V * I.
pub fn instantaneous_power(s: &PowerSample) -> f64 {
    s.volts * s.amps
}

/// Maps trace columns to the canonical fields, with optional scale factors
/// for meters that export e.g. millivolts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ColumnMapping {
    pub time: String,
    pub volts: String,
    pub amps: String,
    #[serde(default = "one")]
    pub time_scale: f64,
    #[serde(default = "one")]
    pub volts_scale: f64,
    #[serde(default = "one")]
    pub amps_scale: f64,
}

fn one() -> f64 {
    1.0
}

impl Default for ColumnMapping {
    fn default() -> Self {
        ColumnMapping {
            time: "t_s".to_string(),
            volts: "volts".to_string(),
            amps: "amps".to_string(),
            time_scale: 1.0,
            volts_scale: 1.0,
            amps_scale: 1.0,
        }
    }
}

/// The samples of one measurement trial, in file order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialTrace {
    pub scenario_label: String,
    samples: Vec<PowerSample>,
    pub declared_duration_s: Option<f64>,
}

/// Tolerated relative deviation between observed and declared trial
/// duration; meters drop samples, so exact equality would reject real traces.
pub const DURATION_TOLERANCE: f64 = 0.05;

impl TrialTrace {
    pub fn new(
        scenario_label: impl Into<String>,
        samples: Vec<PowerSample>,
        declared_duration_s: Option<f64>,
    ) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyTrace);
        }
        if samples.len() < 2 {
            return Err(Error::TooFewSamples { count: samples.len() });
        }
        let observed = samples[samples.len() - 1].t_s - samples[0].t_s;
        if let Some(declared) = declared_duration_s {
            if (observed - declared).abs() > DURATION_TOLERANCE * declared {
                return Err(Error::DurationMismatch {
                    declared_s: declared,
                    observed_s: observed,
                });
            }
        }
        Ok(TrialTrace {
            scenario_label: scenario_label.into(),
            samples,
            declared_duration_s,
        })
    }

    pub fn samples(&self) -> &[PowerSample] {
        &self.samples
    }

    pub fn duration_s(&self) -> f64 {
        self.samples[self.samples.len() - 1].t_s - self.samples[0].t_s
    }
}

/// Parse a trace from a reader. Rows are kept in file order; every
/// violation is reported with its 1-based line number (header is line 1).
pub fn parse_trace<R: Read>(
    reader: R,
    mapping: &ColumnMapping,
    scenario_label: &str,
    declared_duration_s: Option<f64>,
) -> Result<TrialTrace> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let col = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| Error::MissingColumn { name: name.to_string() })
    };
    let (ti, vi, ai) = (col(&mapping.time)?, col(&mapping.volts)?, col(&mapping.amps)?);

    let mut samples = Vec::new();
    let mut prev_t: Option<f64> = None;
    for (i, record) in rdr.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| Error::MalformedRow { line, detail: e.to_string() })?;
        let field = |idx: usize| -> Result<f64> {
            let raw = record.get(idx).ok_or_else(|| Error::MalformedRow {
                line,
                detail: format!("missing field {idx}"),
            })?;
            raw.trim().parse::<f64>().map_err(|_| Error::MalformedRow {
                line,
                detail: format!("non-numeric field '{}'", raw.trim()),
            })
        };
        let t_s = field(ti)? * mapping.time_scale;
        let volts = field(vi)? * mapping.volts_scale;
        let amps = field(ai)? * mapping.amps_scale;

        if volts <= 0.0 {
            return Err(Error::NonPositiveVoltage { line, volts });
        }
        if amps < 0.0 {
            return Err(Error::InvalidSample {
                line,
                reason: format!("negative current {amps}"),
            });
        }
        if t_s < 0.0 {
            return Err(Error::InvalidSample {
                line,
                reason: format!("negative time {t_s}"),
            });
        }
        if let Some(prev) = prev_t {
            if t_s <= prev {
                return Err(Error::NonMonotonicTime { line });
            }
        }
        prev_t = Some(t_s);
        samples.push(PowerSample { t_s, volts, amps });
    }
    if samples.is_empty() {
        return Err(Error::EmptyTrace);
    }
    TrialTrace::new(scenario_label, samples, declared_duration_s)
}

/// Write a trace in the canonical `t_s,volts,amps` format. Values are
/// printed with shortest round-trip precision, so parse ∘ write is identity.
pub fn write_trace<W: Write>(mut writer: W, trace: &TrialTrace) -> Result<()> {
    writeln!(writer, "t_s,volts,amps")?;
    for s in trace.samples() {
        writeln!(writer, "{},{},{}", s.t_s, s.volts, s.amps)?;
    }
    Ok(())
}

/// One trial reduced to its mean power.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub mean_power_w: f64,
    pub duration_s: f64,
    pub sample_count: usize,
}

/// Arithmetic mean of instantaneous power over all samples. The meter
/// samples at a fixed cadence, so no integration weighting is applied.
pub fn trial_summary(trace: &TrialTrace) -> TrialSummary {
    let sum: f64 = trace.samples().iter().map(instantaneous_power).sum();
    TrialSummary {
        mean_power_w: sum / trace.samples().len() as f64,
        duration_s: trace.duration_s(),
        sample_count: trace.samples().len(),
    }
}

/// Aggregated power statistics for one test scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioStats {
    pub label: String,
    pub trials: usize,
    pub mean_power_w: f64,
    pub min_trial_w: f64,
    pub max_trial_w: f64,
    pub stddev_w: f64,
    pub stderr_w: f64,
}

impl ScenarioStats {
    /// Check the published-stats invariants. Used when stats arrive from a
    /// file rather than from [`aggregate_scenario`].
    pub fn validate(&self) -> Result<()> {
        let fail = |reason: &str| Error::InvalidStats {
            label: self.label.clone(),
            reason: reason.to_string(),
        };
        if self.trials < 1 {
            return Err(fail("trials must be >= 1"));
        }
        if !(self.min_trial_w <= self.mean_power_w && self.mean_power_w <= self.max_trial_w) {
            return Err(fail("mean must lie within [min, max]"));
        }
        if self.stddev_w < 0.0 {
            return Err(fail("stddev must be non-negative"));
        }
        // Published tables round stderr to a couple of digits, so accept a
        // few percent of slack when stats come from a file.
        let expected = self.stddev_w / (self.trials as f64).sqrt();
        let scale = expected.abs().max(1e-12);
        if (self.stderr_w - expected).abs() / scale > 0.05 {
            return Err(fail("stderr must equal stddev / sqrt(trials)"));
        }
        Ok(())
    }
}

/// Aggregate trial means into scenario statistics.
///
/// Trial means are summed in ascending order so concurrent pipelines
/// produce bit-identical results regardless of input order. The standard
/// deviation is the sample estimator (n-1 denominator), defined as 0 for a
/// single trial, and stderr = stddev / sqrt(n).
pub fn aggregate_scenario(label: impl Into<String>, trials: &[TrialSummary]) -> Result<ScenarioStats> {
    if trials.is_empty() {
        return Err(Error::EmptyTrialList);
    }
    let mut means: Vec<f64> = trials.iter().map(|t| t.mean_power_w).collect();
    means.sort_by(f64::total_cmp);
    let n = means.len() as f64;
    // Identical trial means must yield exactly that mean and zero spread;
    // the summed path would leave rounding residue.
    let (mean, stddev) = if means[0] == means[means.len() - 1] {
        (means[0], 0.0)
    } else {
        let mean = means.iter().sum::<f64>() / n;
        let stddev = (means.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
        (mean, stddev)
    };
    Ok(ScenarioStats {
        label: label.into(),
        trials: means.len(),
        mean_power_w: mean,
        min_trial_w: means[0],
        max_trial_w: means[means.len() - 1],
        stddev_w: stddev,
        stderr_w: stddev / n.sqrt(),
    })
}

/// Per-node counters exported by the node software, used to verify that all
/// nodes processed essentially the same message set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeAnalytics {
    pub node_id: String,
    pub messages_in_db: u64,
    pub scheduled_messages: u64,
    #[serde(default)]
    pub tip_pool: u64,
    #[serde(default)]
    pub avg_mps: f64,
    #[serde(default)]
    pub avg_cpu_pct: f64,
    #[serde(default)]
    pub avg_mem_mb: f64,
}

/// Default relative tolerance for the uniformity check. Observed spreads in
/// practice are around 0.1%; 1% leaves headroom while still catching
/// asymmetric networks.
pub const DEFAULT_UNIFORMITY_TOL: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniformityReport {
    pub passed: bool,
    pub messages_in_db_spread: f64,
    pub scheduled_messages_spread: f64,
    pub max_spread: f64,
    pub tol: f64,
}

fn relative_spread(values: impl Iterator<Item = f64>) -> f64 {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut sum = 0.0;
    let mut n = 0usize;
    for v in values {
        min = min.min(v);
        max = max.max(v);
        sum += v;
        n += 1;
    }
    let mean = sum / n as f64;
    if mean == 0.0 {
        0.0
    } else {
        (max - min) / mean
    }
}

/// Check that node workloads are uniform enough to license dividing fleet
/// measurements by the node count. A failing check is a valid report, not
/// an error.
pub fn check_node_uniformity(nodes: &[NodeAnalytics], tol: f64) -> Result<UniformityReport> {
    if nodes.len() < 2 {
        return Err(Error::TooFewNodes { count: nodes.len() });
    }
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::InvalidTolerance { tol });
    }
    let db = relative_spread(nodes.iter().map(|n| n.messages_in_db as f64));
    let sched = relative_spread(nodes.iter().map(|n| n.scheduled_messages as f64));
    let max_spread = db.max(sched);
    Ok(UniformityReport {
        passed: max_spread <= tol,
        messages_in_db_spread: db,
        scheduled_messages_spread: sched,
        max_spread,
        tol,
    })
}
