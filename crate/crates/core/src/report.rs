//! Baseline comparisons and deterministic report rendering.
//!
//! Reports are built from sections and rendered to plain text (display
//! precisions: W to 3 decimals, mW and mJ to 2) and to JSON carrying
//! full-precision numbers. Identical inputs produce byte-identical output.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measurement::ScenarioStats;
use crate::metrics::{bulb_fraction, NormalizedTables, BULB_W};
use crate::projection::AnnualEstimate;
use crate::units::{joules_to_kwh, Dimension, Quantity, Unit};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaselineKind {
    AnnualEnergy,
    PerCapitaEnergy,
    DevicePower,
    ReferenceEnergy,
}

/// A named figure to compare estimates against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Baseline {
    pub name: String,
    pub kind: BaselineKind,
    pub magnitude: f64,
    pub unit: Unit,
    #[serde(default)]
    pub source: String,
    /// Decimal places used when displaying percentages of this baseline.
    #[serde(default)]
    pub display_decimals: Option<u32>,
}

impl Baseline {
    pub fn validate(&self) -> Result<()> {
        if !(self.magnitude > 0.0) {
            return Err(Error::InvalidBaseline {
                name: self.name.clone(),
                reason: format!("magnitude must be positive, got {}", self.magnitude),
            });
        }
        let expected = match self.kind {
            BaselineKind::DevicePower => Dimension::Power,
            _ => Dimension::Energy,
        };
        if self.unit.dimension() != expected {
            return Err(Error::InvalidBaseline {
                name: self.name.clone(),
                reason: format!("kind {:?} is incompatible with unit {}", self.kind, self.unit),
            });
        }
        Ok(())
    }

    pub fn quantity(&self) -> Quantity {
        Quantity::new(self.magnitude, self.unit)
    }

    fn default_decimals(&self) -> u32 {
        match self.kind {
            BaselineKind::AnnualEnergy => 6,
            BaselineKind::PerCapitaEnergy | BaselineKind::DevicePower => 2,
            BaselineKind::ReferenceEnergy => 3,
        }
    }

    pub fn decimals(&self) -> u32 {
        self.display_decimals.unwrap_or_else(|| self.default_decimals())
    }
}

/// The baselines shipped with the toolkit: Bitcoin's annual consumption,
/// the German per-capita figure, a 60 W bulb and a 1 J LED-second.
pub fn default_baselines() -> Vec<Baseline> {
    let baselines: Vec<Baseline> =
        serde_json::from_str(include_str!("../data/baselines.json")).expect("bundled baselines parse");
    baselines
}

/// Parse and validate a baselines file.
pub fn parse_baselines(json: &str) -> Result<Vec<Baseline>> {
    let baselines: Vec<Baseline> = serde_json::from_str(json)?;
    for b in &baselines {
        b.validate()?;
    }
    Ok(baselines)
}

/// An annual estimate as a percentage of an annual-energy or per-capita
/// baseline.
pub fn compare_annual(estimate: &AnnualEstimate, baseline: &Baseline) -> Result<f64> {
    baseline.validate()?;
    match baseline.kind {
        BaselineKind::AnnualEnergy | BaselineKind::PerCapitaEnergy => {}
        _ => {
            return Err(Error::DimensionMismatch {
                from: "annual energy estimate".into(),
                to: format!("{:?} baseline '{}'", baseline.kind, baseline.name),
            })
        }
    }
    let baseline_j = baseline.quantity().joules()?;
    Ok(estimate.total_j / baseline_j * 100.0)
}

/// An energy figure as a percentage of running a 1 W LED for one second.
pub fn compare_energy_to_led_second(e_j: f64) -> f64 {
    e_j / 1.0 * 100.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonEntry {
    pub baseline: String,
    pub percent: f64,
    pub display_decimals: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub subject: String,
    pub entries: Vec<ComparisonEntry>,
}

/// Compare an annual estimate against every applicable baseline in the
/// list, in list order. Power and single-event baselines do not apply to an
/// annual figure and are skipped.
pub fn compare_report(
    subject: impl Into<String>,
    estimate: &AnnualEstimate,
    baselines: &[Baseline],
) -> Result<ComparisonReport> {
    let mut entries = Vec::new();
    for b in baselines {
        b.validate()?;
        match b.kind {
            BaselineKind::AnnualEnergy | BaselineKind::PerCapitaEnergy => {
                entries.push(ComparisonEntry {
                    baseline: b.name.clone(),
                    percent: compare_annual(estimate, b)?,
                    display_decimals: b.decimals(),
                });
            }
            BaselineKind::DevicePower | BaselineKind::ReferenceEnergy => {}
        }
    }
    Ok(ComparisonReport { subject: subject.into(), entries })
}

/// One renderable block of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Section {
    Scenarios(Vec<ScenarioStats>),
    Metrics(NormalizedTables),
    Annual(AnnualEstimate),
    Comparisons(ComparisonReport),
}

fn fmt_percent(value: f64, decimals: u32) -> String {
    format!("{value:.prec$}%", prec = decimals as usize)
}

/// One-line summary of a scenario, e.g.
/// `reference: 2.648 W (min 2.494, max 2.914, σ 0.107, SE 0.015)`.
pub fn scenario_line(stats: &ScenarioStats) -> String {
    format!(
        "{}: {:.3} W (min {:.3}, max {:.3}, σ {:.3}, SE {:.3})",
        stats.label,
        stats.mean_power_w,
        stats.min_trial_w,
        stats.max_trial_w,
        stats.stddev_w,
        stats.stderr_w
    )
}

/// Render sections to plain text with the display precisions used in the
/// tables this mirrors.
pub fn render_text(sections: &[Section]) -> Result<String> {
    if sections.is_empty() {
        return Err(Error::EmptyReport);
    }
    let mut out = String::new();
    for section in sections {
        match section {
            Section::Scenarios(stats) => {
                out.push_str("Scenario statistics\n");
                for s in stats {
                    out.push_str(&format!(
                        "  {} [{} trials] — {:.2}% of a {:.0} W bulb\n",
                        scenario_line(s),
                        s.trials,
                        bulb_fraction(s.mean_power_w, BULB_W),
                        BULB_W
                    ));
                }
            }
            Section::Metrics(t) => {
                out.push_str(&format!("Per-node power above reference [mW] ({} nodes)\n", t.node_count));
                out.push_str(&format!("  resting: {:.2}\n", t.resting_above_reference_mw));
                for rv in &t.loaded_above_reference_mw {
                    out.push_str(&format!("  {} mps: {:.2}\n", rv.rate_mps, rv.value));
                }
                out.push_str("Per-node power above resting [mW]\n");
                for rv in &t.loaded_above_resting_mw {
                    out.push_str(&format!("  {} mps: {:.2}\n", rv.rate_mps, rv.value));
                }
                out.push_str("Energy per message [mJ]\n");
                for rv in &t.energy_per_message_mj {
                    out.push_str(&format!("  {} mps: {:.2}\n", rv.rate_mps, rv.value));
                }
            }
            Section::Annual(est) => {
                out.push_str("Annual energy estimate\n");
                out.push_str(&format!(
                    "  base:     {:.3} J ({:.2} kWh)\n",
                    est.e_base_j,
                    joules_to_kwh(est.e_base_j)
                ));
                out.push_str(&format!(
                    "  messages: {:.3} J ({:.2} kWh)\n",
                    est.e_messages_j,
                    joules_to_kwh(est.e_messages_j)
                ));
                out.push_str(&format!(
                    "  total:    {:.3} J ({:.2} kWh)\n",
                    est.total_j,
                    joules_to_kwh(est.total_j)
                ));
                for c in &est.classes {
                    out.push_str(&format!(
                        "  class {}: base {:.3} J, messages {:.3} J\n",
                        c.name, c.e_base_j, c.e_messages_j
                    ));
                }
            }
            Section::Comparisons(report) => {
                out.push_str(&format!("Comparisons — {}\n", report.subject));
                for e in &report.entries {
                    out.push_str(&format!(
                        "  {}: {}\n",
                        e.baseline,
                        fmt_percent(e.percent, e.display_decimals)
                    ));
                }
            }
        }
    }
    Ok(out)
}

#[derive(Serialize)]
struct ReportDoc<'a> {
    schema_version: u32,
    sections: &'a [Section],
}

/// Render sections to a JSON document with full-precision numbers and a
/// schema version field. Key order is fixed by the section types.
pub fn render_json(sections: &[Section]) -> Result<String> {
    if sections.is_empty() {
        return Err(Error::EmptyReport);
    }
    Ok(serde_json::to_string_pretty(&ReportDoc {
        schema_version: REPORT_SCHEMA_VERSION,
        sections,
    })?)
}
