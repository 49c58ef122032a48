//! Annualized whole-network energy projection.
//!
//! The fleet is split into hardware classes, each with a node count, a PUE
//! multiplier, a base power draw and a measured per-message energy curve.
//! The annual total is the base term (every node idling for a year) plus
//! the message term (per-message energy times the daily rate, summed over
//! the modeled period), both weighted by PUE.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measurement::ScenarioStats;
use crate::metrics::PerMessageCurve;
use crate::units::{joules_to_kwh, joules_to_twh};

pub const SECONDS_PER_DAY: f64 = 86_400.0;
pub const DAYS_PER_YEAR: usize = 365;

/// A group of nodes sharing a device type, base power, curve and PUE.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "HardwareClassDoc", into = "HardwareClassDoc")]
pub struct HardwareClass {
    pub name: String,
    pub pue: f64,
    pub p_base_w: f64,
    pub node_count: u64,
    pub curve: PerMessageCurve,
}

#[derive(Serialize, Deserialize)]
struct HardwareClassDoc {
    name: String,
    pue: f64,
    p_base_w: f64,
    node_count: u64,
    curve: Vec<crate::metrics::CurvePoint>,
}

impl TryFrom<HardwareClassDoc> for HardwareClass {
    type Error = Error;
    fn try_from(doc: HardwareClassDoc) -> Result<Self> {
        HardwareClass::new(doc.name, doc.pue, doc.p_base_w, doc.node_count, PerMessageCurve::new(doc.curve)?)
    }
}

impl From<HardwareClass> for HardwareClassDoc {
    fn from(c: HardwareClass) -> Self {
        HardwareClassDoc {
            name: c.name,
            pue: c.pue,
            p_base_w: c.p_base_w,
            node_count: c.node_count,
            curve: c.curve.points().to_vec(),
        }
    }
}

impl HardwareClass {
    pub fn new(
        name: impl Into<String>,
        pue: f64,
        p_base_w: f64,
        node_count: u64,
        curve: PerMessageCurve,
    ) -> Result<Self> {
        let name = name.into();
        if !(pue >= 1.0) {
            return Err(Error::InvalidFleet(format!("class '{name}': pue must be >= 1, got {pue}")));
        }
        if !(p_base_w > 0.0) {
            return Err(Error::InvalidFleet(format!(
                "class '{name}': p_base_w must be positive, got {p_base_w}"
            )));
        }
        if node_count < 1 {
            return Err(Error::InvalidFleet(format!("class '{name}': node_count must be >= 1")));
        }
        Ok(HardwareClass { name, pue, p_base_w, node_count, curve })
    }
}

/// A non-empty set of hardware classes with unique names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FleetDoc", into = "FleetDoc")]
pub struct Fleet {
    classes: Vec<HardwareClass>,
}

#[derive(Serialize, Deserialize)]
struct FleetDoc {
    classes: Vec<HardwareClass>,
}

impl TryFrom<FleetDoc> for Fleet {
    type Error = Error;
    fn try_from(doc: FleetDoc) -> Result<Self> {
        Fleet::new(doc.classes)
    }
}

impl From<Fleet> for FleetDoc {
    fn from(f: Fleet) -> Self {
        FleetDoc { classes: f.classes }
    }
}

impl Fleet {
    pub fn new(classes: Vec<HardwareClass>) -> Result<Self> {
        if classes.is_empty() {
            return Err(Error::InvalidFleet("fleet must have at least one class".into()));
        }
        for (i, c) in classes.iter().enumerate() {
            if classes[..i].iter().any(|other| other.name == c.name) {
                return Err(Error::InvalidFleet(format!("duplicate class name '{}'", c.name)));
            }
        }
        Ok(Fleet { classes })
    }

    pub fn classes(&self) -> &[HardwareClass] {
        &self.classes
    }

    pub fn n_total(&self) -> u64 {
        self.classes.iter().map(|c| c.node_count).sum()
    }
}

/// Average message rate per day over the modeled period. 365 entries model
/// a year; other lengths are treated as a period with the same per-day
/// arithmetic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RateProfileDoc", into = "Vec<f64>")]
pub struct RateProfile {
    daily_rates_mps: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RateProfileDoc {
    Daily(Vec<f64>),
    Constant { constant_mps: f64, days: usize },
}

impl TryFrom<RateProfileDoc> for RateProfile {
    type Error = Error;
    fn try_from(doc: RateProfileDoc) -> Result<Self> {
        match doc {
            RateProfileDoc::Daily(rates) => RateProfile::new(rates),
            RateProfileDoc::Constant { constant_mps, days } => RateProfile::constant(constant_mps, days),
        }
    }
}

impl From<RateProfile> for Vec<f64> {
    fn from(p: RateProfile) -> Self {
        p.daily_rates_mps
    }
}

impl RateProfile {
    pub fn new(daily_rates_mps: Vec<f64>) -> Result<Self> {
        if daily_rates_mps.is_empty() {
            return Err(Error::InvalidProfile("profile must cover at least one day".into()));
        }
        if let Some(bad) = daily_rates_mps.iter().find(|r| !(**r >= 0.0) || !r.is_finite()) {
            return Err(Error::InvalidProfile(format!("daily rate must be non-negative, got {bad}")));
        }
        Ok(RateProfile { daily_rates_mps })
    }

    pub fn constant(rate_mps: f64, days: usize) -> Result<Self> {
        RateProfile::new(vec![rate_mps; days])
    }

    /// A full year at one constant rate.
    pub fn constant_year(rate_mps: f64) -> Result<Self> {
        RateProfile::constant(rate_mps, DAYS_PER_YEAR)
    }

    pub fn daily_rates(&self) -> &[f64] {
        &self.daily_rates_mps
    }

    pub fn days(&self) -> usize {
        self.daily_rates_mps.len()
    }
}

/// Per-class share of the base and message terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassBreakdown {
    pub name: String,
    pub e_base_j: f64,
    pub e_messages_j: f64,
}

/// Annual energy estimate: base term, message term and their sum, with the
/// per-class split of both.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnualEstimate {
    pub e_base_j: f64,
    pub e_messages_j: f64,
    pub total_j: f64,
    pub classes: Vec<ClassBreakdown>,
}

/// Annual base-term energy of one class:
/// pue * p_base * node_count * 86400 s * 365.
pub fn e_base_class(class: &HardwareClass) -> f64 {
    class.pue * class.p_base_w * class.node_count as f64 * SECONDS_PER_DAY * DAYS_PER_YEAR as f64
}

/// Annual base-term energy of the whole fleet.
pub fn e_base(fleet: &Fleet) -> f64 {
    // Classes sum in declaration order for bit-identical totals.
    fleet.classes().iter().map(e_base_class).sum()
}

/// Message-processing energy of one class over the profile, before the PUE
/// weighting. Days at rate zero contribute nothing and do not consult the
/// curve.
pub fn e_messages_class(class: &HardwareClass, profile: &RateProfile) -> Result<f64> {
    let mut total = 0.0;
    for &rate in profile.daily_rates() {
        if rate == 0.0 {
            continue;
        }
        let e_per_message = class.curve.interpolate(rate)?;
        total += class.node_count as f64 * e_per_message * rate * SECONDS_PER_DAY;
    }
    Ok(total)
}

/// PUE-weighted message-processing energy of the whole fleet.
pub fn e_messages_total(fleet: &Fleet, profile: &RateProfile) -> Result<f64> {
    let mut total = 0.0;
    for class in fleet.classes() {
        total += class.pue * e_messages_class(class, profile)?;
    }
    Ok(total)
}

/// Full annual estimate with per-class breakdown.
pub fn annual_total(fleet: &Fleet, profile: &RateProfile) -> Result<AnnualEstimate> {
    let mut classes = Vec::with_capacity(fleet.classes().len());
    let mut base = 0.0;
    let mut messages = 0.0;
    for class in fleet.classes() {
        let class_base = e_base_class(class);
        let class_messages = class.pue * e_messages_class(class, profile)?;
        base += class_base;
        messages += class_messages;
        classes.push(ClassBreakdown {
            name: class.name.clone(),
            e_base_j: class_base,
            e_messages_j: class_messages,
        });
    }
    Ok(AnnualEstimate {
        e_base_j: base,
        e_messages_j: messages,
        total_j: base + messages,
        classes,
    })
}

/// Base power of a node: the bare-device reference plus the per-node
/// overhead of running the node software at rest.
pub fn p_base_from_measurement(reference: &ScenarioStats, resting_per_node_above_ref_w: f64) -> f64 {
    reference.mean_power_w + resting_per_node_above_ref_w
}

/// Energy rendered in joules, kWh and TWh for output documents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyDoc {
    pub j: f64,
    pub kwh: f64,
    pub twh: f64,
}

impl EnergyDoc {
    pub fn from_joules(j: f64) -> Self {
        EnergyDoc { j, kwh: joules_to_kwh(j), twh: joules_to_twh(j) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassBreakdownDoc {
    pub name: String,
    pub e_base: EnergyDoc,
    pub e_messages: EnergyDoc,
}

/// The serialized form of an annual estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnualEstimateDoc {
    pub schema_version: u32,
    pub e_base: EnergyDoc,
    pub e_messages: EnergyDoc,
    pub total: EnergyDoc,
    pub classes: Vec<ClassBreakdownDoc>,
}

pub const ESTIMATE_SCHEMA_VERSION: u32 = 1;

impl AnnualEstimate {
    pub fn to_doc(&self) -> AnnualEstimateDoc {
        AnnualEstimateDoc {
            schema_version: ESTIMATE_SCHEMA_VERSION,
            e_base: EnergyDoc::from_joules(self.e_base_j),
            e_messages: EnergyDoc::from_joules(self.e_messages_j),
            total: EnergyDoc::from_joules(self.total_j),
            classes: self
                .classes
                .iter()
                .map(|c| ClassBreakdownDoc {
                    name: c.name.clone(),
                    e_base: EnergyDoc::from_joules(c.e_base_j),
                    e_messages: EnergyDoc::from_joules(c.e_messages_j),
                })
                .collect(),
        }
    }

    pub fn from_doc(doc: &AnnualEstimateDoc) -> Self {
        AnnualEstimate {
            e_base_j: doc.e_base.j,
            e_messages_j: doc.e_messages.j,
            total_j: doc.total.j,
            classes: doc
                .classes
                .iter()
                .map(|c| ClassBreakdown {
                    name: c.name.clone(),
                    e_base_j: c.e_base.j,
                    e_messages_j: c.e_messages.j,
                })
                .collect(),
        }
    }
}
