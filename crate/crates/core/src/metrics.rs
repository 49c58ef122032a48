//! Derived power and energy metrics for a measured scenario set.
//!
//! A [`ScenarioSet`] holds the reference (bare device), resting (network at
//! base activity) and loaded scenario statistics for one fleet measurement.
//! From it we derive per-node power above the reference and resting
//! baselines, marginal energy per message at each measured rate, and an
//! interpolatable rate-to-energy curve.

use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::measurement::{check_node_uniformity, NodeAnalytics, ScenarioStats, UniformityReport};

/// Selects either the resting scenario or a loaded rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScenarioKey {
    Resting,
    Rate(f64),
}

/// Reference, resting and loaded statistics for one measured fleet.
///
/// Construction fails if resting power is below the reference or any loaded
/// power is below resting: negative normalized power indicates measurement
/// error, which must surface instead of being clamped.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSet {
    node_count: u32,
    reference: ScenarioStats,
    resting: ScenarioStats,
    loaded: Vec<(f64, ScenarioStats)>,
    analytics: Vec<NodeAnalytics>,
}

impl ScenarioSet {
    pub fn new(
        node_count: u32,
        reference: ScenarioStats,
        resting: ScenarioStats,
        mut loaded: Vec<(f64, ScenarioStats)>,
        analytics: Vec<NodeAnalytics>,
    ) -> Result<Self> {
        if node_count < 1 {
            return Err(Error::InvalidStats {
                label: "scenario set".into(),
                reason: "node_count must be >= 1".into(),
            });
        }
        reference.validate()?;
        resting.validate()?;
        if resting.mean_power_w < reference.mean_power_w {
            return Err(Error::NegativeNormalization {
                label: resting.label.clone(),
                value_w: resting.mean_power_w,
                baseline_w: reference.mean_power_w,
            });
        }
        loaded.sort_by(|a, b| a.0.total_cmp(&b.0));
        for (rate, stats) in &loaded {
            if *rate <= 0.0 {
                return Err(Error::NonPositiveRate { rate: *rate });
            }
            stats.validate()?;
            if stats.mean_power_w < resting.mean_power_w {
                return Err(Error::NegativeNormalization {
                    label: stats.label.clone(),
                    value_w: stats.mean_power_w,
                    baseline_w: resting.mean_power_w,
                });
            }
        }
        if loaded.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidStats {
                label: "scenario set".into(),
                reason: "duplicate loaded rate".into(),
            });
        }
        Ok(ScenarioSet { node_count, reference, resting, loaded, analytics })
    }

    pub fn node_count(&self) -> u32 {
        self.node_count
    }

    pub fn reference(&self) -> &ScenarioStats {
        &self.reference
    }

    pub fn resting(&self) -> &ScenarioStats {
        &self.resting
    }

    pub fn loaded(&self) -> &[(f64, ScenarioStats)] {
        &self.loaded
    }

    pub fn rates(&self) -> impl Iterator<Item = f64> + '_ {
        self.loaded.iter().map(|(r, _)| *r)
    }

    pub fn analytics(&self) -> &[NodeAnalytics] {
        &self.analytics
    }

    fn loaded_stats(&self, rate: f64) -> Result<&ScenarioStats> {
        self.loaded
            .iter()
            .find(|(r, _)| *r == rate)
            .map(|(_, s)| s)
            .ok_or(Error::UnknownRate { rate })
    }

    /// Per-node watts above the reference consumption.
    pub fn normalize_reference(&self, key: ScenarioKey) -> Result<f64> {
        let power = match key {
            ScenarioKey::Resting => self.resting.mean_power_w,
            ScenarioKey::Rate(rate) => self.loaded_stats(rate)?.mean_power_w,
        };
        Ok((power - self.reference.mean_power_w) / self.node_count as f64)
    }

    /// Per-node watts above the resting consumption.
    pub fn normalize_resting(&self, rate: f64) -> Result<f64> {
        let power = self.loaded_stats(rate)?.mean_power_w;
        Ok((power - self.resting.mean_power_w) / self.node_count as f64)
    }

    /// Marginal energy per message at a measured rate, in joules.
    ///
    /// Equals (P_total - P_rest) / (node_count * rate); the reference terms
    /// of the two-bracket form cancel.
    pub fn energy_per_message(&self, rate: f64) -> Result<f64> {
        if rate <= 0.0 {
            return Err(Error::NonPositiveRate { rate });
        }
        let power = self.loaded_stats(rate)?.mean_power_w;
        Ok((power - self.resting.mean_power_w) / (self.node_count as f64 * rate))
    }

    /// The measured rate-to-energy-per-message curve, one point per loaded
    /// scenario.
    pub fn per_message_curve(&self) -> Result<PerMessageCurve> {
        let points = self
            .rates()
            .map(|rate| {
                Ok(CurvePoint {
                    rate_mps: rate,
                    energy_j: self.energy_per_message(rate)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        PerMessageCurve::new(points)
    }
}

// The on-disk form keys loaded scenarios by their rate, so (de)serialization
// goes through a rate-string map rather than the sorted vector.
impl Serialize for ScenarioSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct LoadedMap<'a>(&'a [(f64, ScenarioStats)]);
        impl Serialize for LoadedMap<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = serializer.serialize_map(Some(self.0.len()))?;
                for (rate, stats) in self.0 {
                    map.serialize_entry(&format!("{rate}"), stats)?;
                }
                map.end()
            }
        }
        let entries = if self.analytics.is_empty() { 4 } else { 5 };
        let mut map = serializer.serialize_map(Some(entries))?;
        map.serialize_entry("node_count", &self.node_count)?;
        map.serialize_entry("reference", &self.reference)?;
        map.serialize_entry("resting", &self.resting)?;
        map.serialize_entry("loaded", &LoadedMap(&self.loaded))?;
        if !self.analytics.is_empty() {
            map.serialize_entry("analytics", &self.analytics)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for ScenarioSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct SetVisitor;
        impl<'de> Visitor<'de> for SetVisitor {
            type Value = ScenarioSet;

            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a scenario set object")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> std::result::Result<Self::Value, A::Error> {
                use serde::de::Error as DeError;
                let mut node_count: Option<u32> = None;
                let mut reference: Option<ScenarioStats> = None;
                let mut resting: Option<ScenarioStats> = None;
                let mut loaded: Option<std::collections::BTreeMap<String, ScenarioStats>> = None;
                let mut analytics: Vec<NodeAnalytics> = Vec::new();
                while let Some(key) = map.next_key::<String>()? {
                    match key.as_str() {
                        "node_count" => node_count = Some(map.next_value()?),
                        "reference" => reference = Some(map.next_value()?),
                        "resting" => resting = Some(map.next_value()?),
                        "loaded" => loaded = Some(map.next_value()?),
                        "analytics" => analytics = map.next_value()?,
                        other => return Err(DeError::unknown_field(other, &[
                            "node_count", "reference", "resting", "loaded", "analytics",
                        ])),
                    }
                }
                let node_count = node_count.ok_or_else(|| DeError::missing_field("node_count"))?;
                let reference = reference.ok_or_else(|| DeError::missing_field("reference"))?;
                let resting = resting.ok_or_else(|| DeError::missing_field("resting"))?;
                let loaded = loaded.ok_or_else(|| DeError::missing_field("loaded"))?;
                let loaded = loaded
                    .into_iter()
                    .map(|(k, v)| {
                        let rate: f64 = k
                            .parse()
                            .map_err(|_| DeError::custom(format!("loaded key '{k}' is not a rate")))?;
                        Ok((rate, v))
                    })
                    .collect::<std::result::Result<Vec<_>, A::Error>>()?;
                ScenarioSet::new(node_count, reference, resting, loaded, analytics)
                    .map_err(|e| DeError::custom(e.to_string()))
            }
        }
        deserializer.deserialize_map(SetVisitor)
    }
}

/// Gate for per-node division: a fleet measurement may only be divided by
/// the node count after a passing uniformity report, or with an explicit
/// override. Returns the report when one was computed.
pub fn ensure_per_node_division(
    node_count: u32,
    analytics: &[NodeAnalytics],
    tol: f64,
    allow_nonuniform: bool,
) -> Result<Option<UniformityReport>> {
    if node_count <= 1 {
        return Ok(None);
    }
    if analytics.len() < 2 {
        return if allow_nonuniform { Ok(None) } else { Err(Error::MissingAnalytics) };
    }
    let report = check_node_uniformity(analytics, tol)?;
    if report.passed || allow_nonuniform {
        Ok(Some(report))
    } else {
        Err(Error::NonUniformNodes { max_spread: report.max_spread, tol })
    }
}

/// One measured (rate, energy-per-message) point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub rate_mps: f64,
    pub energy_j: f64,
}

/// Measured energy-per-message points, strictly increasing in rate, with
/// clamped piecewise-linear interpolation between them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<CurvePoint>", into = "Vec<CurvePoint>")]
pub struct PerMessageCurve {
    points: Vec<CurvePoint>,
}

impl PerMessageCurve {
    pub fn new(points: Vec<CurvePoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyCurve);
        }
        for (i, p) in points.iter().enumerate() {
            if !(p.rate_mps > 0.0) || !p.rate_mps.is_finite() {
                return Err(Error::InvalidCurvePoint {
                    index: i,
                    reason: format!("rate must be positive, got {}", p.rate_mps),
                });
            }
            if !(p.energy_j > 0.0) || !p.energy_j.is_finite() {
                return Err(Error::InvalidCurvePoint {
                    index: i,
                    reason: format!("energy must be positive, got {}", p.energy_j),
                });
            }
            if i > 0 && p.rate_mps <= points[i - 1].rate_mps {
                return Err(Error::InvalidCurvePoint {
                    index: i,
                    reason: "rates must be strictly increasing".into(),
                });
            }
        }
        Ok(PerMessageCurve { points })
    }

    pub fn points(&self) -> &[CurvePoint] {
        &self.points
    }

    /// Energy per message at a rate, in joules. Exact at knots; linear
    /// between adjacent knots; clamped to the endpoint values outside the
    /// measured range.
    pub fn interpolate(&self, rate_mps: f64) -> Result<f64> {
        if rate_mps <= 0.0 {
            return Err(Error::NonPositiveRate { rate: rate_mps });
        }
        let first = &self.points[0];
        let last = &self.points[self.points.len() - 1];
        if rate_mps <= first.rate_mps {
            return Ok(first.energy_j);
        }
        if rate_mps >= last.rate_mps {
            return Ok(last.energy_j);
        }
        let hi = self.points.partition_point(|p| p.rate_mps < rate_mps);
        let (a, b) = (&self.points[hi - 1], &self.points[hi]);
        if rate_mps == b.rate_mps {
            return Ok(b.energy_j);
        }
        let t = (rate_mps - a.rate_mps) / (b.rate_mps - a.rate_mps);
        Ok(a.energy_j + t * (b.energy_j - a.energy_j))
    }
}

impl TryFrom<Vec<CurvePoint>> for PerMessageCurve {
    type Error = Error;
    fn try_from(points: Vec<CurvePoint>) -> Result<Self> {
        PerMessageCurve::new(points)
    }
}

impl From<PerMessageCurve> for Vec<CurvePoint> {
    fn from(curve: PerMessageCurve) -> Self {
        curve.points
    }
}

/// Divide a fleet-wide power figure among its nodes.
pub fn per_node_power(total_w: f64, node_count: u32) -> f64 {
    total_w / node_count as f64
}

/// Total energy a message costs the network: issuance once, processing by
/// each of the remaining nodes.
pub fn message_total_energy(e_issue_j: f64, e_proc_j: f64, n_nodes: u64) -> f64 {
    e_issue_j + (n_nodes - 1) as f64 * e_proc_j
}

/// Signed percentage difference of a candidate against a baseline.
pub fn percent_difference(candidate: f64, baseline: f64) -> Result<f64> {
    if baseline == 0.0 {
        return Err(Error::ZeroBaseline);
    }
    Ok((candidate - baseline) / baseline * 100.0)
}

/// Power draw of a common light bulb, used to make figures tangible.
pub const BULB_W: f64 = 60.0;

/// A power figure as a percentage of a light bulb's draw.
pub fn bulb_fraction(power_w: f64, bulb_w: f64) -> f64 {
    power_w / bulb_w * 100.0
}

/// A rate paired with a derived value, used in table-shaped outputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateValue {
    pub rate_mps: f64,
    pub value: f64,
}

/// The three normalization tables plus the derived per-message curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizedTables {
    pub node_count: u32,
    /// Resting power per node above the reference, in mW.
    pub resting_above_reference_mw: f64,
    /// Loaded power per node above the reference, in mW.
    pub loaded_above_reference_mw: Vec<RateValue>,
    /// Loaded power per node above resting, in mW.
    pub loaded_above_resting_mw: Vec<RateValue>,
    /// Marginal energy per message, in mJ.
    pub energy_per_message_mj: Vec<RateValue>,
    /// Same data as a curve in SI units, for interpolation.
    pub curve: PerMessageCurve,
}

/// Derive every normalized table from a scenario set in one pass.
pub fn derive_tables(set: &ScenarioSet) -> Result<NormalizedTables> {
    let mut above_ref = Vec::new();
    let mut above_rest = Vec::new();
    let mut per_message = Vec::new();
    for rate in set.rates() {
        above_ref.push(RateValue {
            rate_mps: rate,
            value: set.normalize_reference(ScenarioKey::Rate(rate))? * 1e3,
        });
        above_rest.push(RateValue {
            rate_mps: rate,
            value: set.normalize_resting(rate)? * 1e3,
        });
        per_message.push(RateValue {
            rate_mps: rate,
            value: set.energy_per_message(rate)? * 1e3,
        });
    }
    Ok(NormalizedTables {
        node_count: set.node_count(),
        resting_above_reference_mw: set.normalize_reference(ScenarioKey::Resting)? * 1e3,
        loaded_above_reference_mw: above_ref,
        loaded_above_resting_mw: above_rest,
        energy_per_message_mj: per_message,
        curve: set.per_message_curve()?,
    })
}
