//! Exact conversions between the power and energy units used in reports.
//!
//! 1 W = 1 J/s, so 1 J = 1 Ws, 1 Wh = 3600 J, 1 kWh = 3.6e6 J and
//! 1 TWh = 3.6e15 J. Conversions are pure factor scalings and round-trip
//! to within one ulp.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Unit {
    #[serde(rename = "J")]
    Joule,
    #[serde(rename = "Ws")]
    WattSecond,
    #[serde(rename = "Wh")]
    WattHour,
    #[serde(rename = "kWh")]
    KilowattHour,
    #[serde(rename = "TWh")]
    TerawattHour,
    #[serde(rename = "W")]
    Watt,
    #[serde(rename = "mW")]
    Milliwatt,
    #[serde(rename = "kW")]
    Kilowatt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Energy,
    Power,
}

impl Unit {
    pub fn dimension(self) -> Dimension {
        match self {
            Unit::Joule | Unit::WattSecond | Unit::WattHour | Unit::KilowattHour | Unit::TerawattHour => {
                Dimension::Energy
            }
            Unit::Watt | Unit::Milliwatt | Unit::Kilowatt => Dimension::Power,
        }
    }

    /// Factor to the SI base unit of the dimension (J or W).
    pub fn base_factor(self) -> f64 {
        match self {
            Unit::Joule | Unit::WattSecond => 1.0,
            Unit::WattHour => 3600.0,
            Unit::KilowattHour => 3.6e6,
            Unit::TerawattHour => 3.6e15,
            Unit::Watt => 1.0,
            Unit::Milliwatt => 1e-3,
            Unit::Kilowatt => 1e3,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Unit::Joule => "J",
            Unit::WattSecond => "Ws",
            Unit::WattHour => "Wh",
            Unit::KilowattHour => "kWh",
            Unit::TerawattHour => "TWh",
            Unit::Watt => "W",
            Unit::Milliwatt => "mW",
            Unit::Kilowatt => "kW",
        }
    }
}

impl std::fmt::Display for Unit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.symbol())
    }
}

/// A magnitude paired with its unit. Converting across dimensions is an
/// error; power-to-energy needs a duration and is a different operation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quantity {
    pub magnitude: f64,
    pub unit: Unit,
}

impl Quantity {
    pub fn new(magnitude: f64, unit: Unit) -> Self {
        Quantity { magnitude, unit }
    }

    pub fn convert(self, target: Unit) -> Result<Quantity> {
        if self.unit.dimension() != target.dimension() {
            return Err(Error::DimensionMismatch {
                from: self.unit.symbol().to_string(),
                to: target.symbol().to_string(),
            });
        }
        Ok(Quantity {
            magnitude: self.magnitude * self.unit.base_factor() / target.base_factor(),
            unit: target,
        })
    }

    pub fn joules(self) -> Result<f64> {
        Ok(self.convert(Unit::Joule)?.magnitude)
    }

    pub fn watts(self) -> Result<f64> {
        Ok(self.convert(Unit::Watt)?.magnitude)
    }
}

pub fn joules_to_kwh(j: f64) -> f64 {
    j / 3.6e6
}

pub fn joules_to_twh(j: f64) -> f64 {
    j / 3.6e15
}
