//! Browser demo bindings. Three operations from the core crate are exposed
//! to JavaScript: deriving per-message metrics from a scenario set,
//! projecting an annual fleet total, and comparing an estimate against the
//! bundled baselines. The inner functions are plain Rust so they can be
//! unit-tested on the host; the `wasm_bindgen` wrappers only exist for the
//! `wasm32` target.

use wattrace_core::metrics::{derive_tables, ScenarioSet};
use wattrace_core::projection::{annual_total, Fleet, RateProfile};
use wattrace_core::report::{compare_report, default_baselines};

fn err_string(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Parse a scenario-set JSON document and return the derived normalization
/// tables and per-message energies as JSON.
pub fn derive_metrics_json(scenario_set: &str) -> Result<String, String> {
    let set: ScenarioSet = serde_json::from_str(scenario_set).map_err(err_string)?;
    let tables = derive_tables(&set).map_err(err_string)?;
    serde_json::to_string_pretty(&tables).map_err(err_string)
}

/// Project a fleet's annual energy at a constant message rate and return the
/// estimate document as JSON.
pub fn project_annual_json(fleet: &str, rate_mps: f64, days: usize) -> Result<String, String> {
    let fleet: Fleet = serde_json::from_str(fleet).map_err(err_string)?;
    let profile = RateProfile::constant(rate_mps, days).map_err(err_string)?;
    let estimate = annual_total(&fleet, &profile).map_err(err_string)?;
    serde_json::to_string_pretty(&estimate.to_doc()).map_err(err_string)
}

/// Project and immediately compare against the bundled baselines, returning
/// `{estimate, comparisons}` as JSON.
pub fn project_and_compare_json(
    fleet: &str,
    rate_mps: f64,
    days: usize,
) -> Result<String, String> {
    let fleet: Fleet = serde_json::from_str(fleet).map_err(err_string)?;
    let profile = RateProfile::constant(rate_mps, days).map_err(err_string)?;
    let estimate = annual_total(&fleet, &profile).map_err(err_string)?;
    let report =
        compare_report("projected fleet", &estimate, &default_baselines()).map_err(err_string)?;
    let doc = serde_json::json!({
        "estimate": estimate.to_doc(),
        "comparisons": report,
    });
    serde_json::to_string_pretty(&doc).map_err(err_string)
}

#[cfg(target_arch = "wasm32")]
mod bindings {
    use wasm_bindgen::prelude::*;

    #[wasm_bindgen]
    pub fn derive_metrics(scenario_set: &str) -> Result<String, JsValue> {
        super::derive_metrics_json(scenario_set).map_err(|e| JsValue::from_str(&e))
    }

    #[wasm_bindgen]
    pub fn project_annual(fleet: &str, rate_mps: f64, days: usize) -> Result<String, JsValue> {
        super::project_annual_json(fleet, rate_mps, days).map_err(|e| JsValue::from_str(&e))
    }

    #[wasm_bindgen]
    pub fn project_and_compare(
        fleet: &str,
        rate_mps: f64,
        days: usize,
    ) -> Result<String, JsValue> {
        super::project_and_compare_json(fleet, rate_mps, days).map_err(|e| JsValue::from_str(&e))
    }
}
