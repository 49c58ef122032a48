use std::path::Path;
use std::process::{Command, Output};

pub fn wattrace(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wattrace"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("spawn wattrace")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

pub fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

pub fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

/// The measured scenario-set document: three nodes, reference/resting and
/// the 50/100/200 mps loads, with the per-node analytics attached.
pub const MEASURED_SET: &str = r#"{
  "node_count": 3,
  "reference": {"label":"reference","trials":50,"mean_power_w":2.648,"min_trial_w":2.494,"max_trial_w":2.914,"stddev_w":0.107,"stderr_w":0.015},
  "resting": {"label":"resting","trials":50,"mean_power_w":2.745,"min_trial_w":2.587,"max_trial_w":3.140,"stddev_w":0.146,"stderr_w":0.021},
  "loaded": {
    "50": {"label":"50mps","trials":50,"mean_power_w":3.761,"min_trial_w":3.279,"max_trial_w":4.312,"stddev_w":0.250,"stderr_w":0.035},
    "100": {"label":"100mps","trials":50,"mean_power_w":4.080,"min_trial_w":3.796,"max_trial_w":4.549,"stddev_w":0.178,"stderr_w":0.025},
    "200": {"label":"200mps","trials":25,"mean_power_w":4.268,"min_trial_w":4.101,"max_trial_w":4.445,"stddev_w":0.070,"stderr_w":0.014}
  },
  "analytics": [
    {"node_id":"9311","messages_in_db":4203,"scheduled_messages":4540},
    {"node_id":"9312","messages_in_db":4207,"scheduled_messages":4544},
    {"node_id":"9313","messages_in_db":4204,"scheduled_messages":4541}
  ]
}"#;

/// The hypothetical 450-node network configuration.
pub const HYPOTHETICAL_FLEET: &str = r#"{
  "classes": [
    {"name":"raspberry-pi-4b","pue":1.59,"p_base_w":2.680131,"node_count":450,
     "curve":[{"rate_mps":50.0,"energy_j":0.00678}]}
  ]
}"#;

pub const CONSTANT_50MPS_YEAR: &str = r#"{"constant_mps": 50, "days": 365}"#;
