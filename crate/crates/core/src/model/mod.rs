//! Domain types and the elementary detection rules.

mod attacker;
mod detector;
mod power;

pub use attacker::{measured_power, AttackerConfig};
pub use detector::{
    detect_msg1, detector_preset, update_threshold, DetectorConfig, DetectorPreset, ThresholdState,
    UpdateWeights,
};
pub use power::PowerMetric;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("non-finite power metric: {0}")]
    NonFinite(f64),
    #[error("threshold update produced a non-finite value at RO {ro_index}")]
    UpdateOverflow { ro_index: u64 },
    #[error("unknown detector preset `{0}` (expected `srsran` or `oai(<beta>)`)")]
    UnknownPreset(String),
    #[error("OAI preset requires beta in [0, 1], got {0}")]
    BetaOutOfRange(f64),
}
