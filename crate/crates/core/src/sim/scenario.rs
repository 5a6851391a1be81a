use std::fmt;

use super::SimError;
use crate::model::{AttackerConfig, DetectorConfig, DetectorPreset, PowerMetric};

pub const DEFAULT_HORIZON: u32 = 64;

/// Legitimate UE.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UeConfig {
    /// Received power metric of the first attempt of a procedure.
    pub power: PowerMetric,
    pub first_attempt_ro: u32,
    /// Attempts per access procedure before giving up.
    pub max_attempts: u32,
    /// Power added on each retry within a procedure; zero disables ramping.
    pub ramp_step: PowerMetric,
    /// ROs between consecutive attempts.
    pub attempt_period: u32,
}

impl UeConfig {
    /// UE probing every RO from RO 0 at fixed power.
    pub fn every_ro(power: PowerMetric) -> Self {
        UeConfig {
            power,
            first_attempt_ro: 0,
            max_attempts: 1,
            ramp_step: PowerMetric::ZERO,
            attempt_period: 1,
        }
    }

    pub fn attempts_at(&self, ro: u32) -> bool {
        ro >= self.first_attempt_ro
            && (ro - self.first_attempt_ro).is_multiple_of(self.attempt_period.max(1))
    }
}

/// Free-form bookkeeping that does not influence the simulation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScenarioMetadata {
    pub name: Option<String>,
    pub gnb_prach_config_index: Vec<u32>,
    pub attacker_prach_config_index: Vec<u32>,
    pub ue_prach_config_index: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub detector: DetectorConfig,
    pub attacker: AttackerConfig,
    pub ue: UeConfig,
    pub p_noise: PowerMetric,
    /// Number of ROs simulated.
    pub horizon: u32,
    pub ue_contributes_to_measurement: bool,
    pub meta: ScenarioMetadata,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioWarning {
    /// The attacker is assumed to be received well above the noise level.
    WeakAttacker {
        power: PowerMetric,
        noise: PowerMetric,
    },
}

impl fmt::Display for ScenarioWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioWarning::WeakAttacker { power, noise } => {
                write!(
                    f,
                    "attacker power {power} dB does not exceed noise level {noise} dB"
                )
            }
        }
    }
}

impl Scenario {
    /// Measured testbed powers (noise 17.4 dB, attacker 51 dB, UE 56.4 dB)
    /// with the OAI detector at `beta = 0.24`, a 12 dB margin and a
    /// continuous attacker. The UE probes every RO.
    pub fn testbed() -> Self {
        let db = |v| PowerMetric::new(v).expect("finite");
        let p_noise = db(17.4);
        let detector = DetectorPreset::Oai { beta: 0.24 }
            .config(db(12.0), p_noise)
            .expect("valid preset");
        Scenario {
            detector,
            attacker: AttackerConfig {
                period: 1,
                power: db(51.0),
                early_start: 0,
                enabled: true,
            },
            ue: UeConfig::every_ro(db(56.4)),
            p_noise,
            horizon: DEFAULT_HORIZON,
            ue_contributes_to_measurement: false,
            meta: ScenarioMetadata {
                name: Some("testbed".to_string()),
                gnb_prach_config_index: vec![160, 161],
                attacker_prach_config_index: vec![145, 147, 149],
                ue_prach_config_index: vec![148, 149],
            },
        }
    }

    /// RO of the attacker's first transmission.
    pub fn attacker_onset(&self) -> u32 {
        self.ue
            .first_attempt_ro
            .saturating_sub(self.attacker.early_start)
    }

    pub fn violations(&self) -> Vec<String> {
        let mut out = self.detector.violations();
        out.extend(self.attacker.violations());
        if self.attacker.early_start > self.ue.first_attempt_ro {
            out.push(format!(
                "attacker.early_start ({}) must not exceed ue.first_attempt_ro ({})",
                self.attacker.early_start, self.ue.first_attempt_ro
            ));
        }
        if self.ue.max_attempts == 0 {
            out.push("ue.max_attempts must be >= 1".to_string());
        }
        if self.ue.ramp_step.db() < 0.0 {
            out.push("ue.ramp_step must be >= 0".to_string());
        }
        if self.ue.attempt_period == 0 {
            out.push("ue.attempt_period must be >= 1".to_string());
        }
        if u64::from(self.horizon) < u64::from(self.ue.first_attempt_ro) + 1 {
            out.push(format!(
                "sim.horizon ({}) must be >= ue.first_attempt_ro + 1 ({})",
                self.horizon,
                u64::from(self.ue.first_attempt_ro) + 1
            ));
        }
        out
    }

    pub fn warnings(&self) -> Vec<ScenarioWarning> {
        let mut out = Vec::new();
        if self.attacker.enabled && self.attacker.power <= self.p_noise {
            out.push(ScenarioWarning::WeakAttacker {
                power: self.attacker.power,
                noise: self.p_noise,
            });
        }
        out
    }

    pub fn validate(&self) -> Result<Vec<ScenarioWarning>, SimError> {
        let violations = self.violations();
        if violations.is_empty() {
            Ok(self.warnings())
        } else {
            Err(SimError::Invalid(violations))
        }
    }
}
