use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::{run_scenario, Scenario, ScenarioSummary, SimError, SimulationRun};
use crate::model::{DetectorPreset, PowerMetric};

/// Scenario parameter varied by a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepAxis {
    AttackerPeriod,
    AttackerPower,
    AttackerEarlyStart,
    /// OAI `beta`; `gamma` follows as `1 - beta` and `alpha` is zero.
    OaiBeta,
    Delta,
    UePower,
}

impl SweepAxis {
    pub const ALL: [SweepAxis; 6] = [
        SweepAxis::AttackerPeriod,
        SweepAxis::AttackerPower,
        SweepAxis::AttackerEarlyStart,
        SweepAxis::OaiBeta,
        SweepAxis::Delta,
        SweepAxis::UePower,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::AttackerPeriod => "attacker.period",
            SweepAxis::AttackerPower => "attacker.power",
            SweepAxis::AttackerEarlyStart => "attacker.early_start",
            SweepAxis::OaiBeta => "detector.beta",
            SweepAxis::Delta => "detector.delta",
            SweepAxis::UePower => "ue.power",
        }
    }

    fn short_name(self) -> &'static str {
        match self {
            SweepAxis::AttackerPeriod => "period",
            SweepAxis::AttackerPower => "power",
            SweepAxis::AttackerEarlyStart => "early_start",
            SweepAxis::OaiBeta => "beta",
            SweepAxis::Delta => "delta",
            SweepAxis::UePower => "ue_power",
        }
    }

    /// Copy of `base` with this parameter set to `value`.
    pub fn apply(self, base: &Scenario, value: f64) -> Result<Scenario, SimError> {
        let mut s = base.clone();
        let invalid =
            |why: &str| SimError::Invalid(vec![format!("{} = {value}: {why}", self.name())]);
        let count = || {
            if value.fract() == 0.0 && (0.0..=f64::from(u32::MAX)).contains(&value) {
                Ok(value as u32)
            } else {
                Err(invalid("expected a non-negative integer"))
            }
        };
        let power = || PowerMetric::new(value).map_err(|_| invalid("expected a finite dB value"));
        match self {
            SweepAxis::AttackerPeriod => s.attacker.period = count()?,
            SweepAxis::AttackerEarlyStart => s.attacker.early_start = count()?,
            SweepAxis::AttackerPower => s.attacker.power = power()?,
            SweepAxis::Delta => s.detector.delta = power()?,
            SweepAxis::UePower => s.ue.power = power()?,
            SweepAxis::OaiBeta => {
                s.detector.weights = DetectorPreset::Oai { beta: value }
                    .weights()
                    .map_err(|e| invalid(&e.to_string()))?;
            }
        }
        Ok(s)
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepAxis {
    type Err = SimError;

    /// Accepts the dotted name (`attacker.period`) or the short one (`period`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim();
        let key = key.strip_suffix("(oai)").unwrap_or(key);
        SweepAxis::ALL
            .into_iter()
            .find(|a| a.name() == key || a.short_name() == key)
            .ok_or_else(|| SimError::UnknownAxis(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint<T> {
    pub value: f64,
    pub outcome: Result<T, SimError>,
}

/// Runs `base` once per value. Results keep the order of `values`.
pub fn sweep_runs(
    base: &Scenario,
    axis: SweepAxis,
    values: &[f64],
) -> Vec<SweepPoint<SimulationRun>> {
    values
        .par_iter()
        .map(|&value| SweepPoint {
            value,
            outcome: axis.apply(base, value).and_then(|s| run_scenario(&s)),
        })
        .collect()
}

pub fn sweep(base: &Scenario, axis: SweepAxis, values: &[f64]) -> Vec<SweepPoint<ScenarioSummary>> {
    sweep_runs(base, axis, values)
        .into_iter()
        .map(|p| SweepPoint {
            value: p.value,
            outcome: p.outcome.map(|run| run.summary),
        })
        .collect()
}
