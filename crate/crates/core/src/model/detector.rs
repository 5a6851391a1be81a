use std::fmt;
use std::str::FromStr;

use super::{ModelError, PowerMetric};

/// Weights of the threshold recursion
/// `p_th[i] = alpha * m[i] + beta * m[i-1] + gamma * p_th[i-1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpdateWeights {
    /// Weight on the current measurement.
    pub alpha: f64,
    /// Weight on the previous measurement.
    pub beta: f64,
    /// Forgetting factor on the previous threshold.
    pub gamma: f64,
}

impl UpdateWeights {
    pub const MEMORYLESS: UpdateWeights = UpdateWeights {
        alpha: 1.0,
        beta: 0.0,
        gamma: 0.0,
    };
    pub const STATIC: UpdateWeights = UpdateWeights {
        alpha: 0.0,
        beta: 0.0,
        gamma: 1.0,
    };

    pub fn sum(&self) -> f64 {
        self.alpha + self.beta + self.gamma
    }

    /// Names of the weights that are negative or non-finite.
    pub fn violations(&self) -> Vec<&'static str> {
        let mut bad = Vec::new();
        for (name, w) in [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("gamma", self.gamma),
        ] {
            if !(w.is_finite() && w >= 0.0) {
                bad.push(name);
            }
        }
        bad
    }
}

/// gNB threshold-update and detection parameters.
///
/// Zero weights are admitted: both reference presets use them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorConfig {
    pub weights: UpdateWeights,
    /// Detection margin above the threshold, dB. Must be non-negative.
    pub delta: PowerMetric,
    /// Threshold in force before any measurement has been folded in.
    pub p_th_init: PowerMetric,
}

impl DetectorConfig {
    pub fn new(weights: UpdateWeights, delta: PowerMetric, p_th_init: PowerMetric) -> Self {
        DetectorConfig {
            weights,
            delta,
            p_th_init,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.weights.alpha
    }

    pub fn beta(&self) -> f64 {
        self.weights.beta
    }

    pub fn gamma(&self) -> f64 {
        self.weights.gamma
    }

    /// Human-readable invariant violations; empty when the config is valid.
    pub fn violations(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .weights
            .violations()
            .into_iter()
            .map(|w| format!("detector.{w} must be a finite value >= 0"))
            .collect();
        if self.delta.db() < 0.0 {
            out.push("detector.delta must be >= 0".to_string());
        }
        out
    }
}

/// Named detector implementations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DetectorPreset {
    /// Recursive averaging: `alpha = 0`, `gamma = 1 - beta`.
    Oai { beta: f64 },
    /// Instantaneous update: the threshold is the latest measurement.
    Srsran,
}

impl DetectorPreset {
    pub fn weights(&self) -> Result<UpdateWeights, ModelError> {
        match *self {
            DetectorPreset::Oai { beta } => {
                if !(0.0..=1.0).contains(&beta) {
                    return Err(ModelError::BetaOutOfRange(beta));
                }
                Ok(UpdateWeights {
                    alpha: 0.0,
                    beta,
                    gamma: 1.0 - beta,
                })
            }
            DetectorPreset::Srsran => Ok(UpdateWeights::MEMORYLESS),
        }
    }

    pub fn config(
        &self,
        delta: PowerMetric,
        p_th_init: PowerMetric,
    ) -> Result<DetectorConfig, ModelError> {
        Ok(DetectorConfig::new(self.weights()?, delta, p_th_init))
    }
}

impl fmt::Display for DetectorPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DetectorPreset::Oai { beta } => write!(f, "oai({beta})"),
            DetectorPreset::Srsran => f.write_str("srsran"),
        }
    }
}

impl FromStr for DetectorPreset {
    type Err = ModelError;

    /// Accepts `srsran`, `oai(<beta>)` and `oai:<beta>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let name = s.trim().to_ascii_lowercase();
        if name == "srsran" {
            return Ok(DetectorPreset::Srsran);
        }
        let arg = name
            .strip_prefix("oai(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| name.strip_prefix("oai:"));
        match arg.map(|a| a.trim().parse::<f64>()) {
            Some(Ok(beta)) => {
                let preset = DetectorPreset::Oai { beta };
                preset.weights()?;
                Ok(preset)
            }
            _ => Err(ModelError::UnknownPreset(s.to_string())),
        }
    }
}

/// Looks a preset up by name and returns its weights.
pub fn detector_preset(name: &str) -> Result<UpdateWeights, ModelError> {
    name.parse::<DetectorPreset>()?.weights()
}

/// Recursion state after `ro_index` updates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdState {
    pub ro_index: u64,
    /// Threshold currently in force.
    pub p_th: PowerMetric,
    /// Most recent measurement folded into the recursion.
    pub prev_measured: PowerMetric,
}

impl ThresholdState {
    pub fn new(p_th: PowerMetric, prev_measured: PowerMetric) -> Self {
        ThresholdState {
            ro_index: 0,
            p_th,
            prev_measured,
        }
    }
}

/// Folds one RO measurement into the threshold recursion.
pub fn update_threshold(
    state: &ThresholdState,
    cfg: &DetectorConfig,
    measured: PowerMetric,
) -> Result<ThresholdState, ModelError> {
    let w = &cfg.weights;
    let next =
        w.alpha * measured.db() + w.beta * state.prev_measured.db() + w.gamma * state.p_th.db();
    let ro_index = state.ro_index + 1;
    let p_th = PowerMetric::new(next).map_err(|_| ModelError::UpdateOverflow { ro_index })?;
    Ok(ThresholdState {
        ro_index,
        p_th,
        prev_measured: measured,
    })
}

/// Msg1 is detected iff its power strictly exceeds threshold plus margin.
#[inline]
pub fn detect_msg1(p_ue: PowerMetric, p_th: PowerMetric, delta: PowerMetric) -> bool {
    p_ue.db() > p_th.db() + delta.db()
}
