//! Closed-form and iterated predictors for the threshold and access success.
//!
//! For a continuous attacker (`T_a = 1`) the recursion is a geometric series:
//!
//! ```text
//! p_th[i] = gamma^i * p_th[0] + (alpha + beta) * p_att * (1 - gamma^i) / (1 - gamma)
//! ```
//!
//! converging to `(alpha + beta) * p_att / (1 - gamma)` whenever `gamma < 1`.
//! Periodic attacks (`T_a > 1`) have no closed form here; they are predicted
//! by iterating the update rule over the attack schedule.
//!
//! Trace convention: entry `i` is the threshold after `i` measurements, and
//! measurement `i >= 1` follows [`measured_power`]. The recursion has no
//! measurement before the first one, so its previous-measurement slot is
//! seeded with measurement 1. Under a continuous attack every measurement,
//! including that seed, is the attacker's, which is what the geometric
//! series assumes.

use thiserror::Error;

use crate::model::{
    detect_msg1, measured_power, update_threshold, AttackerConfig, DetectorConfig, ModelError,
    PowerMetric, ThresholdState,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticError {
    #[error("closed form divides by (1 - gamma); gamma = 1 needs the linear-growth branch")]
    DegenerateForgetting,
    #[error("no steady state for gamma = {0} (requires 0 <= gamma < 1)")]
    NoSteadyState(f64),
    #[error("horizon must be >= 1")]
    EmptyHorizon,
    #[error("threshold trace is empty")]
    EmptyTrace,
    #[error("{powers} attempt powers but {thresholds} thresholds")]
    LengthMismatch { powers: usize, thresholds: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Per-RO Msg1 outcome. The model is deterministic, so the "probability"
/// of success at an RO is exactly 0 or 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum SuccessIndicator {
    Failure = 0,
    Success = 1,
}

impl SuccessIndicator {
    pub fn value(self) -> u8 {
        self as u8
    }

    pub fn is_success(self) -> bool {
        self == SuccessIndicator::Success
    }
}

impl From<bool> for SuccessIndicator {
    fn from(ok: bool) -> Self {
        if ok {
            SuccessIndicator::Success
        } else {
            SuccessIndicator::Failure
        }
    }
}

/// Threshold after `i` ROs of continuous attack.
pub fn threshold_closed_form(
    i: u64,
    cfg: &DetectorConfig,
    p_attacker: PowerMetric,
) -> Result<PowerMetric, AnalyticError> {
    let w = &cfg.weights;
    if w.gamma == 1.0 {
        return Err(AnalyticError::DegenerateForgetting);
    }
    if i == 0 {
        return Ok(cfg.p_th_init);
    }
    let decay = w.gamma.powf(i as f64);
    let value = decay * cfg.p_th_init.db()
        + (w.alpha + w.beta) * p_attacker.db() * (1.0 - decay) / (1.0 - w.gamma);
    Ok(PowerMetric::new(value)?)
}

/// The `gamma = 1` branch of the closed form: `p_th[0] + i * (alpha + beta) * p_att`.
pub fn threshold_linear_growth(
    i: u64,
    cfg: &DetectorConfig,
    p_attacker: PowerMetric,
) -> Result<PowerMetric, AnalyticError> {
    let w = &cfg.weights;
    let value = cfg.p_th_init.db() + i as f64 * (w.alpha + w.beta) * p_attacker.db();
    Ok(PowerMetric::new(value)?)
}

pub fn steady_state(
    cfg: &DetectorConfig,
    p_attacker: PowerMetric,
) -> Result<PowerMetric, AnalyticError> {
    let w = &cfg.weights;
    if !(0.0..1.0).contains(&w.gamma) {
        return Err(AnalyticError::NoSteadyState(w.gamma));
    }
    Ok(PowerMetric::new(
        (w.alpha + w.beta) * p_attacker.db() / (1.0 - w.gamma),
    )?)
}

/// Thresholds `p_th[0..=horizon]` under the periodic attack schedule.
pub fn periodic_threshold_trace(
    horizon: u64,
    cfg: &DetectorConfig,
    attacker: &AttackerConfig,
    p_noise: PowerMetric,
) -> Result<Vec<PowerMetric>, AnalyticError> {
    delayed_threshold_trace(horizon, 0, cfg, attacker, p_noise)
}

/// Like [`periodic_threshold_trace`], with the first `onset` measurements
/// being pure noise before the attack schedule starts.
pub fn delayed_threshold_trace(
    horizon: u64,
    onset: u64,
    cfg: &DetectorConfig,
    attacker: &AttackerConfig,
    p_noise: PowerMetric,
) -> Result<Vec<PowerMetric>, AnalyticError> {
    if horizon == 0 {
        return Err(AnalyticError::EmptyHorizon);
    }
    let measurement = |i: u64| {
        if i > onset {
            measured_power(i - onset, attacker, p_noise)
        } else {
            p_noise
        }
    };
    let mut state = ThresholdState::new(cfg.p_th_init, measurement(1));
    let mut trace = Vec::with_capacity(horizon as usize + 1);
    trace.push(state.p_th);
    for i in 1..=horizon {
        state = update_threshold(&state, cfg, measurement(i))?;
        trace.push(state.p_th);
    }
    Ok(trace)
}

pub fn predict_success(
    p_ue: PowerMetric,
    trace: &[PowerMetric],
    delta: PowerMetric,
) -> Result<Vec<SuccessIndicator>, AnalyticError> {
    if trace.is_empty() {
        return Err(AnalyticError::EmptyTrace);
    }
    Ok(trace
        .iter()
        .map(|&p_th| detect_msg1(p_ue, p_th, delta).into())
        .collect())
}

/// Product of per-attempt indicators over consecutive (possibly ramped) attempts.
pub fn multi_attempt_success(
    attempt_powers: &[PowerMetric],
    thresholds_at_attempts: &[PowerMetric],
    delta: PowerMetric,
) -> Result<SuccessIndicator, AnalyticError> {
    if attempt_powers.len() != thresholds_at_attempts.len() || attempt_powers.is_empty() {
        return Err(AnalyticError::LengthMismatch {
            powers: attempt_powers.len(),
            thresholds: thresholds_at_attempts.len(),
        });
    }
    let product = attempt_powers
        .iter()
        .zip(thresholds_at_attempts)
        .map(|(&p, &th)| SuccessIndicator::from(detect_msg1(p, th, delta)).value())
        .product::<u8>();
    Ok(SuccessIndicator::from(product == 1))
}

/// Fraction of successful indicators; `None` for an empty slice.
pub fn success_rate(indicators: &[SuccessIndicator]) -> Option<f64> {
    if indicators.is_empty() {
        return None;
    }
    let hits = indicators.iter().filter(|s| s.is_success()).count();
    Some(hits as f64 / indicators.len() as f64)
}
