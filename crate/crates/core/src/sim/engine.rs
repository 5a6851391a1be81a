use super::{Scenario, SimError};
use crate::model::{detect_msg1, update_threshold, PowerMetric, ThresholdState, UpdateWeights};

/// Observation of one RO.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub ro: u32,
    pub measured: PowerMetric,
    /// Threshold in force while this RO is evaluated.
    pub p_th: PowerMetric,
    pub attacker_tx: bool,
    pub ue_attempt: bool,
    pub ue_attempt_power: Option<PowerMetric>,
    /// Only ever true on attempt ROs.
    pub detected: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioSummary {
    /// First attempt RO whose Msg1 went undetected.
    pub first_blocked_ro: Option<u32>,
    /// Detected attempts over all attempts.
    pub access_success_rate: f64,
    /// Threshold in force at the last RO.
    pub final_threshold: PowerMetric,
    /// ROs from the attacker's first transmission until `p_th + delta >= p_ue`.
    pub ros_to_block: Option<u32>,
    pub attempts: u32,
    pub detections: u32,
}

impl ScenarioSummary {
    /// Recomputes the summary from a trace; `ue_power` is the UE's
    /// unramped power. Returns `None` for an empty trace.
    pub fn from_trace(
        trace: &[TraceRecord],
        delta: PowerMetric,
        ue_power: PowerMetric,
    ) -> Option<Self> {
        let last = trace.last()?;
        let attempts = trace.iter().filter(|r| r.ue_attempt).count() as u32;
        let detections = trace.iter().filter(|r| r.ue_attempt && r.detected).count() as u32;
        let first_blocked_ro = trace
            .iter()
            .find(|r| r.ue_attempt && !r.detected)
            .map(|r| r.ro);
        let ros_to_block = trace.iter().find(|r| r.attacker_tx).and_then(|onset| {
            trace
                .iter()
                .filter(|r| r.ro >= onset.ro)
                .find(|r| !detect_msg1(ue_power, r.p_th, delta))
                .map(|r| r.ro - onset.ro)
        });
        let access_success_rate = if attempts == 0 {
            0.0
        } else {
            f64::from(detections) / f64::from(attempts)
        };
        Some(ScenarioSummary {
            first_blocked_ro,
            access_success_rate,
            final_threshold: last.p_th,
            ros_to_block,
            attempts,
            detections,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationRun {
    pub trace: Vec<TraceRecord>,
    pub summary: ScenarioSummary,
}

impl SimulationRun {
    pub fn thresholds(&self) -> impl Iterator<Item = PowerMetric> + '_ {
        self.trace.iter().map(|r| r.p_th)
    }

    /// Time-averaged threshold over the whole trace.
    pub fn mean_threshold(&self) -> f64 {
        self.thresholds().map(PowerMetric::db).sum::<f64>() / self.trace.len() as f64
    }
}

pub fn run_scenario(s: &Scenario) -> Result<SimulationRun, SimError> {
    s.validate()?;
    let cfg = &s.detector;
    let onset = s.attacker_onset();
    let mut state = ThresholdState::new(cfg.p_th_init, s.p_noise);
    let mut trace = Vec::with_capacity(s.horizon as usize);
    // position of the next attempt within the current access procedure
    let mut retry = 0u32;

    for ro in 0..s.horizon {
        let attacker_tx = ro >= onset && s.attacker.transmits_at(u64::from(ro - onset));
        let ue_attempt = s.ue.attempts_at(ro);
        let ue_attempt_power = if ue_attempt {
            Some(PowerMetric::new(
                s.ue.power.db() + f64::from(retry) * s.ue.ramp_step.db(),
            )?)
        } else {
            None
        };

        let mut measured = s.p_noise;
        if attacker_tx {
            measured = measured.max(s.attacker.power);
        }
        if s.ue_contributes_to_measurement {
            if let Some(p) = ue_attempt_power {
                measured = measured.max(p);
            }
        }

        let p_th = state.p_th;
        let detected = ue_attempt_power.is_some_and(|p| detect_msg1(p, p_th, cfg.delta));
        trace.push(TraceRecord {
            ro,
            measured,
            p_th,
            attacker_tx,
            ue_attempt,
            ue_attempt_power,
            detected,
        });

        if ue_attempt {
            retry = if detected || retry + 1 >= s.ue.max_attempts {
                0
            } else {
                retry + 1
            };
        }
        if ro == 0 {
            // nothing was measured before RO 0
            state.prev_measured = measured;
        }
        state = update_threshold(&state, cfg, measured)?;
    }

    let summary = ScenarioSummary::from_trace(&trace, cfg.delta, s.ue.power)
        .expect("validated horizon is at least one RO");
    Ok(SimulationRun { trace, summary })
}

/// [`run_scenario`] restricted to the memoryless detector.
pub fn run_srsran_scenario(s: &Scenario) -> Result<SimulationRun, SimError> {
    if s.detector.weights != UpdateWeights::MEMORYLESS {
        return Err(SimError::NotMemoryless);
    }
    run_scenario(s)
}
