use super::{run_scenario, Scenario, SimError};
use crate::analytic::{delayed_threshold_trace, threshold_closed_form};

/// Absolute agreement required between simulation and analytic traces.
pub const ORACLE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnalyticReference {
    /// Geometric-series closed form (continuous attack from RO 0).
    ClosedForm,
    /// Iterated recursion over the periodic attack schedule.
    Iterated,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeviationReport {
    pub reference: AnalyticReference,
    pub max_abs: f64,
    pub mean_abs: f64,
    /// First RO whose deviation exceeds [`ORACLE_TOLERANCE`].
    pub first_divergence: Option<u32>,
    /// Analytic threshold per RO, aligned with the simulated trace.
    pub analytic: Vec<f64>,
}

impl DeviationReport {
    pub fn within_tolerance(&self) -> bool {
        self.max_abs <= ORACLE_TOLERANCE
    }
}

/// Simulated threshold trace against the analytic prediction.
///
/// The analytic side ignores the UE's own Msg1, so a scenario with
/// `ue_contributes_to_measurement` set is expected to diverge.
pub fn compare_with_analytic(s: &Scenario) -> Result<DeviationReport, SimError> {
    let run = run_scenario(s)?;
    let onset = s.attacker_onset();
    let closed = s.attacker.enabled
        && s.attacker.period == 1
        && onset == 0
        && s.detector.weights.gamma != 1.0;

    let analytic: Vec<f64> = if closed {
        (0..s.horizon)
            .map(|i| {
                threshold_closed_form(u64::from(i), &s.detector, s.attacker.power).map(|p| p.db())
            })
            .collect::<Result<_, _>>()?
    } else {
        let mut trace = delayed_threshold_trace(
            u64::from(s.horizon),
            u64::from(onset),
            &s.detector,
            &s.attacker,
            s.p_noise,
        )?;
        trace.truncate(s.horizon as usize);
        trace.into_iter().map(|p| p.db()).collect()
    };

    let deviations: Vec<f64> = run
        .trace
        .iter()
        .zip(&analytic)
        .map(|(r, a)| (r.p_th.db() - a).abs())
        .collect();
    let max_abs = deviations.iter().copied().fold(0.0, f64::max);
    let mean_abs = deviations.iter().sum::<f64>() / deviations.len() as f64;
    let first_divergence = deviations
        .iter()
        .position(|&d| d > ORACLE_TOLERANCE)
        .map(|i| i as u32);

    Ok(DeviationReport {
        reference: if closed {
            AnalyticReference::ClosedForm
        } else {
            AnalyticReference::Iterated
        },
        max_abs,
        mean_abs,
        first_divergence,
        analytic,
    })
}
