//! RO-granular simulation of the attacker, the legitimate UE and the gNB.
//!
//! Every RO is processed in the same order:
//!
//! 1. the threshold in force is the recursion state *before* this RO;
//! 2. a UE attempt, if any, is detected against that threshold;
//! 3. the RO's measured power is folded into the recursion.
//!
//! The measured power is the strongest of the background noise, the
//! attacker's Msg1 (if it transmits) and, when
//! [`Scenario::ue_contributes_to_measurement`] is set, the UE's own Msg1.
//! With the flag cleared the measurement stream is exactly the periodic
//! attack schedule used by [`crate::analytic`].

mod compare;
mod engine;
mod scenario;
mod sweep;

pub use compare::{compare_with_analytic, AnalyticReference, DeviationReport, ORACLE_TOLERANCE};
pub use engine::{run_scenario, run_srsran_scenario, ScenarioSummary, SimulationRun, TraceRecord};
pub use scenario::{Scenario, ScenarioMetadata, ScenarioWarning, UeConfig, DEFAULT_HORIZON};
pub use sweep::{sweep, sweep_runs, SweepAxis, SweepPoint};

use thiserror::Error;

use crate::analytic::AnalyticError;
use crate::model::ModelError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("invalid scenario: {}", .0.join("; "))]
    Invalid(Vec<String>),
    #[error("detector is not the memoryless preset (alpha=1, beta=0, gamma=0)")]
    NotMemoryless,
    #[error("unknown sweep axis `{0}`")]
    UnknownAxis(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
}
