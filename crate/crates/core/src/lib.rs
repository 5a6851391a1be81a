//! Msg1 (preamble) jamming of the 5G NR random-access channel.
//!
//! A gNB detects a legitimate UE's preamble when its received power metric
//! clears an adaptive noise threshold plus a fixed margin. The threshold is
//! a recursive filter over measured RO power, so an attacker that transmits
//! preambles every `T_a` random-access occasions (ROs) drags it upward and
//! can block access without ever colliding with the UE.
//!
//! The crate is split in layers:
//!
//! * [`model`]: domain types and the three elementary rules (threshold
//!   update, Msg1 detection, periodic measured-power schedule).
//! * [`analytic`]: closed-form and iterated predictors of the threshold and
//!   of per-RO access success; these serve as the oracle for the simulator.
//! * [`sim`]: RO-granular simulation of attacker, UE and gNB, producing
//!   per-RO traces, summaries, parameter sweeps and analytic cross-checks.
//! * [`harness`]: scenario files, trace CSV, SVG plots and the command
//!   implementations behind the `rachjam` binary.
//!
//! ```
//! use rachjam::model::{detect_msg1, DetectorPreset, PowerMetric, ThresholdState, update_threshold};
//!
//! let db = |v| PowerMetric::new(v).unwrap();
//! let cfg = DetectorPreset::Oai { beta: 0.24 }.config(db(12.0), db(17.4)).unwrap();
//! let state = ThresholdState::new(db(17.4), db(51.0));
//! let next = update_threshold(&state, &cfg, db(17.4)).unwrap();
//! assert!((next.p_th.db() - 25.464).abs() < 1e-12);
//! assert!(detect_msg1(db(56.4), next.p_th, cfg.delta));
//! ```

pub mod analytic;
pub mod harness;
pub mod model;
pub mod sim;

pub use analytic::SuccessIndicator;
pub use model::{AttackerConfig, DetectorConfig, DetectorPreset, PowerMetric, ThresholdState};
pub use sim::{Scenario, ScenarioSummary, SimulationRun, TraceRecord, UeConfig};
