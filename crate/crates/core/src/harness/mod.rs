//! File formats and command implementations behind the `rachjam` binary.
//!
//! Commands write to caller-supplied streams and return an [`Exit`] code so
//! they can be driven from tests as well as from `main`.

pub mod commands;
pub mod plot;
pub mod scenario_file;
pub mod trace_csv;

pub use commands::Exit;
pub use scenario_file::{parse_scenario, read_scenario, ScenarioFileError};
pub use trace_csv::{parse_trace_csv, write_trace_csv, TraceCsvError, TraceCsvRow, TRACE_HEADER};
