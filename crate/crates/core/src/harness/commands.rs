use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use super::plot::render_svg;
use super::scenario_file::{read_scenario, ScenarioFileError};
use super::trace_csv::{parse_trace_csv, write_trace_csv};
use crate::model::DetectorPreset;
use crate::sim::{
    compare_with_analytic, run_scenario, sweep_runs, Scenario, ScenarioSummary, SimulationRun,
    SweepAxis,
};

/// Process exit status of a command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum Exit {
    Success = 0,
    /// `compare` found a deviation above tolerance.
    ToleranceFailure = 1,
    InputError = 2,
    IoError = 3,
}

impl Exit {
    pub fn code(self) -> u8 {
        self as u8
    }
}

fn fail(err: &mut dyn Write, exit: Exit, message: impl std::fmt::Display) -> Exit {
    let _ = writeln!(err, "error: {message}");
    exit
}

fn load(path: &Path, err: &mut dyn Write) -> Result<Scenario, Exit> {
    match read_scenario(path) {
        Ok(s) => {
            for w in s.warnings() {
                let _ = writeln!(err, "warning: {w}");
            }
            Ok(s)
        }
        Err(e @ ScenarioFileError::Io { .. }) => Err(fail(err, Exit::IoError, e)),
        Err(e) => Err(fail(err, Exit::InputError, e)),
    }
}

fn opt(v: Option<u32>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Summary block printed by `simulate`; recomputable from the written CSV.
pub fn format_summary(s: &ScenarioSummary) -> String {
    let none = |v: Option<u32>| v.map_or_else(|| "none".to_string(), |x| x.to_string());
    let mut out = String::new();
    let _ = writeln!(out, "attempts: {}", s.attempts);
    let _ = writeln!(out, "detections: {}", s.detections);
    let _ = writeln!(out, "access_success_rate: {:.6}", s.access_success_rate);
    let _ = writeln!(out, "first_blocked_ro: {}", none(s.first_blocked_ro));
    let _ = writeln!(out, "ros_to_block: {}", none(s.ros_to_block));
    let _ = writeln!(out, "final_threshold_db: {:.6}", s.final_threshold);
    out
}

fn trace_text(s: &Scenario, run: &SimulationRun) -> Result<String, crate::sim::SimError> {
    let analytic = compare_with_analytic(s)?.analytic;
    Ok(write_trace_csv(&run.trace, &analytic))
}

pub fn simulate(
    scenario_path: &Path,
    output_path: &Path,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Exit {
    let scenario = match load(scenario_path, err) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let (run, csv) = match run_scenario(&scenario)
        .and_then(|run| trace_text(&scenario, &run).map(|t| (run, t)))
    {
        Ok(v) => v,
        Err(e) => return fail(err, Exit::InputError, e),
    };
    if let Err(e) = std::fs::write(output_path, csv) {
        return fail(
            err,
            Exit::IoError,
            format!("cannot write {}: {e}", output_path.display()),
        );
    }
    if let Some(name) = &scenario.meta.name {
        let _ = writeln!(out, "scenario: {name}");
    }
    let _ = write!(out, "{}", format_summary(&run.summary));
    Exit::Success
}

fn parse_values(values: &[String]) -> Result<Vec<f64>, String> {
    let parsed: Vec<f64> = values
        .iter()
        .flat_map(|v| v.split(','))
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(|v| {
            v.parse::<f64>()
                .map_err(|_| format!("sweep value `{v}` is not a number"))
        })
        .collect::<Result<_, _>>()?;
    if parsed.is_empty() {
        return Err("sweep needs at least one value".to_string());
    }
    Ok(parsed)
}

pub fn sweep(
    scenario_path: &Path,
    axis: &str,
    values: &[String],
    output_dir: &Path,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Exit {
    let axis: SweepAxis = match axis.parse() {
        Ok(a) => a,
        Err(e) => return fail(err, Exit::InputError, e),
    };
    let values = match parse_values(values) {
        Ok(v) => v,
        Err(e) => return fail(err, Exit::InputError, e),
    };
    let base = match load(scenario_path, err) {
        Ok(s) => s,
        Err(code) => return code,
    };

    let mut files = Vec::with_capacity(values.len());
    let mut summary = String::from(
        "value,access_success_rate,first_blocked_ro,ros_to_block,final_threshold_db\n",
    );
    for (idx, point) in sweep_runs(&base, axis, &values).into_iter().enumerate() {
        let scenario = axis.apply(&base, point.value);
        let text = match (point.outcome, scenario) {
            (Ok(run), Ok(s)) => match trace_text(&s, &run) {
                Ok(t) => {
                    let m = &run.summary;
                    let _ = writeln!(
                        summary,
                        "{},{:.6},{},{},{:.6}",
                        point.value,
                        m.access_success_rate,
                        opt(m.first_blocked_ro),
                        opt(m.ros_to_block),
                        m.final_threshold
                    );
                    t
                }
                Err(e) => return fail(err, Exit::InputError, e),
            },
            (Err(e), _) | (_, Err(e)) => return fail(err, Exit::InputError, e),
        };
        files.push((format!("trace_{idx:02}_{}.csv", point.value), text));
    }

    let write_all = || -> std::io::Result<()> {
        std::fs::create_dir_all(output_dir)?;
        for (name, text) in &files {
            std::fs::write(output_dir.join(name), text)?;
        }
        std::fs::write(output_dir.join("summary.csv"), &summary)
    };
    if let Err(e) = write_all() {
        return fail(
            err,
            Exit::IoError,
            format!("cannot write to {}: {e}", output_dir.display()),
        );
    }
    let _ = write!(out, "{summary}");
    Exit::Success
}

pub fn compare(scenario_path: &Path, out: &mut dyn Write, err: &mut dyn Write) -> Exit {
    let scenario = match load(scenario_path, err) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let report = match compare_with_analytic(&scenario) {
        Ok(r) => r,
        Err(e) => return fail(err, Exit::InputError, e),
    };
    let _ = writeln!(out, "reference: {:?}", report.reference);
    let _ = writeln!(out, "max_abs_deviation: {:e}", report.max_abs);
    let _ = writeln!(out, "mean_abs_deviation: {:e}", report.mean_abs);
    if report.within_tolerance() {
        Exit::Success
    } else {
        let _ = writeln!(out, "first_divergence_ro: {}", opt(report.first_divergence));
        Exit::ToleranceFailure
    }
}

pub fn plot(trace_path: &Path, output_path: &Path, err: &mut dyn Write) -> Exit {
    let text = match std::fs::read_to_string(trace_path) {
        Ok(t) => t,
        Err(e) => {
            return fail(
                err,
                Exit::IoError,
                format!("cannot read {}: {e}", trace_path.display()),
            )
        }
    };
    let rows = match parse_trace_csv(&text) {
        Ok(r) => r,
        Err(e) => return fail(err, Exit::InputError, e),
    };
    if let Err(e) = std::fs::write(output_path, render_svg(&rows)) {
        return fail(
            err,
            Exit::IoError,
            format!("cannot write {}: {e}", output_path.display()),
        );
    }
    Exit::Success
}

pub fn presets(out: &mut dyn Write) -> Exit {
    let rows = [
        ("srsran", DetectorPreset::Srsran, "instantaneous update"),
        (
            "oai(beta)",
            DetectorPreset::Oai { beta: 0.24 },
            "recursive averaging, gamma = 1 - beta",
        ),
    ];
    let _ = writeln!(out, "name       alpha  beta   gamma  note");
    for (name, preset, note) in rows {
        let w = preset.weights().expect("built-in presets are valid");
        let beta = if name == "srsran" {
            format!("{:<6}", w.beta)
        } else {
            "beta  ".to_string()
        };
        let gamma = if name == "srsran" {
            format!("{:<6}", w.gamma)
        } else {
            "1-beta".to_string()
        };
        let _ = writeln!(out, "{name:<10} {:<6} {beta} {gamma} {note}", w.alpha);
    }
    Exit::Success
}
