use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use rachjam::harness::commands;

#[derive(Parser)]
#[command(
    name = "rachjam",
    version,
    about = "Msg1 jamming of the 5G random-access channel"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario, write its per-RO trace CSV and print a summary.
    Simulate {
        scenario: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Run a scenario once per value of one parameter.
    Sweep {
        scenario: PathBuf,
        /// attacker.period, attacker.power, attacker.early_start,
        /// detector.beta, detector.delta or ue.power (short names accepted)
        #[arg(long)]
        axis: String,
        /// Comma-separated values, e.g. `1,2,16`.
        #[arg(long, allow_hyphen_values = true)]
        values: String,
        #[arg(short, long)]
        output_dir: PathBuf,
    },
    /// Check the simulated threshold trace against the analytic model.
    Compare { scenario: PathBuf },
    /// Render a trace CSV as a two-panel SVG.
    Plot {
        trace: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// List the detector presets.
    Presets,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = io::stdout().lock();
    let mut err = io::stderr().lock();
    let exit = match cli.command {
        Command::Simulate { scenario, output } => {
            commands::simulate(&scenario, &output, &mut out, &mut err)
        }
        Command::Sweep {
            scenario,
            axis,
            values,
            output_dir,
        } => commands::sweep(&scenario, &axis, &[values], &output_dir, &mut out, &mut err),
        Command::Compare { scenario } => commands::compare(&scenario, &mut out, &mut err),
        Command::Plot { trace, output } => commands::plot(&trace, &output, &mut err),
        Command::Presets => commands::presets(&mut out),
    };
    ExitCode::from(exit.code())
}
