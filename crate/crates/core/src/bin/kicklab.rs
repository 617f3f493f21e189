use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use kicklab::scenario::{
    emit_plot_script, run_scenario, verify_all, write_atomic, write_outputs, Experiment, Fault,
    RunReport, ScenarioConfig, ScenarioOutput,
};
use kicklab::{parallel, KickError};

/// Momentum transfer in quantum position measurements.
#[derive(Parser)]
#[command(name = "kicklab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Diffraction through a sharply localized slit.
    SingleSlit(RunArgs),
    /// Diffraction through a delocalized slit, with recoil analysis.
    DelocalizedSlit(RunArgs),
    /// Which-way detection behind a double slit.
    WhichWay(RunArgs),
    /// Longitudinal momentum and energy balance.
    ZAxis(RunArgs),
    /// Runs every invariant suite and default scenario.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Scenario file of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for report.json and CSV files.
    #[arg(long, default_value = "kicklab-out")]
    out: PathBuf,
    /// Seed for randomized sweeps.
    #[arg(long)]
    seed: Option<u64>,
    /// Also write a plot script for the CSV files.
    #[arg(long)]
    plots: bool,
    /// Override a parameter, e.g. `--set epsilon=0.1`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

fn load_config(args: &RunArgs, family: &[Experiment]) -> Result<ScenarioConfig, KickError> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| {
                KickError::InvalidConfig(format!("cannot read {}: {e}", path.display()))
            })?;
            ScenarioConfig::parse(&text, Some(family[0]))?
        }
        None => ScenarioConfig::defaults(family[0]),
    };
    for o in &args.overrides {
        cfg.apply_override(o)?;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if !family.contains(&cfg.experiment) {
        return Err(KickError::InvalidConfig(format!(
            "config describes `{}`, which this subcommand does not run",
            cfg.experiment
        )));
    }
    Ok(cfg)
}

fn write_timing(dir: &Path, started: Instant) -> Result<(), KickError> {
    let timing = serde_json::json!({ "wall_time_seconds": started.elapsed().as_secs_f64() });
    write_atomic(dir, "timing.json", format!("{timing:#}\n").as_bytes())?;
    Ok(())
}

fn summarize(report: &RunReport) -> ExitCode {
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    for c in &report.checks {
        println!("{} {}", if c.passed { "PASS" } else { "FAIL" }, c.name);
    }
    let failed = report.failed_checks().count();
    println!("{}: {} checks, {} failed", report.experiment, report.checks.len(), failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(args: RunArgs, family: &[Experiment]) -> Result<ExitCode, KickError> {
    let started = Instant::now();
    let cfg = load_config(&args, family)?;
    let output: ScenarioOutput = run_scenario(&cfg)?;
    write_outputs(&args.out, &output)?;
    write_timing(&args.out, started)?;
    if args.plots {
        emit_plot_script(&args.out)?;
    }
    Ok(summarize(&output.report))
}

fn verify(seed: u64, out: Option<PathBuf>, fault: Option<String>) -> Result<ExitCode, KickError> {
    let started = Instant::now();
    let fault = fault.map(|f| f.parse::<Fault>()).transpose()?;
    let report = verify_all(seed, fault)?;
    if let Some(dir) = out {
        fs::create_dir_all(&dir)?;
        write_atomic(&dir, "report.json", report.to_json().as_bytes())?;
        write_timing(&dir, started)?;
    }
    Ok(summarize(&report))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    parallel::configure_from_env();
    let result = match cli.command {
        Command::SingleSlit(a) => run(a, &[Experiment::SingleSlitLocalized]),
        Command::DelocalizedSlit(a) => run(a, &[Experiment::SingleSlitDelocalized]),
        Command::WhichWay(a) => run(a, &[Experiment::WhichWay, Experiment::WhichWayViolated]),
        Command::ZAxis(a) => run(a, &[Experiment::ZAxis]),
        Command::Verify { seed, out, inject_fault } => verify(seed, out, inject_fault),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(e.exit_code() as u8)
    })
}
