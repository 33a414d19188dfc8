use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dissiplab::report::{run, run_case, report_json, Case, RunConfig, RunError, StageId};

/// Numerical certification of strict dissipativity for 1-D compressible flow
/// with relaxed heat conduction.
#[derive(Parser)]
#[command(name = "dissiplab", version, about)]
struct Cli {
    /// Path to the JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for report and CSV artifacts (overrides the config).
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Write the stage's CSV artifact to this path.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,

    /// Override the decay horizon t_max.
    #[arg(long, global = true)]
    tmax: Option<f64>,

    /// Override the sampling seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Override the case selection.
    #[arg(long, global = true, value_enum)]
    case: Option<CaseArg>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum CaseArg {
    Viscous,
    Inviscid,
    Both,
}

impl From<CaseArg> for Case {
    fn from(c: CaseArg) -> Case {
        match c {
            CaseArg::Viscous => Case::Viscous,
            CaseArg::Inviscid => Case::Inviscid,
            CaseArg::Both => Case::Both,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Verify strict hyperbolicity (characteristic speeds, discriminant).
    CheckHyperbolic,
    /// Verify the genuine-coupling condition.
    CheckCoupling,
    /// Construct and verify the compensating matrix.
    Compensate,
    /// Sweep the dispersion relation and report the decay constant.
    Dispersion,
    /// Measure decay rates of the linearized dynamics.
    Decay,
    /// Run the full verification pipeline.
    VerifyAll,
}

fn init_threads() {
    if let Ok(v) = std::env::var("DISSIPLAB_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig, RunError> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| RunError::Config("--config is required".into()))?;
    let mut config = RunConfig::from_file(path)?;
    if let Some(out) = &cli.output {
        config.output_dir = Some(out.clone());
    }
    if let Some(tmax) = cli.tmax {
        config.decay.t_max = tmax;
    }
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(case) = cli.case {
        config.case = case.into();
    }
    config.validate()?;
    Ok(config)
}

fn stage_command(config: &RunConfig, stop: StageId, csv: &Option<PathBuf>) -> Result<bool, RunError> {
    let mut all_pass = true;
    let mut reports = Vec::new();
    for (label, model) in config.resolved_cases() {
        let out = run_case(config, label, &model, stop);
        if let Some(path) = csv {
            let per_case = |p: &PathBuf| -> PathBuf {
                if config.resolved_cases().len() == 1 {
                    p.clone()
                } else {
                    p.with_file_name(format!(
                        "{}_{label}",
                        p.file_name().unwrap_or_default().to_string_lossy()
                    ))
                }
            };
            if stop == StageId::Dissipativity {
                if let Some(curve) = &out.curve {
                    std::fs::write(per_case(path), dissiplab::dispersion::curve_to_csv(curve))?;
                }
            }
            if stop == StageId::Decay {
                if let Some(trace) = &out.trace {
                    std::fs::write(per_case(path), dissiplab::decay::trace_to_csv(trace))?;
                }
            }
        }
        all_pass &= out.report.pass;
        reports.push(out.report);
    }
    let json = serde_json::to_string_pretty(&reports)
        .map_err(|e| RunError::Config(e.to_string()))?;
    println!("{json}");
    Ok(all_pass)
}

fn execute(cli: &Cli) -> Result<bool, RunError> {
    let config = load_config(cli)?;
    match cli.command {
        Command::CheckHyperbolic => stage_command(&config, StageId::Hyperbolicity, &cli.csv),
        Command::CheckCoupling => stage_command(&config, StageId::Coupling, &cli.csv),
        Command::Compensate => stage_command(&config, StageId::Compensating, &cli.csv),
        Command::Dispersion => stage_command(&config, StageId::Dissipativity, &cli.csv),
        Command::Decay => stage_command(&config, StageId::Decay, &cli.csv),
        Command::VerifyAll => {
            let report = run(&config)?;
            println!("{}", report_json(&report)?);
            Ok(report.overall_pass)
        }
    }
}

fn main() -> ExitCode {
    init_threads();
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
