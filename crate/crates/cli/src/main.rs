use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use noma_core::audit::run_audit;
use noma_core::experiment::{self, load_config, ExperimentSpec, Scheme, SweepVariable};
use noma_core::gp::{run_gp, GpOptions};
use noma_core::iwf::{run_iwf, IwfOptions};
use noma_core::matching::{run_matching_with, MatchingOptions};
use noma_core::{ExecMode, ExperimentError};

#[derive(Parser)]
#[command(name = "noma-sim", version, about = "Uplink NOMA resource allocation simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scheme x frame grid and write CSV results.
    Run(RunArgs),
    /// Parse and validate a config file (defaults when none is given).
    ValidateConfig {
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Brute-force and closed-form self-checks on small instances.
    OracleAudit {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        instances: usize,
    },
    /// Convergence traces of one frame.
    Trace {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        frame: u64,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory; overrides the config file.
    #[arg(long, env = "NOMA_SIM_OUT")]
    out: Option<PathBuf>,
    #[arg(long)]
    frames: Option<usize>,
    /// Base seed; overrides `rng_seed` from the config file.
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated scheme names.
    #[arg(long)]
    schemes: Option<String>,
    /// M, K or none.
    #[arg(long)]
    sweep: Option<String>,
    /// Comma-separated sweep values.
    #[arg(long, value_delimiter = ',')]
    values: Option<Vec<usize>>,
    /// Worker threads (0 for all cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Run frames one after another on the calling thread.
    #[arg(long)]
    sequential: bool,
}

/// Failure classes mapped onto exit codes.
enum Failure {
    Validation(anyhow::Error),
    Runtime(anyhow::Error),
}

impl From<ExperimentError> for Failure {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Config(_)
            | ExperimentError::Parse(_)
            | ExperimentError::UnknownScheme(_)
            | ExperimentError::UnknownSweep(_)
            | ExperimentError::Invalid(_) => Failure::Validation(e.into()),
            _ => Failure::Runtime(e.into()),
        }
    }
}

fn base_spec(config: Option<&PathBuf>) -> Result<ExperimentSpec, Failure> {
    match config {
        // An unreadable config file is bad input, not a run failure.
        Some(path) => load_config(path).map_err(|e| match e {
            ExperimentError::Io { .. } => Failure::Validation(e.into()),
            other => other.into(),
        }),
        None => Ok(ExperimentSpec::default()),
    }
}

fn run(args: RunArgs) -> Result<(), Failure> {
    let mut spec = base_spec(args.config.as_ref())?;
    if let Some(out) = args.out {
        spec.out_dir = out;
    }
    if let Some(f) = args.frames {
        spec.frames = f;
    }
    if let Some(s) = args.seed {
        spec.base.rng_seed = s;
    }
    if let Some(s) = args.schemes {
        spec.schemes = Scheme::parse_list(&s)?;
    }
    if let Some(s) = args.sweep {
        spec.sweep = s.parse::<SweepVariable>()?;
    }
    if let Some(v) = args.values {
        spec.values = v;
    }
    spec.jobs = args.jobs;
    if args.sequential {
        spec.mode = ExecMode::Sequential;
    }
    spec.validate()?;
    log::info!(
        "running {} frames x {} sweep values into {}",
        spec.frames,
        spec.values.len().max(1),
        spec.out_dir.display()
    );
    let out = experiment::run_experiment(&spec)?;
    println!("scheme,sweep_value,frames,errors,throughput_mean,throughput_ci95");
    for a in &out.aggregates {
        println!(
            "{},{},{},{},{:.4},{:.4}",
            a.scheme, a.sweep_value, a.frames, a.errors, a.throughput.mean, a.throughput.ci95
        );
    }
    Ok(())
}

fn trace(config: Option<PathBuf>, frame: u64, seed: Option<u64>) -> Result<(), Failure> {
    let mut spec = base_spec(config.as_ref())?;
    if let Some(s) = seed {
        spec.base.rng_seed = s;
    }
    spec.base.validate().map_err(ExperimentError::from)?;
    let cfg = &spec.base;
    let (frame_seed, channel) = experiment::frame_channel(cfg, 0, frame)?;
    println!("# frame {frame}, seed {frame_seed}, M={} N={} K={}", cfg.num_users, cfg.num_subchannels, cfg.max_per_subchannel);

    let matched = run_matching_with(&channel, cfg, &MatchingOptions::default());
    println!("stage,iteration,objective");
    for (pass, thr) in &matched.trace {
        println!("matching,{pass},{thr}");
    }
    let iwf = run_iwf(&channel, &matched.assignment, cfg, &IwfOptions::default());
    for (i, v) in iwf.trace.iter().enumerate() {
        println!("iwf,{i},{v}");
    }
    let gp = run_gp(&channel, &matched.assignment, cfg, &GpOptions::default());
    for (i, v) in gp.trace.iter().enumerate() {
        println!("gp,{i},{v}");
    }
    println!(
        "# matching passes {} (converged {}), iwf sweeps {} (converged {}), gp rounds {} (converged {})",
        matched.outer_iterations, matched.converged, iwf.sweeps, iwf.converged, gp.rounds, gp.converged
    );
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let informational = !e.use_stderr();
            let _ = e.print();
            return if informational { ExitCode::SUCCESS } else { ExitCode::from(1) };
        }
    };
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::ValidateConfig { config } => base_spec(config.as_ref())
            .and_then(|spec| spec.validate().map_err(Failure::from))
            .map(|()| println!("config ok")),
        Command::OracleAudit { seed, instances } => {
            let checks = run_audit(seed, instances);
            println!("{:<34} {:<6} detail", "check", "result");
            for c in &checks {
                println!("{:<34} {:<6} {}", c.name, if c.passed { "PASS" } else { "FAIL" }, c.detail);
            }
            if checks.iter().all(|c| c.passed) {
                Ok(())
            } else {
                Err(Failure::Validation(anyhow::anyhow!("audit checks failed")))
            }
        }
        Command::Trace { config, frame, seed } => trace(config, frame, seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {:#}", e.context("run failed"));
            ExitCode::from(2)
        }
    }
}
