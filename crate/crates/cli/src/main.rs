use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};

use qspectral_cli::{cmd_amplify_trace, cmd_cluster_classical, cmd_cluster_quantum, cmd_graph, run_selftest, ExperimentConfig};

#[derive(Parser)]
#[command(name = "qspectral", version, about = "Spectral clustering with phase estimation and amplitude amplification")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML experiment configuration; defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Overrides the configured seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Overrides the configured output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, short, global = true)]
    verbose: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Similarity graph, spectrum and eigengap choice.
    Graph,
    /// Classical spectral clustering.
    ClusterClassical,
    /// Amplification trajectories for every configured mode and bias.
    AmplifyTrace,
    /// Ranks indicator vectors through the amplified readout.
    ClusterQuantum,
    /// Runs the built-in invariant suite.
    Selftest,
}

fn load(cli: &Cli) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &cli.out {
        cfg.out = out.clone();
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<bool> {
    if let Command::Selftest = cli.command {
        let checks = run_selftest();
        for c in &checks {
            match &c.outcome {
                Ok(detail) => println!("[PASS] {}: {}: {detail}", c.module, c.name),
                Err(reason) => println!("[FAIL] {}: {}: {reason}", c.module, c.name),
            }
        }
        let passed = checks.iter().filter(|c| c.passed()).count();
        println!("selftest: {passed}/{} checks passed", checks.len());
        return Ok(passed == checks.len());
    }
    let cfg = load(cli)?;
    let written = match cli.command {
        Command::Graph => cmd_graph(&cfg)?,
        Command::ClusterClassical => cmd_cluster_classical(&cfg)?,
        Command::AmplifyTrace => cmd_amplify_trace(&cfg)?,
        Command::ClusterQuantum => cmd_cluster_quantum(&cfg)?,
        Command::Selftest => unreachable!(),
    };
    for path in written {
        println!("{}", path.display());
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.verbose { "debug" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
