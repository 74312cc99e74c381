use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use linresp_cli::pipeline::{
    json_line, run_finalstate, run_resources, run_response, validate_config, write_finalstate, write_response,
};
use linresp_cli::{CliError, CliResult, RunConfig};

#[derive(Parser)]
#[command(
    name = "linresp",
    version,
    about = "Phase-estimation linear response on Hubbard lattices"
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    /// Run description (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the seed in the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write exact quantities only; skip sampling.
    #[arg(long, global = true)]
    exact_only: bool,
    /// Overrides the output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Clone, Copy)]
enum Verb {
    /// Response CSV and metadata JSON.
    Respond,
    /// Final-state momentum report for selected outcomes.
    Finalstate,
    /// Qubit, time and repetition estimates as JSON on stdout.
    Resources,
    /// Parse and check the config without running anything.
    ValidateConfig,
}

impl Verb {
    fn name(self) -> &'static str {
        match self {
            Verb::Respond => "respond",
            Verb::Finalstate => "finalstate",
            Verb::Resources => "resources",
            Verb::ValidateConfig => "validate-config",
        }
    }
}

fn run(cli: &Cli) -> CliResult<String> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::config("--config", "a config file is required"))?;
    let mut config = RunConfig::load(path)?;
    config.apply_overrides(cli.seed, cli.exact_only, cli.out.clone());
    let dir = config.output.dir.clone();
    match cli.verb {
        Verb::Respond => {
            let run = run_response(&config)?;
            let written = write_response(&run, &dir)?;
            Ok(json_line(&written))
        }
        Verb::Finalstate => {
            let report = run_finalstate(&config)?;
            Ok(json_line(&[write_finalstate(&report, &dir)?]))
        }
        Verb::Resources => Ok(serde_json::to_string_pretty(&run_resources(&config)?).expect("serializable")),
        Verb::ValidateConfig => Ok(json_line(&validate_config(&config)?)),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", json_line(&e.record(cli.verb.name())));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
