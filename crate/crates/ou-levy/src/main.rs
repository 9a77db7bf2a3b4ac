use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ou_levy::commands::{self, Outcome, ALL_EXAMPLES};
use ou_levy::config::{ExperimentConfig, Format, Overrides};
use ou_levy::parallel;
use ou_levy::CliError;
use ou_levy_core::cameron_martin::ExampleId;

#[derive(Parser)]
#[command(
    name = "ou-levy",
    version,
    about = "Lévy-driven Ornstein–Uhlenbeck laboratory on diagonal spectral models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// TOML config, or a JSON report whose embedded config is re-run.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides `output.directory`).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    replicas: Option<u64>,
    /// Comma-separated subset of json,csv.
    #[arg(long, value_delimiter = ',')]
    format: Option<Vec<Format>>,
    /// Exit with status 4 when the run's own acceptance check fails.
    #[arg(long)]
    self_check: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Deterministic equivalence criteria for the configured model.
    Check(Common),
    /// Simulate sample paths and a companion moment file.
    Simulate(Common),
    /// Importance test between the two generators.
    Girsanov(Common),
    /// Pure-jump rigidity experiment.
    Rigidity(Common),
    /// Reproduce the built-in counterexamples (all when none are named).
    Reproduce {
        #[arg(value_parser = parse_example)]
        examples: Vec<ExampleId>,
        #[command(flatten)]
        common: Common,
    },
}

fn parse_example(s: &str) -> Result<ExampleId, String> {
    s.parse().map_err(|_| {
        let names: Vec<&str> = ALL_EXAMPLES.iter().map(|e| e.as_str()).collect();
        format!(
            "unknown example `{s}` (expected one of {})",
            names.join(", ")
        )
    })
}

impl Common {
    fn overrides(&self) -> Overrides {
        Overrides {
            out: self.out.clone(),
            seed: self.seed,
            replicas: self.replicas,
            formats: self.format.clone(),
        }
    }

    fn load(&self) -> Result<ExperimentConfig, CliError> {
        let path = self
            .config
            .as_ref()
            .ok_or_else(|| CliError::Config("--config is required for this command".into()))?;
        ExperimentConfig::load(path)?.apply(&self.overrides())
    }
}

fn run(cli: Cli) -> Result<(Outcome, bool), CliError> {
    let pool = parallel::pool(parallel::threads_from_env()?)?;
    Ok(match cli.command {
        Command::Check(c) => (commands::cmd_check(&c.load()?)?, c.self_check),
        Command::Simulate(c) => (commands::cmd_simulate(&c.load()?, &pool)?, c.self_check),
        Command::Girsanov(c) => (commands::cmd_girsanov(&c.load()?, &pool)?, c.self_check),
        Command::Rigidity(c) => (commands::cmd_rigidity(&c.load()?, &pool)?, c.self_check),
        Command::Reproduce { examples, common } => {
            let base = match &common.config {
                Some(_) => common.load()?,
                None => {
                    ExperimentConfig::for_example(ExampleId::NoL2).apply(&common.overrides())?
                }
            };
            let ids = if !examples.is_empty() {
                examples
            } else if let (Some(id), Some(_)) = (base.run.example, &common.config) {
                vec![id]
            } else {
                ALL_EXAMPLES.to_vec()
            };
            (commands::cmd_reproduce(&ids, &base)?, common.self_check)
        }
    })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((outcome, self_check)) => {
            // a closed stdout (e.g. piped into `head`) is not an error
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(outcome.summary.as_bytes());
            for f in &outcome.files {
                let _ = writeln!(out, "wrote {}", f.display());
            }
            match outcome.self_check_failure {
                Some(why) if self_check => {
                    let e = CliError::SelfCheck(why);
                    eprintln!("ou-levy: {e}");
                    e.exit_code()
                }
                _ => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("ou-levy: {e}");
            e.exit_code()
        }
    }
}
