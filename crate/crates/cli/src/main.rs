use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ppmon_cli::commands::{self, parse_beta, parse_counts, PredictiveInput};
use ppmon_cli::{with_threads, CliError, Format, RunConfig};

#[derive(Parser)]
#[command(
    name = "ppmon",
    version,
    about = "Predictive-probability monitoring with delayed response confirmation"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML configuration; the bundled reference design when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides run.seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides run.n_sims.
    #[arg(long, global = true)]
    sims: Option<u64>,
    /// Worker threads for simulation batches.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Quasi-posterior parameters from interim counts.
    Update {
        /// confirmed responses,pending responses,confirmed non-responses,pending non-responses
        #[arg(long)]
        counts: String,
    },
    /// Predictive probability of end-of-trial success and the success threshold.
    Predprob {
        /// Interim counts, as for `update`.
        #[arg(
            long,
            conflicts_with = "posterior",
            required_unless_present = "posterior"
        )]
        counts: Option<String>,
        /// Posterior parameters alpha,beta.
        #[arg(long)]
        posterior: Option<String>,
        /// Participants still to enroll; n_max minus the counted total by default.
        #[arg(long)]
        remaining: Option<u64>,
    },
    /// Operating characteristics for every configured scenario and policy.
    Simulate,
    /// Type I error and power over the (lambda, theta_u) grid.
    Calibrate,
    /// Density, mean and credible interval of the rate difference.
    Diffdist,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let c = &cli.common;
    let mut cfg = RunConfig::load(c.config.as_deref())?;
    if let Some(seed) = c.seed {
        cfg.seed = seed;
    }
    if let Some(sims) = c.sims {
        if sims == 0 {
            return Err(CliError::Config("--sims must be at least 1".into()));
        }
        cfg.n_sims = sims;
    }

    let mut failure = None;
    let text = match &cli.command {
        Command::Update { counts } => commands::cmd_update(&cfg, &parse_counts(counts)?, c.format),
        Command::Predprob {
            counts,
            posterior,
            remaining,
        } => {
            let input = match (counts, posterior) {
                (Some(t), _) => PredictiveInput::Counts(parse_counts(t)?),
                (None, Some(p)) => PredictiveInput::Posterior(parse_beta(p)?),
                (None, None) => unreachable!("clap requires one of --counts or --posterior"),
            };
            commands::cmd_predprob(&cfg, input, *remaining, c.format)?
        }
        Command::Simulate => with_threads(c.threads, || commands::cmd_simulate(&cfg, c.format))??,
        Command::Calibrate => {
            let (text, result) =
                with_threads(c.threads, || commands::cmd_calibrate(&cfg, c.format))??;
            if let Some(msg) = result.diagnostic {
                failure = Some(CliError::NoResult(msg));
            }
            text
        }
        Command::Diffdist => commands::cmd_diffdist(&cfg, c.format)?,
    };

    match &c.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    failure.map_or(Ok(()), Err)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ppmon: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
