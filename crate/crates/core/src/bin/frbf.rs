use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use frbf::experiment::{self, ExperimentConfig, Format, Mode, Overrides};
use frbf::interpolate::TailKind;
use frbf::kernels::Family;
use frbf::Error;

#[derive(Debug, Parser)]
#[command(name = "frbf", about = "Radial kernel interpolation and collocation sweeps")]
struct Cli {
    /// interpolate, collocate or kernel-table
    mode: Mode,
    #[arg(long)]
    config: PathBuf,
    #[arg(long = "N")]
    n: Option<f64>,
    /// Comma-separated alpha values
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    alpha: Option<Vec<f64>>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
    #[arg(long)]
    family: Option<Family>,
    #[arg(long)]
    tail: Option<TailKind>,
    /// Domain bounds as `a,b`
    #[arg(long, value_delimiter = ',', num_args = 2, allow_hyphen_values = true)]
    domain: Option<Vec<f64>>,
    #[arg(long)]
    ni: Option<usize>,
    #[arg(long)]
    nb: Option<usize>,
    #[arg(long = "M")]
    m_target: Option<f64>,
    #[arg(long)]
    seed_skip: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<Format>,
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let mut config = match ExperimentConfig::load(&cli.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    config.apply(&Overrides {
        n: cli.n,
        alpha: cli.alpha,
        beta: cli.beta,
        family: cli.family,
        tail: cli.tail,
        domain: cli.domain.map(|d| [d[0], d[1]]),
        ni: cli.ni,
        nb: cli.nb,
        m_target: cli.m_target,
        seed_skip: cli.seed_skip,
        out: cli.out,
        format: cli.format,
    });
    match experiment::run(cli.mode, &config) {
        Ok(output) => {
            if let experiment::RunOutput::Sweep(table) = &output {
                for s in &table.skipped {
                    eprintln!("skipped alpha = {}: {}", s.alpha, s.reason);
                }
            }
            ExitCode::from(output.exit_code() as u8)
        }
        Err(e @ (Error::Config(_) | Error::Restriction(_) | Error::Io(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
