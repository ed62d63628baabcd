use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use copub::pipeline::{run, Command, Overrides, RunConfig};

#[derive(Parser)]
#[command(name = "copub", version, about = "Outlet networks from contributor co-publication data")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// JSON run configuration
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Null-ensemble sample count
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Backbone Z threshold
    #[arg(long, global = true)]
    z: Option<f64>,
    /// Topic counts, comma separated
    #[arg(long, global = true, value_delimiter = ',')]
    topics: Option<Vec<usize>>,
    /// Label randomizations per Z-test
    #[arg(long, global = true)]
    randomizations: Option<usize>,
    /// Worker threads (results do not depend on this)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output directory
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Parse the corpus, clean bylines, write contributor descriptives
    Ingest,
    /// Projection, null ensemble, significance table, backbone and clusters
    Network,
    /// Rank outlet classifications by modularity
    Modularity,
    /// Topic model, topic Z tables and the style table
    Content,
    /// Threshold sweep and leave-one-outlet-out reruns
    Robustness,
    /// Every stage in order
    All,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let mut cfg = match &cli.config {
        Some(p) => match RunConfig::load(p) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: {}", e);
                return ExitCode::from(e.exit_code() as u8);
            }
        },
        None => RunConfig::default(),
    };
    cfg.apply(&Overrides {
        seed: cli.seed,
        samples: cli.samples,
        z: cli.z,
        topics: cli.topics.clone(),
        randomizations: cli.randomizations,
        threads: cli.threads,
        out: cli.out.clone(),
    });
    let command = match cli.command {
        Cmd::Ingest => Command::Ingest,
        Cmd::Network => Command::Network,
        Cmd::Modularity => Command::Modularity,
        Cmd::Content => Command::Content,
        Cmd::Robustness => Command::Robustness,
        Cmd::All => Command::All,
    };
    match run(command, &cfg) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
