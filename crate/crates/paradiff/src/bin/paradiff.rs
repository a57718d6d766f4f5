use clap::{Parser, Subcommand};
use paradiff::harness::{self, ExperimentConfig, EXIT_CONFIG, EXIT_RUNTIME, SUITES};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "paradiff", version, about = "Run paradifferential energy experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the suite named in a TOML config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; overrides `output` in the config.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads for the parallel parts.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// List the available suites.
    List,
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::List => {
            for s in SUITES {
                println!("{s}");
            }
            ExitCode::SUCCESS
        }
        Command::Run { config, out, seed, threads } => {
            if let Some(k) = threads {
                if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
                    eprintln!("error: {e}");
                    return ExitCode::from(EXIT_RUNTIME as u8);
                }
            }
            let mut cfg = match ExperimentConfig::from_path(&config) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(EXIT_CONFIG as u8);
                }
            };
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let dir = out.or_else(|| cfg.output.clone()).unwrap_or_else(|| PathBuf::from("out").join(&cfg.experiment));
            let outcome = harness::run(&cfg, &dir);
            match &outcome {
                Ok(r) => {
                    print!("{}", r.text());
                    println!("wrote {}", dir.display());
                }
                Err(e) => eprintln!("error: {e}"),
            }
            ExitCode::from(harness::exit_code(&outcome) as u8)
        }
    }
}
