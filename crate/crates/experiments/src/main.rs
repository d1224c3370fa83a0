use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use annvv_experiments::run::{combine_exit_codes, replay, run_corpus, write_run};
use annvv_experiments::{Command, ExperimentError, Format, RunConfig};

#[derive(Parser)]
#[command(name = "annvv", version, about = "Annihilators of Valabrega-Valla modules over local rings")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Reduced Groebner bases and colengths of the declared ideals.
    Gb(RunArgs),
    /// Depth of the associated graded ring.
    DepthG(RunArgs),
    /// Valabrega-Valla modules of sampled superficial sequences.
    Vv(RunArgs),
    /// Annihilators of sampled Valabrega-Valla modules.
    Ann(RunArgs),
    /// Monte-Carlo upper estimate of a_r(I).
    Ar(RunArgs),
    /// Estimates of the ideals q_i(I).
    Q(RunArgs),
    /// Scan over the powers I^l.
    Powers(RunArgs),
    /// Run every property check.
    VerifyAll(RunArgs),
    /// Re-run a stored manifest and compare the reports byte for byte.
    Replay {
        run_dir: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Input documents.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sequences sampled for a_r estimates.
    #[arg(long, default_value_t = 32)]
    samples: usize,
    /// Degree bound for superficiality and Koszul certification.
    #[arg(long)]
    nmax: Option<u32>,
    /// Consecutive zero pieces before a VV module counts as stabilized.
    #[arg(long, default_value_t = 3)]
    window: u32,
    /// Depth oracle: vv, resolution or both.
    #[arg(long, default_value = "both")]
    strategy: String,
    /// Root directory for run directories; reports go to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: Format,
    /// Length of the superficial sequences.
    #[arg(long)]
    r: Option<usize>,
    /// Largest power in the powers scan.
    #[arg(long, default_value_t = 3)]
    lmax: u32,
    /// Sequences sampled per power in the powers scan.
    #[arg(long, default_value_t = 8)]
    powers_samples: usize,
}

impl RunArgs {
    fn config(&self) -> RunConfig {
        RunConfig {
            seed: self.seed,
            samples: self.samples,
            nmax: self.nmax,
            window: self.window,
            strategy: self.strategy.clone(),
            r: self.r,
            lmax: self.lmax,
            powers_samples: self.powers_samples,
            format: self.format,
        }
    }
}

fn run_one(command: Command, args: &RunArgs, input: &PathBuf) -> i32 {
    let document = match std::fs::read_to_string(input) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("{}: {e}", input.display());
            return 2;
        }
    };
    let config = args.config();
    let start = Instant::now();
    let output = match run_corpus(&document, command, &config) {
        Ok(o) => o,
        Err(e @ ExperimentError::Input(_)) => {
            eprintln!("{}: {e}", input.display());
            return 2;
        }
        Err(e) => {
            eprintln!("{}: {e}", input.display());
            return 1;
        }
    };
    for (ideal, status) in &output.statuses {
        eprintln!("{} {ideal}: {status:?}", input.display());
    }
    match &args.out {
        Some(root) => {
            let elapsed = start.elapsed().as_millis() as u64;
            match write_run(root, &document, &config, &output, elapsed) {
                Ok(dir) => println!("{}", dir.display()),
                Err(e) => {
                    eprintln!("{}: {e}", input.display());
                    return 1;
                }
            }
        }
        None => {
            if config.format != Format::Csv {
                print!("{}", output.report);
            }
            if let Some(csv) = &output.csv {
                print!("{csv}");
            }
        }
    }
    output.exit_code
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Sub::Replay { run_dir } => {
            return match replay(&run_dir) {
                Ok(outcome) => {
                    for (file, same) in &outcome.files {
                        println!("{file}: {}", if *same { "identical" } else { "DIFFERS" });
                    }
                    ExitCode::from(if outcome.identical() { 0 } else { 1 })
                }
                Err(e) => {
                    eprintln!("{}: {e}", run_dir.display());
                    ExitCode::from(2)
                }
            };
        }
        Sub::Gb(a) => (Command::Gb, a),
        Sub::DepthG(a) => (Command::DepthG, a),
        Sub::Vv(a) => (Command::Vv, a),
        Sub::Ann(a) => (Command::Ann, a),
        Sub::Ar(a) => (Command::Ar, a),
        Sub::Q(a) => (Command::Q, a),
        Sub::Powers(a) => (Command::Powers, a),
        Sub::VerifyAll(a) => (Command::VerifyAll, a),
    };
    let codes: Vec<i32> = args.inputs.iter().map(|i| run_one(command, &args, i)).collect();
    ExitCode::from(combine_exit_codes(&codes) as u8)
}
