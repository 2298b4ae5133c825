//! `holorot`: command-line front end for decomposition reports, rotability
//! classification, calibration sweeps and the invariant verification suites.

mod commands;
mod output;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use commands::{CalibrateArgs, ClassifyArgs, DecomposeArgs, GenerateArgs, VerifyArgs};

#[derive(Parser)]
#[command(
    name = "holorot",
    version,
    about = "Holonomy decompositions of 2-forms and rotability of constant-coefficient curvature models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded curvature model and write it as JSON
    Generate(GenerateArgs),
    /// Decompose a model into the holonomy summands and report norms
    Decompose(DecomposeArgs),
    /// Classify rotability or compute the rotation sphere of a model
    Classify(ClassifyArgs),
    /// Sweep the calibration pairing over the compatible-structure family
    Calibrate(CalibrateArgs),
    /// Run the invariant verification suites
    Verify(VerifyArgs),
}

fn main() {
    // HOLOROT_THREADS caps the sweep parallelism (default: all cores)
    if let Ok(value) = std::env::var("HOLOROT_THREADS") {
        if let Ok(n) = value.parse::<usize>() {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global()
                .ok();
        }
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let exit = match cli.command {
        Command::Generate(args) => commands::run_generate(&args),
        Command::Decompose(args) => commands::run_decompose(&args),
        Command::Classify(args) => commands::run_classify(&args),
        Command::Calibrate(args) => commands::run_calibrate(&args),
        Command::Verify(args) => commands::run_verify(&args),
    };
    match exit {
        Ok(code) => std::process::exit(code),
        Err(message) => {
            eprintln!("error: {message}");
            std::process::exit(1);
        }
    }
}
