use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use formal_schubert::root_system::DEFAULT_MAX_WEYL;
use formal_schubert::Error;
use formal_schubert_cli::{render, run_job, Command, JobSpec, RunOptions};

#[derive(Parser)]
#[command(name = "formal-schubert", version, about = "Equivariant oriented Schubert calculus on flag varieties")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a JSON job file.
    Run {
        job: PathBuf,
        /// Write the result here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Truncation degree; overrides the job file.
        #[arg(long)]
        trunc: Option<u32>,
        /// Worker threads (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
        /// Also cross-check push-forwards against random coset representatives.
        #[arg(long)]
        verify_representatives: bool,
        /// Add wall-clock time to the output (makes it non-reproducible).
        #[arg(long)]
        timing: bool,
    },
}

fn max_weyl() -> Result<usize, Error> {
    match std::env::var("FS_MAX_WEYL") {
        Err(_) => Ok(DEFAULT_MAX_WEYL),
        Ok(v) => v
            .parse()
            .map_err(|_| Error::usage(format!("FS_MAX_WEYL must be a positive integer, got {v:?}"))),
    }
}

/// Runs the job; `Ok(false)` means a verification suite reported a failure.
fn run(cmd: Cmd) -> Result<bool, Error> {
    let Cmd::Run { job, out, trunc, threads, verify_representatives, timing } = cmd;
    if let Some(k) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| Error::usage(format!("thread pool: {e}")))?;
    }
    let opts = RunOptions { trunc, verify_representatives, max_weyl: max_weyl()?, timing };
    let spec = JobSpec::load(&job)?;
    let result = run_job(&spec, &opts)?;
    let text = render(&result);
    match out {
        Some(path) => std::fs::write(&path, text)
            .map_err(|e| Error::usage(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(spec.command != Command::Verify || result["result"]["passed"] == true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("formal-schubert: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
