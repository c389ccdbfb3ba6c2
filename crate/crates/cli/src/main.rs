mod job;
mod output;
mod suite;
mod tasks;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use job::{parse_job, validate_window, JobSpec, Task};
use output::{emit, CliError, Outcome, Status};

#[derive(Parser)]
#[command(name = "hochgrav", version, about = "Exact Hochschild, cyclic and Poisson calculi with gravity brackets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hochschild homology dimensions per weight
    Hh(Opts),
    /// Negative cyclic homology, long exact sequence and truncation stability
    HcMinus(Opts),
    /// Poisson cohomology, unimodularity and BV checks
    Poisson(Opts),
    /// Gravity bracket table and axiom verification
    Gravity(Opts),
    /// Koszul dual, small models and the gravity comparison across duality
    Koszul(Opts),
    /// Verify a job; without --input, run the built-in suite
    Check(Opts),
    /// Run every task listed in the job file
    Run(Opts),
}

#[derive(clap::Args)]
struct Opts {
    #[arg(long)]
    input: Option<PathBuf>,
    /// Directory for JSON results and text summaries; JSON goes to stdout otherwise
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    pmax: Option<u32>,
    #[arg(long)]
    wmax: Option<u32>,
    #[arg(long)]
    utrunc: Option<u32>,
    #[arg(long)]
    nmax: Option<usize>,
    /// Largest `n + m` in generalized Jacobi checks
    #[arg(long)]
    arity_check: Option<usize>,
}

fn load(opts: &Opts) -> Result<JobSpec, CliError> {
    let path = opts
        .input
        .as_ref()
        .ok_or_else(|| CliError::Parse(vec!["--input <file> is required".into()]))?;
    let text = fs::read_to_string(path).map_err(|e| CliError::Parse(vec![format!("{}: {e}", path.display())]))?;
    let mut job = parse_job(&text).map_err(|errs| CliError::Parse(errs.iter().map(|e| format!("{}: {e}", path.display())).collect()))?;
    let w = &mut job.window;
    w.pmax = opts.pmax.unwrap_or(w.pmax);
    w.wmax = opts.wmax.unwrap_or(w.wmax);
    w.utrunc = opts.utrunc.or(w.utrunc);
    w.nmax = opts.nmax.unwrap_or(w.nmax);
    w.arity_check = opts.arity_check.unwrap_or(w.arity_check);
    let mut errs = Vec::new();
    validate_window(w, &mut errs);
    if !errs.is_empty() {
        return Err(CliError::Parse(errs.iter().map(ToString::to_string).collect()));
    }
    Ok(job)
}

fn finish(outcomes: Vec<Outcome>, out: Option<&Path>) -> Result<Status, CliError> {
    let mut status = Status::Pass;
    for o in &outcomes {
        emit(o, out)?;
        status = status.max(o.status);
    }
    Ok(status)
}

fn execute(cli: Cli) -> Result<Status, CliError> {
    let (task, opts) = match cli.command {
        Command::Hh(o) => (Some(Task::Hh), o),
        Command::HcMinus(o) => (Some(Task::HcMinus), o),
        Command::Poisson(o) => (Some(Task::Poisson), o),
        Command::Gravity(o) => (Some(Task::Gravity), o),
        Command::Koszul(o) => (Some(Task::Koszul), o),
        Command::Check(o) if o.input.is_none() => return finish(vec![suite::run()?], o.out.as_deref()),
        Command::Check(o) => (Some(Task::Check), o),
        Command::Run(o) => (None, o),
    };
    let job = load(&opts)?;
    let tasks = match task {
        Some(t) => vec![t],
        None if job.tasks.is_empty() => return Err(CliError::Parse(vec!["the job lists no tasks".into()])),
        None => job.tasks.clone(),
    };
    let outcomes = tasks
        .par_iter()
        .map(|&t| tasks::run_task(t, &job))
        .collect::<Result<Vec<_>, _>>()?;
    finish(outcomes, opts.out.as_deref())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 4 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(s) => ExitCode::from(s.exit_code() as u8),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
