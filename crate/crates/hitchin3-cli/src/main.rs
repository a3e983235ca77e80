//! Command-line front end: `analyze` runs job documents and emits reports,
//! `selfcheck` runs the built-in identity suite.
//!
//! Exit codes: 0 = existence verdict yes (all jobs), 1 = some verdict no,
//! 2 = input error, 3 = internal identity violation.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hitchin3::report::{reports_to_json, JobDocument};
use hitchin3::{run_job, selfcheck, Error, JobSpec, Report};

#[derive(Parser)]
#[command(name = "hitchin3", version, about = "Exact existence decisions for compatible harmonic metrics on rank-3 Hitchin-section Higgs bundles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a job document (one job or an array) and emit reports.
    Analyze {
        /// Input job document (JSON).
        #[arg(long)]
        input: PathBuf,
        /// Write the report here instead of stdout.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Run the full identity suites for every job.
        #[arg(long)]
        verify_identities: bool,
        /// Check this many random points of each feasible region.
        #[arg(long)]
        region_samples: Option<u32>,
        /// Seed for region sampling (overrides the per-job seed).
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run the built-in identity suite; nonzero exit on any failure.
    Selfcheck,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Analyze {
            input,
            report,
            verify_identities,
            region_samples,
            seed,
        } => analyze(input, report, verify_identities, region_samples, seed),
        Command::Selfcheck => run_selfcheck(),
    }
}

fn analyze(
    input: PathBuf,
    report_path: Option<PathBuf>,
    verify_identities: bool,
    region_samples: Option<u32>,
    seed: Option<u64>,
) -> ExitCode {
    let text = match fs::read_to_string(&input) {
        Ok(text) => text,
        Err(err) => {
            eprintln!("error: cannot read {}: {err}", input.display());
            return ExitCode::from(2);
        }
    };
    let document: JobDocument = match serde_json::from_str(&text) {
        Ok(doc) => doc,
        Err(err) => {
            eprintln!("error: malformed job document: {err}");
            return ExitCode::from(2);
        }
    };
    let single = document.is_single();
    let mut jobs: Vec<JobSpec> = document.jobs();
    for job in &mut jobs {
        if verify_identities {
            job.options.verify_identities = true;
        }
        if let Some(n) = region_samples {
            job.options.region_samples = n;
        }
        if let Some(s) = seed {
            job.options.seed = s;
        }
    }

    let mut reports: Vec<Report> = Vec::with_capacity(jobs.len());
    for (k, job) in jobs.iter().enumerate() {
        match run_job(job) {
            Ok(report) => reports.push(report),
            Err(err) => {
                eprintln!("error: job {k}: {err}");
                return exit_for(&err);
            }
        }
    }

    let rendered = if single {
        reports[0].to_json()
    } else {
        reports_to_json(&reports)
    };
    if let Some(path) = report_path {
        if let Err(err) = fs::write(&path, rendered) {
            eprintln!("error: cannot write {}: {err}", path.display());
            return ExitCode::from(2);
        }
    } else {
        print!("{rendered}");
    }

    if reports.iter().all(|r| r.exists_yes()) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn exit_for(err: &Error) -> ExitCode {
    ExitCode::from(err.exit_code() as u8)
}

fn run_selfcheck() -> ExitCode {
    let log = selfcheck();
    let mut failures = 0usize;
    for check in &log.checks {
        if check.passed {
            println!("PASS {}", check.name);
        } else {
            failures += 1;
            match &check.residual {
                Some(residual) => println!("FAIL {} (residual: {residual})", check.name),
                None => println!("FAIL {}", check.name),
            }
        }
    }
    println!("selfcheck: {} checks, {failures} failures", log.checks.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    }
}
