mod args;
mod commands;
mod config;

use std::io::Write;
use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches};
use ingleton_core::census::CENSUS_FORMAT_VERSION;

use args::{Cli, Command, Input};
use commands::{Failure, Plan, Report, Source, Task};
use config::Config;

const DEFAULT_SEED: u64 = 1;
const DEFAULT_C: f64 = 0.95;
const DEFAULT_GAMMA: f64 = 0.486;
const DEFAULT_TRIALS: usize = 200;
const DEFAULT_BIT_WIDTH: u32 = 64;
const DEFAULT_ATTEMPTS: u32 = 3;

fn source(input: Input) -> Source {
    if let Some(name) = input.named {
        Source::Named(name.to_string())
    } else if let Some((n, r, gamma)) = input.gs {
        Source::Gs { n, r, gamma }
    } else if let Some((n, r)) = input.gs_best {
        Source::GsBest { n, r }
    } else {
        Source::File(input.matroid.expect("clap requires one input"))
    }
}

fn resolve(cli: Cli) -> Result<Plan, Failure> {
    let config = match &cli.config {
        Some(path) => Config::load(path).map_err(Failure::Usage)?,
        None => Config::default(),
    };
    let jobs = cli
        .jobs
        .or(config.jobs)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if jobs == 0 {
        return Err(Failure::Usage("--jobs must be at least 1".into()));
    }
    let task = match cli.command {
        Command::Check {
            input,
            brute,
            sampled,
        } => Task::Check {
            input: source(input),
            brute,
            sampled,
        },
        Command::Census {
            n,
            r,
            classify,
            verify_theorem_forty,
            strategy,
        } => Task::Census {
            n,
            r,
            classify,
            verify_theorem_forty,
            strategy,
        },
        Command::Construct { input } => Task::Construct {
            input: source(input),
        },
        Command::Sample {
            n,
            r,
            c,
            gamma,
            trials,
            emit_matroids,
        } => Task::Sample {
            n,
            r,
            c: c.or(config.sample.c).unwrap_or(DEFAULT_C),
            gamma: gamma.or(config.sample.gamma).unwrap_or(DEFAULT_GAMMA),
            trials: trials.or(config.sample.trials).unwrap_or(DEFAULT_TRIALS),
            emit_matroids,
        },
        Command::Represent {
            input,
            bit_width,
            attempts,
        } => Task::Represent {
            input: source(input),
            bit_width: bit_width
                .or(config.represent.bit_width)
                .unwrap_or(DEFAULT_BIT_WIDTH),
            attempts: attempts
                .or(config.represent.attempts)
                .unwrap_or(DEFAULT_ATTEMPTS),
        },
        Command::Witness { input } => Task::Witness {
            input: source(input),
        },
    };
    Ok(Plan {
        version: env!("CARGO_PKG_VERSION"),
        census_format: CENSUS_FORMAT_VERSION,
        jobs,
        seed: cli.seed.or(config.seed).unwrap_or(DEFAULT_SEED),
        format: cli.format.or(config.format).unwrap_or_default(),
        out: cli.out,
        task,
    })
}

fn execute(plan: &Plan) -> Result<Report, Failure> {
    let out = plan.out.as_deref();
    match &plan.task {
        Task::Check {
            input,
            brute,
            sampled,
        } => commands::check(input, *brute, *sampled, plan.seed, plan.format),
        Task::Census {
            n,
            r,
            classify,
            verify_theorem_forty,
            strategy,
        } => commands::census(
            *n,
            *r,
            *classify,
            *verify_theorem_forty,
            *strategy,
            out,
            plan.format,
        ),
        Task::Construct { input } => commands::construct(input),
        Task::Sample {
            n,
            r,
            c,
            gamma,
            trials,
            emit_matroids,
        } => commands::sample(
            *n,
            *r,
            *c,
            *gamma,
            *trials,
            plan.seed,
            emit_matroids.as_deref(),
            plan.format,
        ),
        Task::Represent {
            input,
            bit_width,
            attempts,
        } => commands::represent_cmd(input, plan.seed, *bit_width, *attempts),
        Task::Witness { input } => commands::witness(input),
    }
}

/// Without `--out` the summary (or the body) goes to standard output. With
/// it, the body goes to the file, except for `census`, which wrote its own.
fn emit(plan: &Plan, report: &Report) -> Result<(), Failure> {
    let mut stdout = std::io::stdout().lock();
    let mut print = |text: &str| {
        stdout
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Assertion(format!("writing output: {e}")))
    };
    match &plan.out {
        None => print(report.summary.as_deref().unwrap_or(&report.body)),
        Some(_) if matches!(plan.task, Task::Census { .. }) => print(&report.body),
        Some(path) => {
            std::fs::write(path, &report.body)
                .map_err(|e| Failure::Assertion(format!("{}: {e}", path.display())))?;
            report.summary.as_deref().map_or(Ok(()), print)
        }
    }
}

fn run() -> Result<(), Failure> {
    let version: &'static str = Box::leak(
        format!(
            "{} (census format {CENSUS_FORMAT_VERSION})",
            env!("CARGO_PKG_VERSION")
        )
        .into_boxed_str(),
    );
    let matches = Cli::command().version(version).get_matches();
    let cli = Cli::from_arg_matches(&matches).map_err(|e| Failure::Usage(e.to_string()))?;
    let plan = resolve(cli)?;
    eprintln!(
        "effective config: {}",
        serde_json::to_string(&plan).expect("serializable")
    );
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(plan.jobs)
        .build()
        .map_err(|e| Failure::Assertion(format!("thread pool: {e}")))?;
    let report = pool.install(|| execute(&plan))?;
    emit(&plan, &report)?;
    if report.failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Assertion(report.failures.join("; ")))
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
