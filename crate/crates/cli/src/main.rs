use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::error;
use pmiwasawa::mazur_tate::signed_invariants;
use pmiwasawa::{EigenSymbol, ModularSymbolSpace, Sign};
use pmiwasawa_cli::dump::theta_dump;
use pmiwasawa_cli::report::{render_table, write_csv, write_json};
use pmiwasawa_cli::selftest::run_selftest;
use pmiwasawa_cli::sweep::load_curves;
use pmiwasawa_cli::{
    run, CliError, OutputFormat, RunConfig, DEFAULT_MAX_EVALS, EXIT_ANOMALY, EXIT_CLEAN,
};

#[derive(Parser, Debug)]
#[command(name = "pmiwasawa", version, about = "Plus/minus Iwasawa invariants at supersingular primes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sweep every curve over its supersingular primes in [pmin, pmax].
    Sweep(SweepArgs),
    /// Run the seeded invariant suites.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Print serialized Mazur-Tate elements as JSON lines.
    Dump(DumpArgs),
}

#[derive(Args, Debug)]
struct GridArgs {
    #[arg(long)]
    curves: PathBuf,
    #[arg(long, default_value_t = 5)]
    pmin: u64,
    #[arg(long, default_value_t = 60)]
    pmax: u64,
    #[arg(long, default_value_t = 3)]
    nmax: u32,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Per-element evaluation budget; 0 removes the limit.
    #[arg(long, default_value_t = DEFAULT_MAX_EVALS)]
    max_evals: u64,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long)]
    cache: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: String,
    /// Write one JSON file per (curve, p, n) into this directory.
    #[arg(long)]
    dump_theta: Option<PathBuf>,
    /// Largest p^n expanded in powers of T when dumping.
    #[arg(long, default_value_t = 400)]
    dump_limit: u64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DumpArgs {
    #[command(flatten)]
    grid: GridArgs,
    /// Only this curve.
    #[arg(long)]
    label: Option<String>,
    #[arg(long, default_value_t = 400)]
    dump_limit: u64,
}

fn config_from(grid: &GridArgs) -> RunConfig {
    let mut c = RunConfig::new(&grid.curves);
    c.pmin = grid.pmin;
    c.pmax = grid.pmax;
    c.n_max = grid.nmax;
    c.jobs = grid.jobs;
    c.max_evals = (grid.max_evals > 0).then_some(grid.max_evals);
    c
}

fn sweep(args: SweepArgs) -> Result<i32, CliError> {
    let mut config = config_from(&args.grid);
    config.cache_dir = args.cache;
    config.format = args.format.parse::<OutputFormat>()?;
    config.dump_theta = args.dump_theta;
    config.dump_limit = args.dump_limit;
    let outcome = run(&config)?;
    let sink: Box<dyn Write> = match &args.output {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    let mut out = BufWriter::new(sink);
    match config.format {
        OutputFormat::Csv => write_csv(&mut out, &outcome.rows)?,
        OutputFormat::Json => write_json(&mut out, &outcome.rows, &outcome.summary)?,
        OutputFormat::Table => out.write_all(render_table(&outcome.rows, &outcome.summary).as_bytes())?,
    }
    out.flush()?;
    if config.format != OutputFormat::Table {
        let s = &outcome.summary;
        eprintln!(
            "{} rows; lambda-=0: {}/{} with mu-<=1; lambda+=0: {}/{} with mu+<=2; {} anomalies",
            s.rows,
            s.minus_lambda0_within,
            s.minus_lambda0,
            s.plus_lambda0_within,
            s.plus_lambda0,
            s.anomalies
        );
    }
    Ok(outcome.exit_code())
}

fn selftest(seed: u64) -> i32 {
    let results = run_selftest(seed);
    let mut ok = true;
    for r in &results {
        println!(
            "[{}] {} ({} ms): {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.elapsed_ms,
            r.detail
        );
        ok &= r.passed;
    }
    if ok {
        EXIT_CLEAN
    } else {
        EXIT_ANOMALY
    }
}

fn dump(args: DumpArgs) -> Result<i32, CliError> {
    let config = config_from(&args.grid);
    config.validate()?;
    let curves = load_curves(&config.curves)?;
    let mut out = BufWriter::new(io::stdout().lock());
    let mut code = EXIT_CLEAN;
    for curve in curves.iter().filter(|c| args.label.as_ref().is_none_or(|l| *l == c.label)) {
        let primes: Vec<u64> = curve
            .supersingular_primes(config.pmax)
            .into_iter()
            .filter(|&p| p >= config.pmin)
            .collect();
        if primes.is_empty() {
            continue;
        }
        let sym = match EigenSymbol::compute(&ModularSymbolSpace::new(curve.conductor), curve, Sign::Plus) {
            Ok(s) => s,
            Err(e) => {
                error!("{}: {e}", curve.label);
                code = EXIT_ANOMALY;
                continue;
            }
        };
        for p in primes {
            match signed_invariants(&sym, p, config.n_max, config.max_evals) {
                Ok((_, thetas)) => {
                    for t in &thetas {
                        serde_json::to_writer(&mut out, &theta_dump(t, args.dump_limit))?;
                        writeln!(out)?;
                    }
                }
                Err(e) => {
                    error!("{} p={p}: {e}", curve.label);
                    if e.is_anomaly() {
                        code = EXIT_ANOMALY;
                    }
                }
            }
        }
    }
    out.flush()?;
    Ok(code)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Sweep(args) => sweep(args),
        Command::Selftest { seed } => Ok(selftest(seed)),
        Command::Dump(args) => dump(args),
    };
    let code = match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
