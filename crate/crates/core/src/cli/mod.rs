//! The `specfluct` command line: `count`, `decompose`, `predict`, `simulate`
//! and `verify`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error,
//! 3 capacity or overflow error.

pub mod output;
pub mod verify;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::moments::Distribution;
use crate::paths::{MultiIndex, PathCounter, TABLE_K_MAX};
use crate::polyspace::{decompose, Polynomial};
use crate::predictor::predict;
use crate::simulator::{run_experiment, ExperimentConfig, SizeCoupling, TraceEngine};
use clap::{Args, Parser, Subcommand, ValueEnum};

pub use output::{fmt17, to_json, write_csv, CSV_HEADER};
pub use verify::{run_suite, Check, Suite};

/// Environment variable that overrides the config seed.
pub const SEED_ENV: &str = "SPECFLUCT_SEED";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "specfluct",
    version,
    about = "Fluctuations of Tr P(H) for decaying random Jacobi operators"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count closed lattice paths of length K with flat profile BETA.
    Count(CountArgs),
    /// Split a polynomial into its Q, Q-perp and even parts.
    Decompose {
        /// Coefficients "a0,a1,...".
        #[arg(allow_hyphen_values = true)]
        polynomial: Polynomial,
    },
    /// Predict the fluctuation regime and limiting variance.
    Predict {
        #[arg(allow_hyphen_values = true)]
        polynomial: Polynomial,
        alpha: f64,
        /// e.g. "rademacher:1", "uniform:1", "atoms:-1@0.5,1@0.5".
        distribution: Distribution,
    },
    /// Run a Monte Carlo experiment described by a JSON config.
    Simulate(SimulateArgs),
    /// Run the built-in invariant suites.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CountMode {
    Closed,
    Brute,
    Both,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    pub k: usize,
    /// Level:multiplicity pairs, e.g. "0:1,1:1"; "none" for the empty profile.
    pub beta: MultiIndex,
    #[arg(long, conflicts_with_all = ["brute", "both"])]
    pub closed: bool,
    #[arg(long, conflicts_with = "both")]
    pub brute: bool,
    #[arg(long)]
    pub both: bool,
}

impl CountArgs {
    fn mode(&self) -> CountMode {
        if self.closed {
            CountMode::Closed
        } else if self.brute {
            CountMode::Brute
        } else {
            CountMode::Both
        }
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    pub config: PathBuf,
    /// CSV destination; defaults to the config path with a `.csv` extension.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub replicates: Option<usize>,
    #[arg(long, value_enum)]
    pub trace_engine: Option<EngineArg>,
    #[arg(long, value_enum)]
    pub size_coupling: Option<CouplingArg>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum EngineArg {
    Banded,
    DenseOracle,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CouplingArg {
    Nested,
    Independent,
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Capacity { .. } | Error::Overflow(_) => EXIT_CAPACITY,
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::Config(format!("output: {e}"))
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Count(args) => cmd_count(&args, out),
        Command::Decompose { polynomial } => {
            let d = decompose(&polynomial)?;
            out.write_all(to_json(&d)?.as_bytes()).map_err(io_err)?;
            Ok(EXIT_OK)
        }
        Command::Predict {
            polynomial,
            alpha,
            distribution,
        } => {
            let pred = predict(&polynomial, alpha, &distribution.moments())?;
            out.write_all(to_json(&pred)?.as_bytes()).map_err(io_err)?;
            Ok(EXIT_OK)
        }
        Command::Simulate(args) => cmd_simulate(&args, out),
        Command::Verify { suite } => {
            let checks = run_suite(suite);
            let mut code = EXIT_OK;
            for c in &checks {
                match &c.failure {
                    None => writeln!(out, "PASS  {}", c.name),
                    Some(f) => {
                        code = EXIT_VERIFY_FAILED;
                        writeln!(out, "FAIL  {}: {f}", c.name)
                    }
                }
                .map_err(io_err)?;
            }
            let passed = checks.iter().filter(|c| c.passed()).count();
            writeln!(out, "{passed}/{} checks passed", checks.len()).map_err(io_err)?;
            Ok(code)
        }
    }
}

fn cmd_count(args: &CountArgs, out: &mut dyn Write) -> Result<i32> {
    let counter = PathCounter::new(TABLE_K_MAX);
    let beta = &args.beta;
    let closed = || -> Result<String> {
        if args.k == 0 {
            return Ok(u128::from(beta.is_zero()).to_string());
        }
        Ok(match counter.count_closed(args.k, beta)? {
            Some(c) => c.to_string(),
            None => "-".to_string(),
        })
    };
    let brute = || -> Result<String> {
        if args.k == 0 {
            return Ok(u128::from(beta.is_zero()).to_string());
        }
        Ok(counter.count_bruteforce(args.k, beta)?.to_string())
    };
    let w = |out: &mut dyn Write, s: String| writeln!(out, "{s}").map_err(io_err);
    match args.mode() {
        CountMode::Closed => {
            w(out, "k\tbeta\tclosed".into())?;
            w(out, format!("{}\t{beta}\t{}", args.k, closed()?))?;
        }
        CountMode::Brute => {
            w(out, "k\tbeta\tbrute".into())?;
            w(out, format!("{}\t{beta}\t{}", args.k, brute()?))?;
        }
        CountMode::Both => {
            let (c, b) = (closed()?, brute()?);
            let status = if c == "-" {
                "no-closed-form"
            } else if c == b {
                "agree"
            } else {
                "DISAGREE"
            };
            w(out, "k\tbeta\tclosed\tbrute\tstatus".into())?;
            w(out, format!("{}\t{beta}\t{c}\t{b}\t{status}", args.k))?;
            if status == "DISAGREE" {
                return Ok(EXIT_VERIFY_FAILED);
            }
        }
    }
    Ok(EXIT_OK)
}

/// Reads a config file and applies the command-line and environment overrides.
pub fn load_config(args: &SimulateArgs) -> Result<ExperimentConfig> {
    let text = fs::read_to_string(&args.config)
        .map_err(|e| Error::Config(format!("{}: {e}", args.config.display())))?;
    let mut cfg: ExperimentConfig = serde_json::from_str(&text)
        .map_err(|e| Error::Config(format!("{}: {e}", args.config.display())))?;
    if let Ok(s) = std::env::var(SEED_ENV) {
        cfg.master_seed = s.trim().parse().map_err(|_| {
            Error::Config(format!(
                "{SEED_ENV} must be an unsigned 64-bit integer, got {s:?}"
            ))
        })?;
    }
    if let Some(seed) = args.seed {
        cfg.master_seed = seed;
    }
    if let Some(w) = args.workers {
        cfg.workers = Some(w);
    }
    if let Some(m) = args.replicates {
        cfg.replicates = m;
    }
    if let Some(e) = args.trace_engine {
        cfg.trace_engine = match e {
            EngineArg::Banded => TraceEngine::Banded,
            EngineArg::DenseOracle => TraceEngine::DenseOracle,
        };
    }
    if let Some(c) = args.size_coupling {
        cfg.size_coupling = match c {
            CouplingArg::Nested => SizeCoupling::Nested,
            CouplingArg::Independent => SizeCoupling::Independent,
        };
    }
    cfg.validate()?;
    Ok(cfg)
}

fn default_output(config: &Path) -> PathBuf {
    config.with_extension("csv")
}

fn cmd_simulate(args: &SimulateArgs, out: &mut dyn Write) -> Result<i32> {
    let cfg = load_config(args)?;
    let result = run_experiment(&cfg)?;
    let path = args
        .output
        .clone()
        .unwrap_or_else(|| default_output(&args.config));
    let file =
        fs::File::create(&path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    write_csv(&result, std::io::BufWriter::new(file))?;

    let p = &result.prediction;
    writeln!(
        out,
        "sector {} t {} sigma_sq {} supercritical {}",
        p.sector.as_str(),
        fmt17(p.rate_exponent),
        fmt17(p.sigma_sq),
        p.supercritical
    )
    .map_err(io_err)?;
    for row in &result.rows {
        writeln!(
            out,
            "N {} variance {} normalized {}",
            row.n,
            fmt17(row.empirical_variance),
            row.normalized_variance
                .map(fmt17)
                .unwrap_or_else(|| "-".into())
        )
        .map_err(io_err)?;
    }
    writeln!(out, "wrote {}", path.display()).map_err(io_err)?;
    Ok(EXIT_OK)
}
