//! Command-line front end: `revert`, `compose`, `verify` and `bench`.

pub mod io;
pub mod presets;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::instrument::{Context, DEFAULT_KARATSUBA_THRESHOLD, DEFAULT_STRASSEN_THRESHOLD};
use crate::matrix::MatrixStrategy;
use crate::reversion::{self, check_inverse, Algorithm, ReversionConfig};
use crate::ring::PrimeField;
use crate::series::{compose_horner, Series};

pub use io::{format_series_file, parse_series_file};
pub use presets::Preset;

/// 2^63 + 29.
pub const DEFAULT_PRIME: u64 = 9_223_372_036_854_775_837;

pub const CSV_HEADER: &str =
    "algorithm,preset,n,seed,rep,wall_ns,poly_mul_count,scalar_mul_count,matrix_ns";

#[derive(Debug, Parser)]
#[command(name = "fastrev", version, about = "Reversion of power series over Z/pZ")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the compositional inverse of a series.
    Revert(RevertArgs),
    /// Print f(g(x)) mod x^n.
    Compose(ComposeArgs),
    /// Revert a series and check both compositions against x.
    Verify(RevertArgs),
    /// Time reversions and print a CSV table.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct SourceArgs {
    /// Named input series.
    #[arg(long, conflicts_with = "input")]
    pub preset: Option<Preset>,
    /// Series file (`p`, `n` headers, then coefficients).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Truncation length; defaults to the file's length.
    #[arg(long)]
    pub n: Option<usize>,
    /// Prime modulus for presets.
    #[arg(long, default_value_t = DEFAULT_PRIME as u128)]
    pub p: u128,
    /// Seed for the `random` preset.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct TuningArgs {
    /// Baby-step count (default ceil(sqrt(n - 1))).
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_KARATSUBA_THRESHOLD)]
    pub karatsuba_threshold: usize,
    #[arg(long, value_enum, default_value_t = StrategyArg::Structured)]
    pub matrix_strategy: StrategyArg,
    #[arg(long, default_value_t = DEFAULT_STRASSEN_THRESHOLD)]
    pub strassen_threshold: usize,
}

#[derive(Debug, Args)]
pub struct RevertArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub tuning: TuningArgs,
    #[arg(long, value_enum, default_value_t = AlgorithmArg::FastLagrange)]
    pub algorithm: AlgorithmArg,
}

#[derive(Debug, Args)]
pub struct ComposeArgs {
    /// Outer series f.
    #[command(flatten)]
    pub source: SourceArgs,
    /// Inner series g as a named preset.
    #[arg(long, conflicts_with = "inner_input")]
    pub inner_preset: Option<Preset>,
    /// Inner series g from a file.
    #[arg(long)]
    pub inner_input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ComposeMethod::Bk21)]
    pub method: ComposeMethod,
    #[arg(long, default_value_t = DEFAULT_KARATSUBA_THRESHOLD)]
    pub karatsuba_threshold: usize,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Presets to benchmark (comma separated).
    #[arg(long, value_delimiter = ',', default_value = "random")]
    pub preset: Vec<Preset>,
    /// Lengths to benchmark (comma separated).
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    #[arg(long, value_enum, value_delimiter = ',', alias = "algorithms", default_value = "all")]
    pub algorithm: Vec<AlgorithmArg>,
    #[arg(long, default_value_t = 3)]
    pub reps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_PRIME as u128)]
    pub p: u128,
    #[command(flatten)]
    pub tuning: TuningArgs,
    /// Write the CSV table to this file instead of standard output.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AlgorithmArg {
    Lagrange,
    FastLagrange,
    FastLagrangeMatrix,
    NewtonBk21,
    All,
}

impl AlgorithmArg {
    fn expand(self) -> Vec<Algorithm> {
        match self {
            AlgorithmArg::Lagrange => vec![Algorithm::LagrangeNaive],
            AlgorithmArg::FastLagrange => vec![Algorithm::FastLagrange],
            AlgorithmArg::FastLagrangeMatrix => vec![Algorithm::FastLagrangeMatrix],
            AlgorithmArg::NewtonBk21 => vec![Algorithm::NewtonBk21],
            AlgorithmArg::All => Algorithm::ALL.to_vec(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Classical,
    Structured,
    Strassen,
}

impl From<StrategyArg> for MatrixStrategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Classical => MatrixStrategy::Classical,
            StrategyArg::Structured => MatrixStrategy::Structured,
            StrategyArg::Strassen => MatrixStrategy::Strassen,
        }
    }
}

impl clap::ValueEnum for Preset {
    fn value_variants<'a>() -> &'a [Self] {
        &Preset::ALL
    }

    fn to_possible_value(&self) -> Option<clap::builder::PossibleValue> {
        Some(clap::builder::PossibleValue::new(self.name()))
    }
}

/// Failure of a command, carrying its exit status.
#[derive(Debug)]
enum CliError {
    Lib(Error),
    Usage(String),
    Io(std::io::Error),
    Failed(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(Error::Parse { .. }) | CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Usage(m) | CliError::Failed(m) => f.write_str(m),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<'a, I, T>(args: I, out: &'a mut dyn Write, err: &'a mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let sink = if code == 0 { out } else { err };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let result = match cli.command {
        Command::Revert(a) => cmd_revert(&a, out),
        Command::Compose(a) => cmd_compose(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
        Command::Bench(a) => cmd_bench(&a, out, err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn read_series(path: &PathBuf) -> CliResult<Series> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_series_file(&text)?)
}

/// Loads the input series and resolves the working length.
fn load(source: &SourceArgs) -> CliResult<(Series, usize)> {
    match (&source.input, source.preset) {
        (Some(path), _) => {
            let s = read_series(path)?;
            let n = source.n.unwrap_or(s.len());
            Ok((s, n))
        }
        (None, Some(preset)) => {
            let n = source
                .n
                .ok_or_else(|| CliError::Usage("--n is required with --preset".into()))?;
            let field = PrimeField::from_u128(source.p)?;
            Ok((preset.generate(field, n, source.seed)?, n))
        }
        (None, None) => Err(CliError::Usage("one of --preset or --input is required".into())),
    }
}

fn config(tuning: &TuningArgs, algorithm: Algorithm) -> ReversionConfig {
    ReversionConfig {
        algorithm,
        m_override: tuning.m,
        karatsuba_threshold: tuning.karatsuba_threshold,
        matrix_strategy: tuning.matrix_strategy.into(),
        strassen_threshold: tuning.strassen_threshold,
        instrument: false,
    }
}

/// Reverts with every requested algorithm and insists they agree.
fn revert_all(args: &RevertArgs) -> CliResult<(Series, Series, usize)> {
    let (f, n) = load(&args.source)?;
    let mut result: Option<Series> = None;
    for alg in args.algorithm.expand() {
        let g = reversion::revert(&f, n, &config(&args.tuning, alg))?;
        if let Some(prev) = &result {
            if *prev != g {
                return Err(CliError::Failed(format!("{alg} disagrees with the other algorithms")));
            }
        }
        result = Some(g);
    }
    Ok((f, result.expect("at least one algorithm"), n))
}

fn cmd_revert(args: &RevertArgs, out: &mut dyn Write) -> CliResult<i32> {
    let (_, g, _) = revert_all(args)?;
    out.write_all(format_series_file(&g).as_bytes())?;
    Ok(0)
}

fn cmd_verify(args: &RevertArgs, out: &mut dyn Write) -> CliResult<i32> {
    let (f, g, n) = revert_all(args)?;
    let (fg, gf) = check_inverse(&Context::default(), &f, &g, n)?;
    let verdict = |ok: bool| if ok { "PASS" } else { "FAIL" };
    writeln!(out, "f(g(x)) = x mod x^{n}: {}", verdict(fg))?;
    writeln!(out, "g(f(x)) = x mod x^{n}: {}", verdict(gf))?;
    Ok(if fg && gf { 0 } else { 1 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ComposeMethod {
    Horner,
    Bk21,
}

fn cmd_compose(args: &ComposeArgs, out: &mut dyn Write) -> CliResult<i32> {
    let (f, n) = load(&args.source)?;
    let g = match (&args.inner_input, args.inner_preset) {
        (Some(path), _) => read_series(path)?,
        (None, Some(preset)) => preset.generate(f.field(), n, args.source.seed)?,
        (None, None) => {
            return Err(CliError::Usage(
                "one of --inner-preset or --inner-input is required".into(),
            ))
        }
    };
    let ctx = Context::new(args.karatsuba_threshold, false);
    let h = match args.method {
        ComposeMethod::Horner => compose_horner(&ctx, &f, &g, n)?,
        ComposeMethod::Bk21 => reversion::compose_bk21(&ctx, &f, &g, n, &ReversionConfig::default())?,
    };
    out.write_all(format_series_file(&h).as_bytes())?;
    Ok(0)
}

fn cmd_bench(args: &BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    let field = PrimeField::from_u128(args.p)?;
    let mut algorithms: Vec<Algorithm> = Vec::new();
    for a in args.algorithm.iter().flat_map(|a| a.expand()) {
        if !algorithms.contains(&a) {
            algorithms.push(a);
        }
    }

    let mut table = String::new();
    table.push_str(CSV_HEADER);
    table.push('\n');
    let emit = |table: &mut String, out: &mut dyn Write, line: String| -> CliResult<()> {
        if args.csv.is_none() {
            writeln!(out, "{line}")?;
        }
        table.push_str(&line);
        table.push('\n');
        Ok(())
    };
    if args.csv.is_none() {
        writeln!(out, "{CSV_HEADER}")?;
    }

    let verify_ctx = Context::default();
    for &preset in &args.preset {
        for &n in &args.n {
            let f = preset.generate(field, n, args.seed)?;
            for &alg in &algorithms {
                let cfg = config(&args.tuning, alg);
                let g = reversion::revert(&f, n, &cfg)?;
                if check_inverse(&verify_ctx, &f, &g, n)? != (true, true) {
                    return Err(CliError::Failed(format!(
                        "{alg} failed verification on {preset} at n = {n}; refusing to time it"
                    )));
                }
                for rep in 0..args.reps {
                    let (_, rec) = reversion::revert_instrumented(&f, n, &cfg)?;
                    let line = format!(
                        "{},{},{},{},{},{},{},{},{}",
                        alg, preset, n, args.seed, rep, rec.wall_ns, rec.poly_mul_count,
                        rec.scalar_mul_count, rec.matrix_ns
                    );
                    emit(&mut table, out, line)?;
                    if rep == 0 {
                        writeln!(
                            err,
                            "# {alg} {preset} n={n}: reciprocal_mul_count={}",
                            rec.reciprocal_mul_count
                        )?;
                    }
                }
            }
        }
    }
    if let Some(path) = &args.csv {
        std::fs::write(path, table)?;
    }
    Ok(0)
}
