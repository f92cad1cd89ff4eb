//! `nsquad`: predicted rates, convergence sweeps, Stokes error grids and
//! self-tests, written as CSV.

mod config;

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use nsquad_core::experiments::{self, Method, SweepConfig};
use nsquad_core::references::generate_standard_store;
use nsquad_core::selftest::{run_selftest, SelfTestOptions};
use nsquad_core::stokes::geometry::DEFAULT_TUBE_RADIUS;
use nsquad_core::stokes::{error_grid, FiberSurface, RuleBuilder, Strategy};
use nsquad_core::{Error, Family, IntegrandId, ReferenceStore};

use config::FileConfig;

/// Bad command-line or configuration input (exit code 2).
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// A self-test check failed (exit code 1).
#[derive(Debug)]
struct InvariantFailure;

impl fmt::Display for InvariantFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("self-test failed")
    }
}

impl std::error::Error for InvariantFailure {}

#[derive(Debug, Parser)]
#[command(
    name = "nsquad",
    version,
    about = "Quadrature experiments for nearly singular integrals"
)]
struct Cli {
    /// JSON file with default option values; flags override it.
    #[arg(long, global = true, value_name = "JSON")]
    config: Option<PathBuf>,

    /// Write output here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Predicted convergence rates (λ for periodic, ρ otherwise).
    Rates(RatesArgs),
    /// Relative errors against the reference values over a grid of n.
    Sweep(SweepArgs),
    /// log10 |u| of the surface-normal single-layer potential on a grid.
    StokesGrid(StokesArgs),
    /// Run the invariant checks.
    Selftest(SelftestArgs),
    /// Regenerate the reference value store.
    References,
}

#[derive(Debug, Args)]
struct RatesArgs {
    /// periodic, complex or real.
    #[arg(long)]
    family: Option<String>,
    /// Singularity: B (periodic), A:B (complex) or A (real); fractions allowed.
    #[arg(long, value_delimiter = ',')]
    param: Vec<String>,
    /// Comma-separated method names, or `all`.
    #[arg(long, value_delimiter = ',')]
    method: Vec<String>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    family: Option<String>,
    /// Integrand ids such as f1,f2.
    #[arg(long, value_delimiter = ',')]
    id: Vec<String>,
    /// ε values; defaults to each integrand's standard three.
    #[arg(long, value_delimiter = ',')]
    epsilon: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    method: Vec<String>,
    /// Node counts; defaults to the multiples of 7 up to 147.
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    /// Reference store file; defaults to the built-in values.
    #[arg(long)]
    references: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct StokesArgs {
    /// Nodes per direction per panel.
    #[arg(long)]
    n: Option<usize>,
    /// reference, split or conformal.
    #[arg(long)]
    strategy: Option<String>,
    /// Grid points per side.
    #[arg(long)]
    resolution: Option<usize>,
    /// Fiber radius ε.
    #[arg(long)]
    tube_radius: Option<f64>,
}

#[derive(Debug, Args)]
struct SelftestArgs {
    #[arg(long)]
    references: Option<PathBuf>,
    /// Skip the single-layer potential check.
    #[arg(long)]
    skip_stokes: bool,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !e.is::<InvariantFailure>() {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.is::<UsageError>() {
        return 2;
    }
    match e.downcast_ref::<Error>() {
        Some(
            Error::Argument(_)
            | Error::Parse(_)
            | Error::UnknownIntegrand(_)
            | Error::Domain(_)
            | Error::DegenerateSingularity(_),
        ) => 2,
        _ => 1,
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let out = cli.out.clone().or_else(|| file.out.clone());
    let text = match cli.command {
        Command::Rates(args) => rates(args, &file)?,
        Command::Sweep(args) => sweep(args, &file)?,
        Command::StokesGrid(args) => stokes_grid(args, &file)?,
        Command::Selftest(args) => selftest(args, &file, out.as_deref())?,
        Command::References => generate_standard_store()?.to_text(),
    };
    emit(out.as_deref(), &text)
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// The flag if given, else the config value.
fn pick<T: Clone>(flag: Vec<T>, file: &Option<Vec<T>>) -> Option<Vec<T>> {
    if flag.is_empty() {
        file.clone()
    } else {
        Some(flag)
    }
}

fn parse_family(flag: Option<String>, file: &FileConfig) -> anyhow::Result<Option<Family>> {
    Ok(match flag.or_else(|| file.family.clone()) {
        Some(f) => Some(f.parse()?),
        None => None,
    })
}

fn parse_method_list(family: Family, names: Option<Vec<String>>) -> anyhow::Result<Vec<Method>> {
    let names = names.unwrap_or_else(|| vec!["all".into()]);
    Ok(experiments::parse_methods(family, &names.join(","))?)
}

fn load_store(path: Option<&Path>) -> anyhow::Result<ReferenceStore> {
    Ok(match path {
        Some(p) => ReferenceStore::load(p).with_context(|| format!("loading references from {}", p.display()))?,
        None => ReferenceStore::embedded()?,
    })
}

/// Default singularity for a rate query in each family.
fn default_param(family: Family) -> &'static str {
    match family {
        Family::Periodic => "0.3",
        Family::AperiodicComplex => "2/3:1/3",
        Family::AperiodicReal => "4/3",
    }
}

fn rates(args: RatesArgs, file: &FileConfig) -> anyhow::Result<String> {
    let family = parse_family(args.family, file)?
        .ok_or_else(|| UsageError("rates needs --family (periodic, complex or real)".into()))?;
    let params = pick(args.param, &file.param).unwrap_or_else(|| vec![default_param(family).into()]);
    let methods = parse_method_list(family, pick(args.method, &file.method))?;
    let mut rows = Vec::new();
    for text in &params {
        let values = experiments::parse_param(text)?;
        for mut row in experiments::rate_table(family, &[values], &methods)? {
            // keep fractions as typed
            row.param = text.trim().to_string();
            rows.push(row);
        }
    }
    Ok(experiments::rates_csv(&rows))
}

fn sweep(args: SweepArgs, file: &FileConfig) -> anyhow::Result<String> {
    let ids = pick(args.id, &file.id)
        .unwrap_or_default()
        .iter()
        .map(|s| s.parse::<IntegrandId>())
        .collect::<Result<Vec<_>, _>>()?;
    let family = match parse_family(args.family, file)? {
        Some(f) => f,
        None => ids
            .first()
            .map(|id| id.family())
            .ok_or_else(|| UsageError("sweep needs --family or --id".into()))?,
    };
    let mut config = SweepConfig::standard(family);
    if !ids.is_empty() {
        config.ids = ids;
    }
    let epsilons = args
        .epsilon
        .iter()
        .map(|e| experiments::parse_number(e))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(eps) = pick(epsilons, &file.epsilon) {
        config.epsilons = Some(eps);
    }
    config.methods = parse_method_list(family, pick(args.method, &file.method))?;
    if let Some(ns) = pick(args.n, &file.n) {
        config.ns = ns;
    }
    config.validate()?;
    let store = load_store(args.references.as_deref().or(file.references.as_deref()))?;
    Ok(experiments::sweep_csv(&experiments::run_sweep(&config, &store)?))
}

fn stokes_grid(args: StokesArgs, file: &FileConfig) -> anyhow::Result<String> {
    let n = args
        .n
        .or_else(|| file.n.as_ref().and_then(|v| v.first().copied()))
        .unwrap_or(32);
    if n < 4 {
        return Err(UsageError(format!("stokes-grid needs --n >= 4, got {n}")).into());
    }
    let strategy: Strategy = args
        .strategy
        .or_else(|| file.strategy.clone())
        .unwrap_or_else(|| "conformal".into())
        .parse()?;
    let resolution = args.resolution.or(file.resolution).unwrap_or(40);
    let radius = args.tube_radius.or(file.tube_radius).unwrap_or(DEFAULT_TUBE_RADIUS);
    let surface = Arc::new(FiberSurface::torus_fiber(radius)?);
    let builder = RuleBuilder::new(surface, n)?;
    Ok(error_grid(&builder, resolution, strategy)?.to_csv())
}

fn selftest(args: SelftestArgs, file: &FileConfig, out: Option<&Path>) -> anyhow::Result<String> {
    let path = args.references.or_else(|| file.references.clone());
    let references = match &path {
        Some(p) => match ReferenceStore::load(p) {
            Ok(store) => Some(store),
            Err(e) => {
                log::warn!("cannot load references from {}: {e}", p.display());
                None
            }
        },
        None => ReferenceStore::embedded().ok(),
    };
    let options = SelfTestOptions {
        references,
        stokes: !args.skip_stokes,
        ..Default::default()
    };
    let report = run_selftest(&options);
    let text = report.to_text();
    if report.all_passed() {
        Ok(text)
    } else {
        emit(out, &text)?;
        Err(InvariantFailure.into())
    }
}
