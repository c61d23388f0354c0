use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use matrixless::harness::known::{reproduce, write_comparison, KnownTable};
use matrixless::harness::{emit, parse_levels, run_experiment_with, ExperimentConfig, Method, OutputFormat, Tables};
use matrixless::matrixless::{precompute_with, CoefficientTable, EndpointRule, ExtrapolationGrid};
use matrixless::symbols::SymbolSpec;

#[derive(Parser)]
#[command(name = "matrixless", version, about = "Matrix-less eigenvalue approximation for symmetric Toeplitz matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a coefficient table from the small grid spectra.
    Precompute(PrecomputeArgs),
    /// Approximate spectra at the requested orders and compare with a reference.
    Approximate(ApproximateArgs),
    /// Regenerate one of the four benchmark error tables.
    Reproduce(ReproduceArgs),
}

#[derive(Args)]
struct PrecomputeArgs {
    /// `kms:rho=<r>`, `rctp:l=<int>` or `fdep:a0=<r>,a1=<r>`
    #[arg(long)]
    symbol: SymbolSpec,
    #[arg(long, default_value_t = 100)]
    n1: usize,
    #[arg(long, default_value_t = 5)]
    alpha: usize,
    /// `auto`, `zero` or `extrapolated`
    #[arg(long, default_value = "auto")]
    endpoints: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ApproximateArgs {
    /// Flat key=value experiment file; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    symbol: Option<SymbolSpec>,
    /// Target orders, comma separated.
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    /// `1..4`, `2` or `1,3`; defaults to the config file, else `1..=alpha`.
    #[arg(long)]
    levels: Option<String>,
    /// NAS, NA, SL; comma separated.
    #[arg(long, value_delimiter = ',')]
    methods: Vec<Method>,
    /// Shift-variable coefficient table from `precompute`.
    #[arg(long)]
    coeffs: Option<PathBuf>,
    /// `auto` solves densely; anything else is a spectrum file (one order only).
    #[arg(long = "ref", default_value = "auto")]
    reference: String,
    /// Largest order solved densely.
    #[arg(long)]
    ceiling: Option<usize>,
    /// `csv`, `table` or `plotdata`
    #[arg(long, default_value = "csv")]
    format: OutputFormat,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Extra `key=value` settings, e.g. `n1=40` or `reference.512=ref.txt`.
    #[arg(long = "set")]
    overrides: Vec<String>,
}

#[derive(Args)]
struct ReproduceArgs {
    #[arg(long = "paper-table", value_parser = clap::value_parser!(u8).range(1..=4))]
    table: u8,
    /// Include n = 4096.
    #[arg(long)]
    heavy: bool,
    /// Emit raw reports instead of the comparison listing.
    #[arg(long)]
    format: Option<OutputFormat>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Precompute(args) => run_precompute(args),
        Command::Approximate(args) => run_approximate(args),
        Command::Reproduce(args) => run_reproduce(args),
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run_precompute(args: PrecomputeArgs) -> Result<()> {
    let grid = ExtrapolationGrid::new(args.n1, args.alpha)?;
    let rule = match args.endpoints.as_str() {
        "auto" => EndpointRule::for_spec(&args.symbol),
        other => other.parse()?,
    };
    let start = Instant::now();
    let table = precompute_with(&args.symbol, &grid, rule)?;
    table
        .save(&args.out)
        .with_context(|| format!("writing {}", args.out.display()))?;
    eprintln!(
        "{}: n1={} alpha={} largest order {} in {:.2?}",
        args.symbol,
        args.n1,
        args.alpha,
        grid.size(args.alpha),
        start.elapsed()
    );
    Ok(())
}

fn run_approximate(args: ApproximateArgs) -> Result<()> {
    let table = args
        .coeffs
        .as_ref()
        .map(|p| CoefficientTable::load(p).with_context(|| format!("reading {}", p.display())))
        .transpose()?;

    let mut config = match (&args.config, args.symbol, &table) {
        (Some(path), _, _) => ExperimentConfig::load(path).with_context(|| format!("reading {}", path.display()))?,
        (None, Some(symbol), _) => ExperimentConfig::new(symbol, Vec::new()),
        (None, None, Some(t)) => ExperimentConfig::new(t.spec(), Vec::new()),
        (None, None, None) => bail!("one of --symbol, --config or --coeffs is required"),
    };
    if let Some(symbol) = args.symbol {
        config.symbol = symbol;
    }
    if let Some(t) = &table {
        // the table fixes the grid unless the config disagrees explicitly
        if args.config.is_none() {
            config.n1 = t.grid().base_size();
            config.alpha = t.grid().levels();
        }
    }
    if !args.n.is_empty() {
        config.sizes = args.n.clone();
    }
    for assignment in &args.overrides {
        config.apply_override(assignment)?;
    }
    match &args.levels {
        Some(levels) => config.levels = parse_levels(levels)?,
        None if args.config.is_none() => config.levels = (1..=config.alpha).collect(),
        None => {}
    }
    if !args.methods.is_empty() {
        config.methods = args.methods.clone();
    }
    if let Some(ceiling) = args.ceiling {
        config.ceiling = ceiling;
    }
    if args.reference != "auto" {
        let [n] = config.sizes[..] else {
            bail!("--ref with a spectrum file needs exactly one order, got {:?}", config.sizes);
        };
        config.references.insert(n, PathBuf::from(&args.reference));
    }

    let tables = Tables {
        shift: table,
        eigenvalue: None,
    };
    let reports = run_experiment_with(&config, tables)?;
    emit(&reports, args.format, output(args.out.as_deref())?)?;
    Ok(())
}

fn run_reproduce(args: ReproduceArgs) -> Result<()> {
    let table = KnownTable::get(args.table)?;
    let start = Instant::now();
    let reports = reproduce(args.table, args.heavy)?;
    let out = output(args.out.as_deref())?;
    match args.format {
        Some(format) => emit(&reports, format, out)?,
        None => write_comparison(table, &reports, out)?,
    }
    eprintln!("table {} regenerated in {:.2?}", args.table, start.elapsed());
    Ok(())
}
