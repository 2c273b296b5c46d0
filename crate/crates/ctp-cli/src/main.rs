use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use ctp_cli::{render_text, run_with_db, CurveInput, DbClient, Report, RunConfig};

/// 2-descent, Cassels-Tate pairing, and refined Mordell-Weil rank
/// bounds for elliptic curves over Q with full rational 2-torsion.
#[derive(Parser)]
#[command(name = "ctp", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline for one curve.
    Compute(ComputeArgs),
    /// Run the pipeline for every curve listed in a file.
    Batch(BatchArgs),
}

#[derive(Args)]
struct ComputeArgs {
    /// Roots "r1,r2,r3" of the right-hand side (rationals).
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["coeffs", "label"])]
    roots: Option<String>,
    /// Coefficients "A,B" of y² = x³ + Ax + B.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["roots", "label"])]
    coeffs: Option<String>,
    /// Database label (resolved through the cache / configured base URL).
    #[arg(long, conflicts_with_all = ["roots", "coeffs"])]
    label: Option<String>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct BatchArgs {
    /// File with one curve per line: "roots:r1,r2,r3", "coeffs:A,B" or
    /// "label:L". Blank lines and #-comments are skipped.
    #[arg(long)]
    file: PathBuf,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Naive point search bound: x = m/d² with |m|, d² ≤ N.
    #[arg(long, default_value_t = 1000)]
    height_bound: u64,
    /// Cap on p-adic working precision (digits), at most 4096.
    #[arg(long, default_value_t = 4096)]
    precision: u32,
    /// Seed for all randomized retry schedules (recorded in the output).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Run the full well-definedness suite (slower, cross-checks
    /// everything twice).
    #[arg(long)]
    verify: bool,
    /// Extra finite places to include in every local computation.
    #[arg(long, value_delimiter = ',')]
    places: Vec<u64>,
    /// Write the JSON report to this path.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Never touch the network (database lookups become cache-only).
    #[arg(long)]
    offline: bool,
    /// Skip the external database cross-check entirely.
    #[arg(long)]
    no_database: bool,
    /// Output format on stdout.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn build_config(input: CurveInput, common: &CommonArgs) -> RunConfig {
    RunConfig {
        input,
        height_bound: common.height_bound,
        precision_cap: common.precision,
        seed: common.seed,
        verify: common.verify,
        extra_places: common.places.clone(),
        offline: common.offline,
        database: !common.no_database,
    }
}

fn db_for(common: &CommonArgs) -> DbClient {
    let base = DbClient::from_env();
    if common.offline && !base.offline() {
        // Rebuild honoring the flag even when the env says otherwise.
        let cache_dir = std::env::var("LMFDB_CACHE_DIR")
            .map(PathBuf::from)
            .unwrap_or_else(|_| PathBuf::from(".lmfdb-cache"));
        DbClient::new(None, cache_dir, true)
    } else {
        base
    }
}

fn emit(report: &Report, common: &CommonArgs) -> Result<()> {
    if let Some(path) = &common.json {
        std::fs::write(path, report.full_json())
            .with_context(|| format!("writing {}", path.display()))?;
    }
    match common.format {
        Format::Text => print!("{}", render_text(report)),
        Format::Json => println!("{}", report.full_json()),
    }
    Ok(())
}

fn compute(args: &ComputeArgs) -> Result<()> {
    let input = match (&args.roots, &args.coeffs, &args.label) {
        (Some(r), None, None) => CurveInput::Roots(r.clone()),
        (None, Some(c), None) => CurveInput::Coefficients(c.clone()),
        (None, None, Some(l)) => CurveInput::Label(l.clone()),
        _ => bail!("exactly one of --roots, --coeffs, --label is required"),
    };
    let config = build_config(input, &args.common);
    let db = db_for(&args.common);
    let report = run_with_db(&config, &db)?;
    emit(&report, &args.common)
}

fn batch(args: &BatchArgs) -> Result<()> {
    let text = std::fs::read_to_string(&args.file)
        .with_context(|| format!("reading {}", args.file.display()))?;
    let db = db_for(&args.common);
    let mut reports = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let input = match line.split_once(':') {
            Some(("roots", v)) => CurveInput::Roots(v.trim().to_string()),
            Some(("coeffs", v)) => CurveInput::Coefficients(v.trim().to_string()),
            Some(("label", v)) => CurveInput::Label(v.trim().to_string()),
            _ => bail!("line {}: expected 'roots:', 'coeffs:' or 'label:'", lineno + 1),
        };
        let config = build_config(input, &args.common);
        let report = run_with_db(&config, &db)
            .with_context(|| format!("line {}: {line}", lineno + 1))?;
        println!(
            "{}: selmer dim {}, kernel dim {}, rank ≤ {} (naive {})",
            line,
            report.selmer.dim,
            report.pairing.kernel_dim,
            report.bounds.refined,
            report.bounds.naive
        );
        reports.push(report);
    }
    if let Some(path) = &args.common.json {
        let all: Vec<String> = reports.iter().map(|r| r.full_json()).collect();
        std::fs::write(path, format!("[{}]", all.join(",\n")))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Compute(args) => compute(args),
        Command::Batch(args) => batch(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
