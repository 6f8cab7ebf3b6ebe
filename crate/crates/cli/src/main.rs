use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use filtval_core::audit::{self, catalog, AuditConfig, SamplerKind, SamplerSpec};
use filtval_core::filtration::{StrongVerdict, ValidationVerdict, DEFAULT_DEPTH};
use filtval_core::valuation::DEFAULT_MAX_LEVEL;
use filtval_core::{
    nu, parse_element, Execution, ExtValue, Filtration, FiltrationSpec, RingDescriptor, RingKind,
};

const DEFAULT_CONFIG: &str = include_str!("../configs/default.json");

/// Filtrations of commutative rings and the quasi-valuations they induce.
#[derive(Parser)]
#[command(name = "filtval", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Value of one element.
    Nu(NuArgs),
    /// Values of a deterministic sample, as CSV or markdown.
    Table(TableArgs),
    /// Check the filtration conditions up to a depth.
    Validate(ValidateArgs),
    /// Run an audit config and write the JSON report.
    Audit(AuditArgs),
    /// List the audited claims.
    Claims,
}

#[derive(Args)]
struct FiltrationArgs {
    /// Z | Zmod:<n> | PolyQ | PolyZmod:<p>
    #[arg(long)]
    ring: String,
    #[command(flatten)]
    levels: LevelArgs,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct LevelArgs {
    /// Generators of I for the I-adic filtration, comma-separated.
    #[arg(long)]
    adic: Option<String>,
    /// Explicit chain as JSON, e.g. '[["1"],["2"],["4"]]' or '["1","2","4"]'.
    #[arg(long)]
    chain: Option<String>,
}

#[derive(Args)]
struct NuArgs {
    #[command(flatten)]
    filtration: FiltrationArgs,
    #[arg(long)]
    elem: String,
    #[arg(long, default_value_t = DEFAULT_MAX_LEVEL, value_parser = positive)]
    max_level: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Md,
}

#[derive(Args)]
struct TableArgs {
    #[command(flatten)]
    filtration: FiltrationArgs,
    /// Integers 0, 1, -1, ..., bound, -bound.
    #[arg(long, conflicts_with_all = ["degree", "coeffs"])]
    bound: Option<u64>,
    /// Polynomials of degree at most this.
    #[arg(long)]
    degree: Option<usize>,
    /// Coefficient pool for --degree, comma-separated.
    #[arg(long, default_value = "0,1", requires = "degree")]
    coeffs: String,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long, default_value_t = DEFAULT_MAX_LEVEL, value_parser = positive)]
    max_level: usize,
}

#[derive(Args)]
struct ValidateArgs {
    #[command(flatten)]
    filtration: FiltrationArgs,
    #[arg(long, default_value_t = DEFAULT_DEPTH, value_parser = positive)]
    depth: usize,
    /// Also check R_n R_m = R_{n+m}.
    #[arg(long)]
    strong: bool,
}

#[derive(Args)]
struct AuditArgs {
    /// Audit config; the bundled default when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Where to write the JSON report.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Evaluate on the current thread only.
    #[arg(long)]
    sequential: bool,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

fn build_filtration(args: &FiltrationArgs) -> Result<Filtration, UsageError> {
    let ring: RingDescriptor = args.ring.parse()?;
    let spec = match (&args.levels.adic, &args.levels.chain) {
        (Some(gens), _) => FiltrationSpec::Adic {
            ideal: gens.split(',').map(|g| g.trim().to_string()).collect(),
        },
        (None, Some(json)) => FiltrationSpec::Explicit {
            chain: parse_chain(json)?,
        },
        (None, None) => unreachable!("clap requires one of --adic, --chain"),
    };
    Ok(spec.build(ring)?)
}

fn parse_chain(json: &str) -> Result<Vec<Vec<String>>, UsageError> {
    let value: serde_json::Value =
        serde_json::from_str(json).map_err(|e| UsageError(format!("--chain: {e}")))?;
    let levels = value
        .as_array()
        .ok_or_else(|| UsageError("--chain must be a JSON array".into()))?;
    levels
        .iter()
        .map(|level| match level {
            serde_json::Value::String(g) => Ok(vec![g.clone()]),
            serde_json::Value::Array(gens) => gens
                .iter()
                .map(|g| {
                    g.as_str().map(str::to_string).ok_or_else(|| {
                        UsageError(format!("--chain: generator {g} is not a string"))
                    })
                })
                .collect(),
            other => Err(UsageError(format!(
                "--chain: level {other} is not a string or array"
            ))),
        })
        .collect()
}

fn cmd_nu(args: &NuArgs) -> Result<ExitCode, UsageError> {
    let f = build_filtration(&args.filtration)?;
    let a = parse_element(f.ring(), &args.elem)?;
    match nu(&f, &a, args.max_level)? {
        ExtValue::AtLeast(n) => println!("nu >= {n}"),
        v => println!("nu = {v}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn cmd_table(args: &TableArgs) -> Result<ExitCode, UsageError> {
    let f = build_filtration(&args.filtration)?;
    let ring = f.ring();
    let kind = match (args.bound, args.degree) {
        (Some(bound), _) => SamplerKind::BoundedIntegers { bound },
        (None, Some(max_degree)) => SamplerKind::BoundedPolys {
            max_degree,
            coefficients: args
                .coeffs
                .split(',')
                .map(|c| c.trim().to_string())
                .collect(),
        },
        (None, None) if matches!(ring.kind(), RingKind::ZmodN { .. }) => {
            SamplerKind::ExhaustiveResidues
        }
        (None, None) => {
            return Err(UsageError(format!(
                "{ring} needs --bound or --degree to bound the sample"
            )))
        }
    };
    let elements = SamplerSpec::new(kind).elements(ring)?;
    let mut out = String::new();
    match args.format {
        Format::Csv => out.push_str("element,nu\n"),
        Format::Md => out.push_str("| element | nu |\n|---|---|\n"),
    }
    for a in &elements {
        let v = nu(&f, a, args.max_level)?;
        match args.format {
            Format::Csv => writeln!(out, "{},{v}", csv_field(&a.to_string())),
            Format::Md => writeln!(out, "| {a} | {v} |"),
        }
        .expect("write to string");
    }
    print!("{out}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_validate(args: &ValidateArgs) -> Result<ExitCode, UsageError> {
    let f = build_filtration(&args.filtration)?;
    match f.validate(args.depth) {
        ValidationVerdict::Fails(v) => {
            println!("FAILS {v}");
            return Ok(ExitCode::from(1));
        }
        ValidationVerdict::Holds { depth } if !args.strong => {
            println!("HOLDS to depth {depth}");
            return Ok(ExitCode::SUCCESS);
        }
        ValidationVerdict::Holds { .. } => {}
    }
    let report = f.is_strong(args.depth)?;
    match report.verdict {
        StrongVerdict::Holds => {
            println!("STRONG to depth {}", report.checked_depth);
            Ok(ExitCode::SUCCESS)
        }
        StrongVerdict::Fails {
            n,
            m,
            unmatched,
            product,
        } => {
            println!("NOT STRONG at n={n}, m={m}: {unmatched} not in {product}");
            Ok(ExitCode::from(1))
        }
    }
}

fn cmd_audit(args: &AuditArgs) -> Result<ExitCode, UsageError> {
    let text = match &args.config {
        Some(path) => {
            fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?
        }
        None => DEFAULT_CONFIG.to_string(),
    };
    let config = AuditConfig::from_json(&text)?;
    let execution = if args.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let report = audit::audit(&config, execution)?;
    if let Some(path) = &args.out {
        fs::write(path, report.to_json_pretty())
            .map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    }
    for cell in &report.cells {
        println!("{}", cell.line());
    }
    let s = &report.summary;
    println!(
        "cells: {}  holds: {}  fails: {}  inconclusive: {}",
        s.cells, s.holds, s.fails, s.inconclusive
    );
    println!("content-hash: {}", report.header.content_hash);
    Ok(ExitCode::from(report.exit_code() as u8))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Nu(args) => cmd_nu(args),
        Command::Table(args) => cmd_table(args),
        Command::Validate(args) => cmd_validate(args),
        Command::Audit(args) => cmd_audit(args),
        Command::Claims => {
            for line in catalog() {
                println!("{line}");
            }
            Ok(ExitCode::SUCCESS)
        }
    };
    result.unwrap_or_else(|UsageError(msg)| {
        eprintln!("filtval: {msg}");
        ExitCode::from(2)
    })
}
