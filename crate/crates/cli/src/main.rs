use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use eqbundle_core::catalog::{self, CatalogEntry};
use eqbundle_core::pipeline::{self, RunConfig, Status};
use eqbundle_core::scalar::{Mode, DEFAULT_EPS};
use eqbundle_core::specfile;
use eqbundle_core::Error;

#[derive(Parser)]
#[command(name = "eqbundle", version, about = "Classify and verify equivariant hermitian bundles on semidirect products")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check structure constants, actions, Z data, homomorphisms and pairs.
    Validate {
        #[command(flatten)]
        common: Common,
    },
    /// Invariant spaces, C0 membership and weight certificates for each beta.
    Classify {
        #[command(flatten)]
        common: Common,
        /// Enumerate characters A..B of a one-dimensional K(S) instead of the
        /// shipped beta data.
        #[arg(long, value_name = "A..B", allow_hyphen_values = true, value_parser = parse_range)]
        beta_range: Option<RangeInclusive<i64>>,
    },
    /// Finite-difference flatness, invariance and holomorphicity checks.
    Verify {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        numeric: Numeric,
        /// Only this pair (a shipped pair id or a generated `target/beta/...` id).
        #[arg(long)]
        pair: Option<String>,
        /// A stand-alone pair file to verify against the entry.
        #[arg(long, value_name = "PATH", conflicts_with = "pair")]
        pair_file: Option<PathBuf>,
    },
    /// Write every catalog entry as a spec file.
    ExportCatalog {
        /// Output directory.
        #[arg(long, default_value = "catalog")]
        out: PathBuf,
        /// Export only this entry.
        #[arg(long)]
        entry: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

#[derive(Args)]
struct Common {
    /// Spec file, or `catalog:<id>` for a built-in entry.
    input: String,
    #[arg(long, value_enum, default_value = "exact")]
    mode: ModeArg,
    /// Zero threshold in float mode.
    #[arg(long, default_value_t = DEFAULT_EPS)]
    eps: f64,
    /// Seed for sampled checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Numeric {
    /// Grid points per real chart dimension.
    #[arg(long, default_value_t = eqbundle_core::numeric::DEFAULT_GRID_POINTS)]
    grid: usize,
    /// Finite-difference step.
    #[arg(long, default_value_t = eqbundle_core::numeric::DEFAULT_STEP)]
    step: f64,
    /// Samples for the invariance probes.
    #[arg(long, default_value_t = 64)]
    samples: usize,
}

fn parse_range(s: &str) -> Result<RangeInclusive<i64>, String> {
    let (a, b) = s
        .split_once("..")
        .or_else(|| s.split_once(':'))
        .ok_or_else(|| format!("expected A..B, got {s:?}"))?;
    let a: i64 = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let b: i64 = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok(a..=b)
}

fn config(common: &Common, numeric: Option<&Numeric>) -> RunConfig {
    let mut cfg = RunConfig {
        mode: match common.mode {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Float => Mode::Float,
        },
        eps: common.eps,
        seed: common.seed,
        ..RunConfig::default()
    };
    if let Some(n) = numeric {
        cfg.grid = n.grid;
        cfg.step = n.step;
        cfg.samples = n.samples;
    }
    cfg
}

fn load(input: &str) -> Result<CatalogEntry, Error> {
    if let Some(id) = input.strip_prefix("catalog:") {
        return catalog::entry(id).ok_or_else(|| {
            let ids: Vec<String> = catalog::catalog().into_iter().map(|e| e.id).collect();
            Error::Input(format!("no catalog entry {id:?}; known: {}", ids.join(", ")))
        });
    }
    let text = fs::read_to_string(input)?;
    specfile::parse_entry(&text)
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<Status, Error> {
    match cli.command {
        Command::Validate { common } => {
            let e = load(&common.input)?;
            let r = pipeline::validate(&e, &config(&common, None));
            emit(&pipeline::to_json(&r), common.out.as_deref())?;
            Ok(r.status)
        }
        Command::Classify { common, beta_range } => {
            let e = load(&common.input)?;
            let r = pipeline::classify(&e, &config(&common, None), beta_range)?;
            emit(&pipeline::to_json(&r), common.out.as_deref())?;
            Ok(r.status)
        }
        Command::Verify {
            common,
            numeric,
            pair,
            pair_file,
        } => {
            let mut e = load(&common.input)?;
            let pair = match pair_file {
                Some(path) => {
                    let p = specfile::parse_pair_file(&fs::read_to_string(path)?, &mut e)?;
                    let id = p.id.clone();
                    e.pairs.push(p);
                    Some(id)
                }
                None => pair,
            };
            let r = pipeline::verify(&e, &config(&common, Some(&numeric)), pair.as_deref())?;
            emit(&pipeline::to_json(&r), common.out.as_deref())?;
            Ok(r.status)
        }
        Command::ExportCatalog { out, entry } => {
            let entries: Vec<CatalogEntry> = match entry {
                Some(id) => vec![load(&format!("catalog:{id}"))?],
                None => catalog::catalog(),
            };
            fs::create_dir_all(&out)?;
            for e in entries {
                let path = out.join(format!("{}.json", e.id));
                fs::write(&path, specfile::export_entry(&e))?;
                println!("{}", path.display());
            }
            Ok(Status::Pass)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(status) => ExitCode::from(status.exit_code() as u8),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(Status::ValidationFailure.exit_code() as u8)
        }
    }
}
