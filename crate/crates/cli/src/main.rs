//! Command-line driver: spherical-model products, presentation tables, and
//! the named verification suites with machine-readable JSON reports.
//!
//! Exit codes: 0 success, 1 verification failure, 2 regime or configuration
//! error, 3 input error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dhecke::cohomology::{torus_group, CohRing};
use dhecke::koszul::{ext_self_algebra, KoszulComplex};
use dhecke::root_datum::RootDatum;
use dhecke::satake::{invariant_dims, SphericalElement, ToralElement, ToralElementJson};
use dhecke::suites::{
    commutativity_suite, engine_suite, iwahori_suite, koszul_suite, manifold_suite,
    presentation_suite, satake_oracle_suite, SuiteReport,
};
use dhecke::tree::validate_regime;
use dhecke::CoeffRing;

const COMMUTATIVITY_SEED: u64 = 271_828;
const COMMUTATIVITY_PAIRS: usize = 50;

#[derive(Parser)]
#[command(
    name = "dhecke",
    version,
    about = "Exact derived Hecke algebra computations with torsion coefficients"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Multiply two spherical elements from JSON files, or emit the
    /// invariant-dimension presentation table.
    Satake(SatakeArgs),
    /// Run one named verification suite and emit its JSON report.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SatakeArgs {
    /// Root datum name: SL2, PGL2, SL3, or Sp4.
    #[arg(long, default_value = "PGL2")]
    group: String,
    /// Residue field size of the underlying local field.
    #[arg(long, default_value_t = 7)]
    q: u64,
    /// Torsion prime.
    #[arg(long, default_value_t = 3)]
    ell: u64,
    /// Coefficient exponent: values live in Z/ell^r.
    #[arg(long, default_value_t = 1)]
    r: u32,
    /// Torus exponent: classes live on (Z/ell^precision)^rank.
    #[arg(long, default_value_t = 1)]
    precision: u32,
    /// Left factor, as a JSON element file.
    #[arg(long, requires = "right")]
    left: Option<PathBuf>,
    /// Right factor, as a JSON element file.
    #[arg(long, requires = "left")]
    right: Option<PathBuf>,
    /// Support bound for the presentation table.
    #[arg(long, conflicts_with = "left")]
    support: Option<i64>,
    /// Degree bound for the presentation table.
    #[arg(long, default_value_t = 2)]
    max_degree: usize,
    /// Write the JSON output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name: satake-oracle, commutativity, presentation, iwahori,
    /// koszul, manifold, or engine.
    #[arg(long)]
    suite: String,
    /// Residue field size for the satake-oracle suite.
    #[arg(long, default_value_t = 7)]
    q: u64,
    /// Torsion prime for the satake-oracle suite.
    #[arg(long, default_value_t = 3)]
    ell: u64,
    /// Coefficient exponent for the satake-oracle suite.
    #[arg(long, default_value_t = 1)]
    r: u32,
    /// Tree ball radius for the satake-oracle suite.
    #[arg(long, default_value_t = 2)]
    depth: u32,
    /// Rank cap for the koszul suite.
    #[arg(long, default_value_t = 4)]
    max_degree: usize,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Satake(args) => cmd_satake(&args),
        Command::Verify(args) => cmd_verify(&args),
    }
}

fn emit(out: &Option<PathBuf>, payload: &str) -> ExitCode {
    match out {
        Some(path) => match fs::write(path, format!("{payload}\n")) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("input error: {}: {e}", path.display());
                ExitCode::from(3)
            }
        },
        None => {
            println!("{payload}");
            ExitCode::SUCCESS
        }
    }
}

fn load_element(rd: &RootDatum, ring: &CohRing, path: &Path) -> Result<SphericalElement, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let json: ToralElementJson =
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let toral =
        ToralElement::from_json(rd, ring, &json).map_err(|e| format!("{}: {e}", path.display()))?;
    SphericalElement::new(toral).map_err(|e| format!("{}: {e}", path.display()))
}

fn cmd_satake(args: &SatakeArgs) -> ExitCode {
    if let Err(e) = validate_regime(args.q, args.ell, args.r) {
        eprintln!("regime error: {e}");
        return ExitCode::from(2);
    }
    let rd = match RootDatum::catalog(&args.group) {
        Ok(rd) => rd,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    };
    let ring = match torus_group(&rd, args.ell, args.precision)
        .and_then(|group| CohRing::new(group, CoeffRing::new(args.ell, args.r)?))
    {
        Ok(ring) => ring,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    };
    match (&args.left, &args.right, args.support) {
        (Some(left), Some(right), None) => {
            let a = match load_element(&rd, &ring, left) {
                Ok(a) => a,
                Err(e) => {
                    eprintln!("input error: {e}");
                    return ExitCode::from(3);
                }
            };
            let b = match load_element(&rd, &ring, right) {
                Ok(b) => b,
                Err(e) => {
                    eprintln!("input error: {e}");
                    return ExitCode::from(3);
                }
            };
            let product = match a.multiply(&b) {
                Ok(p) => p,
                Err(e) => {
                    eprintln!("input error: {e}");
                    return ExitCode::from(3);
                }
            };
            let payload =
                serde_json::to_string_pretty(&product.to_json()).expect("product serializes");
            emit(&args.out, &payload)
        }
        (None, None, Some(bound)) => {
            let dims = match invariant_dims(&rd, &ring, bound, args.max_degree) {
                Ok(dims) => dims,
                Err(e) => {
                    eprintln!("config error: {e}");
                    return ExitCode::from(2);
                }
            };
            let payload = serde_json::to_string_pretty(&dims).expect("table serializes");
            emit(&args.out, &payload)
        }
        _ => {
            eprintln!("config error: pass either --left with --right, or --support");
            ExitCode::from(2)
        }
    }
}

fn run_suite(args: &VerifyArgs) -> dhecke::Result<SuiteReport> {
    match args.suite.as_str() {
        "satake-oracle" => satake_oracle_suite(args.q, args.ell, args.r, args.depth),
        "commutativity" => commutativity_suite(COMMUTATIVITY_SEED, COMMUTATIVITY_PAIRS),
        "presentation" => presentation_suite(),
        "iwahori" => iwahori_suite(),
        "koszul" => {
            let cx = KoszulComplex::new(CoeffRing::new(3, 1)?, args.max_degree)?;
            let algebra = ext_self_algebra(&cx, args.max_degree)?;
            eprintln!(
                "self-Ext ranks (R={}): {:?}",
                args.max_degree, algebra.ranks
            );
            koszul_suite(args.max_degree)
        }
        "manifold" => manifold_suite(),
        "engine" => engine_suite(),
        other => Err(dhecke::Error::Unsupported(format!("unknown suite {other}"))),
    }
}

fn cmd_verify(args: &VerifyArgs) -> ExitCode {
    let report = match run_suite(args) {
        Ok(report) => report,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    };
    let payload = serde_json::to_string_pretty(&report).expect("report serializes");
    let emitted = emit(&args.out, &payload);
    if emitted != ExitCode::SUCCESS {
        return emitted;
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
