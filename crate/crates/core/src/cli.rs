//! Command line front end.
//!
//! Exit codes: 0 on success, 1 on malformed input or tool errors, 2 on
//! domain-level negative results (relation violations, obstacles, failed
//! property checks, failed oracle suites) with machine-readable JSON
//! diagnostics on standard output.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::domain::{standard_basis, BoxShape, LatticePoint, TruncatedBox};
use crate::error::Error;
use crate::laurent;
use crate::properties::{self, Scope};
use crate::rat;
use crate::tiling::{self, Tiling, TilingJson};
use crate::tp::{self, BasisAssignment, FunctionJson, ValuedFunction};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NEGATIVE: i32 = 2;

#[derive(Parser)]
#[command(
    name = "tropical-plucker",
    about = "Tropical Plücker functions on truncated boxes: bases, flows, tilings, Laurent polynomials",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random basis assignment and reconstruct its TP-function.
    Gen(GenArgs),
    /// Reconstruct the unique TP-function from basis values.
    Reconstruct(ReconstructArgs),
    /// Check the TP3/TP4 relations of a function file (exit 0 iff TP).
    Verify(VerifyArgs),
    /// Extend a point set to a rhombic tiling (exit 2 with witness on obstacle).
    Tile(TileArgs),
    /// Flip one hexagon of a tiling.
    Flip(FlipArgs),
    /// Tropical Laurent polynomial of a box point over the standard basis.
    Laurent(LaurentArgs),
    /// Check submodularity / skew-submodularity / discrete concavity.
    Props(PropsArgs),
    /// Render a tiling (with optional vertex values) as SVG.
    ExportSvg(ExportSvgArgs),
    /// Run the brute-force differential oracle suites.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Capacities, comma separated, e.g. 1,2,1
    #[arg(long, value_delimiter = ',', required = true)]
    a: Vec<u32>,
    #[arg(long, default_value_t = 0)]
    m: u32,
    /// Upper truncation bound; defaults to |a|
    #[arg(long)]
    mprime: Option<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Value range lo,hi for the random basis values
    #[arg(
        long,
        value_delimiter = ',',
        num_args = 1,
        allow_hyphen_values = true,
        default_value = "-10,10"
    )]
    range: Vec<i64>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ReconstructArgs {
    /// Basis assignment JSON (box + values on the standard basis)
    #[arg(long)]
    basis: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Function JSON to check
    function: PathBuf,
}

#[derive(Args)]
struct TileArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    a: Vec<u32>,
    /// Points to include: inline JSON like [[0,1,0],[1,0,1]] or a file path
    #[arg(long)]
    points: Option<String>,
    /// Also write an SVG rendering here
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct FlipArgs {
    /// Tiling JSON file
    tiling: PathBuf,
    /// Hexagon as s_1,...,s_n,i,j,k (anchor coordinates then colors)
    #[arg(long, value_delimiter = ',', required = true)]
    hexagon: Vec<u32>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct LaurentArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    a: Vec<u32>,
    /// Target point, comma separated
    #[arg(long, value_delimiter = ',', required = true)]
    point: Vec<u32>,
    /// Truncation bounds (Boolean cube only): use the strong-flow variant
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    mprime: Option<u32>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct PropsArgs {
    /// Function JSON to check
    function: PathBuf,
    #[arg(long)]
    submodular: bool,
    #[arg(long)]
    skew: bool,
    #[arg(long)]
    dc: bool,
}

#[derive(Args)]
struct ExportSvgArgs {
    /// Tiling JSON file
    tiling: PathBuf,
    /// Optional function JSON supplying vertex labels
    #[arg(long)]
    values: Option<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long = "max-n", default_value_t = 4)]
    max_n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn write_out(path: &Option<PathBuf>, contents: &str) -> Result<(), Error> {
    match path {
        Some(p) => std::fs::write(p, contents)
            .map_err(|e| Error::Parse(format!("cannot write {}: {e}", p.display()))),
        None => {
            println!("{contents}");
            Ok(())
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn function_to_string(f: &ValuedFunction) -> String {
    serde_json::to_string_pretty(&f.to_json()).expect("function serializes")
}

/// Runs a parsed command; separated from `run` so tests can drive it.
fn dispatch(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Gen(args) => {
            let shape = BoxShape::new(args.a)?;
            let m_prime = args.mprime.unwrap_or_else(|| shape.total());
            let bx = TruncatedBox::new(shape, args.m, m_prime)?;
            if args.range.len() != 2 {
                return Err(Error::Precondition("--range needs lo,hi".into()));
            }
            let (lo, hi) = (args.range[0], args.range[1]);
            if lo > hi {
                return Err(Error::Precondition("empty value range".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            let values: BTreeMap<_, _> = standard_basis(&bx)
                .into_iter()
                .map(|b| {
                    let v = if b.is_zero() {
                        0
                    } else {
                        rng.random_range(lo..=hi)
                    };
                    (b, rat::int(v))
                })
                .collect();
            let g = BasisAssignment::new(bx, values)?;
            let f = tp::reconstruct(&g)?;
            write_out(&args.output, &function_to_string(&f))?;
            Ok(EXIT_OK)
        }
        Command::Reconstruct(args) => {
            let j: FunctionJson = read_json(&args.basis)?;
            let g = BasisAssignment::from_json(&j)?;
            let f = tp::reconstruct(&g)?;
            write_out(&args.output, &function_to_string(&f))?;
            Ok(EXIT_OK)
        }
        Command::Verify(args) => {
            let j: FunctionJson = read_json(&args.function)?;
            let f = ValuedFunction::from_json(&j)?;
            let report = tp::verify(&f);
            if report.is_empty() {
                println!("{}", json!({"tp": true}));
                Ok(EXIT_OK)
            } else {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("report serializes")
                );
                Ok(EXIT_NEGATIVE)
            }
        }
        Command::Tile(args) => {
            let shape = BoxShape::new(args.a)?;
            let points: BTreeSet<LatticePoint> = match &args.points {
                None => BTreeSet::new(),
                Some(spec) => {
                    let text = if spec.trim_start().starts_with('[') {
                        spec.clone()
                    } else {
                        std::fs::read_to_string(spec)
                            .map_err(|e| Error::Parse(format!("cannot read {spec}: {e}")))?
                    };
                    let raw: Vec<Vec<u32>> = serde_json::from_str(&text)
                        .map_err(|e| Error::Parse(format!("points: {e}")))?;
                    raw.into_iter().map(LatticePoint::new).collect()
                }
            };
            for p in &points {
                if !shape.contains(p) {
                    return Err(Error::InvalidPoint(format!("{p} outside the box")));
                }
            }
            match tiling::extend_points_to_tiling(&shape, &points) {
                Ok(t) => {
                    if let Some(svg_path) = &args.svg {
                        std::fs::write(svg_path, tiling::render_svg(&t, None))
                            .map_err(|e| Error::Parse(format!("svg: {e}")))?;
                    }
                    let text =
                        serde_json::to_string_pretty(&t.to_json()).expect("tiling serializes");
                    write_out(&args.output, &text)?;
                    Ok(EXIT_OK)
                }
                Err(obstacle) => {
                    println!(
                        "{}",
                        json!({
                            "obstacle": obstacle,
                        })
                    );
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Command::Flip(args) => {
            let j: TilingJson = read_json(&args.tiling)?;
            let t = Tiling::from_json(&j)?;
            let n = t.shape().n();
            if args.hexagon.len() != n + 3 {
                return Err(Error::Precondition(format!(
                    "--hexagon needs {n} anchor coordinates plus i,j,k"
                )));
            }
            let anchor = LatticePoint::new(args.hexagon[..n].to_vec());
            let (i, j, k) = (
                args.hexagon[n] as usize,
                args.hexagon[n + 1] as usize,
                args.hexagon[n + 2] as usize,
            );
            let hex = tiling::find_hexagons(&t)
                .into_iter()
                .find(|h| h.anchor == anchor && (h.i, h.j, h.k) == (i, j, k))
                .ok_or_else(|| {
                    Error::Precondition(format!("no hexagon at {anchor} with colors {i},{j},{k}"))
                })?;
            let flipped = tiling::flip(&t, &hex)?;
            let text = serde_json::to_string_pretty(&flipped.to_json()).expect("tiling serializes");
            write_out(&args.output, &text)?;
            Ok(EXIT_OK)
        }
        Command::Laurent(args) => {
            let shape = BoxShape::new(args.a)?;
            let point = LatticePoint::new(args.point);
            if !shape.contains(&point) {
                return Err(Error::InvalidPoint(format!("{point} outside the box")));
            }
            let poly = match (args.m, args.mprime) {
                (None, None) => laurent::laurent_box(&shape, &point)?,
                (m, mp) => {
                    if !shape.is_cube() {
                        return Err(Error::Precondition(
                            "truncated Laurent polynomials need a Boolean cube".into(),
                        ));
                    }
                    let n = shape.n();
                    let m = m.unwrap_or(0);
                    let mp = mp.unwrap_or(n as u32);
                    laurent::laurent_truncated(n, m, mp, &point.to_subset())?
                }
            };
            let text = serde_json::to_string_pretty(&poly.to_json()).expect("poly serializes");
            write_out(&args.output, &text)?;
            Ok(EXIT_OK)
        }
        Command::Props(args) => {
            let j: FunctionJson = read_json(&args.function)?;
            let f = ValuedFunction::from_json(&j)?;
            if !(args.submodular || args.skew || args.dc) {
                return Err(Error::Precondition(
                    "choose at least one of --submodular, --skew, --dc".into(),
                ));
            }
            let mut combined = Vec::new();
            if args.submodular {
                combined.extend(properties::check_submodular(&f, Scope::Domain).violations);
            }
            if args.skew {
                combined.extend(properties::check_skew_submodular(&f, Scope::Domain).violations);
            }
            if args.dc {
                combined.extend(properties::check_dctp(&f, Scope::Domain).violations);
            }
            if combined.is_empty() {
                println!("{}", json!({"holds": true}));
                Ok(EXIT_OK)
            } else {
                let report = tp::ViolationReport {
                    violations: combined,
                };
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("report serializes")
                );
                Ok(EXIT_NEGATIVE)
            }
        }
        Command::ExportSvg(args) => {
            let j: TilingJson = read_json(&args.tiling)?;
            let t = Tiling::from_json(&j)?;
            let labels = match &args.values {
                None => None,
                Some(path) => {
                    let fj: FunctionJson = read_json(path)?;
                    let f = ValuedFunction::from_json(&fj)?;
                    Some(f.values().clone())
                }
            };
            let svg = tiling::render_svg(&t, labels.as_ref());
            write_out(&args.output, &svg)?;
            Ok(EXIT_OK)
        }
        Command::Oracle(args) => {
            let results = crate::oracle::run_suite(&args.suite, args.max_n, args.seed)?;
            let mut all_ok = true;
            for r in &results {
                let status = if r.passed() { "PASS" } else { "FAIL" };
                println!(
                    "{status} {} ({} checks, {} failures)",
                    r.name, r.checks, r.failures
                );
                all_ok &= r.passed();
            }
            Ok(if all_ok { EXIT_OK } else { EXIT_NEGATIVE })
        }
    }
}

/// Parses and runs a command line; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version with success exit codes
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}
