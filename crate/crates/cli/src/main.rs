use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use pkme::constructors::{self, FamilyCase, FamilyParams4Qubit};
use pkme::io::{read_pipeline, read_state_with_tolerance, write_pipeline, write_state, FILE_NORM_TOL};
use pkme::verifier::{classify_with, verify_ame_with_budget, DEFAULT_AME_BUDGET, DEFAULT_TOLERANCE};
use pkme::{
    apply_pipeline, enumerate_structures, four_partite_spec, verify_pkme, verify_pme, Mode, NamedPipeline,
    PureState, RngState, StructureSpec,
};

const EXIT_FAIL: u8 = 2;
const EXIT_ERROR: u8 = 1;

#[derive(Parser)]
#[command(name = "pkme", version, about = "Build and verify planar maximally entangled qudit states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a state from a named family and write it to a file.
    Construct(ConstructArgs),
    /// Check a state file; exits 0 on pass and 2 on fail.
    Verify(VerifyArgs),
    /// Print AME / PME / per-k PKME verdicts for a state file.
    Classify(ClassifyArgs),
    /// List the structures for a particle count and part sizes.
    Structures(StructuresArgs),
    /// Apply a pipeline file to a state file.
    Apply(ApplyArgs),
    /// Write a named pipeline with seeded Haar-random branches.
    Pipeline(PipelineArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
#[allow(clippy::enum_variant_names)]
enum Family {
    /// 4k qudits, local dimension d (needs --k, --d).
    Pkme4k,
    /// The 6-qubit state with parts {1,2}.
    Pkme6,
    /// 5 qudits built from addition mod d (needs --d).
    Pkme5,
    /// 4k+1 qubits built from parity (needs --k).
    Pkme4k1,
    /// The 7-qubit state with parts {2,1} and {2,2}.
    Pkme7,
    /// 2mk qubits, all parts of size k (needs --m, --k).
    General2mk,
    /// 2mk+1 qubits, last B-part of size k+1 (needs --m, --k).
    General2mk1,
    /// n-qudit GHZ (needs --n, --d).
    Ghz,
    /// A 5-qubit AME state.
    Ame5,
    /// 4-qubit family with a random 3x3 block (needs --seed).
    FamilyPrime,
    /// 4-qubit family with random inner and outer 2x2 blocks (needs --seed).
    FamilyDoublePrime,
    /// 4-qubit family with a random inner 2x2 block (needs --seed).
    FamilyZero,
    /// Haar-random state (needs --n, --d, --seed).
    Random,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct SizeArgs {
    /// Part sizes of one structure family, e.g. `--k 2` means {k, n/2 - k}.
    #[arg(long, conflicts_with_all = ["a_sizes", "b_sizes"])]
    k: Option<usize>,
    /// Region A part sizes, comma separated.
    #[arg(long, value_delimiter = ',', requires = "b_sizes")]
    a_sizes: Option<Vec<usize>>,
    /// Region B part sizes, comma separated.
    #[arg(long, value_delimiter = ',', requires = "a_sizes")]
    b_sizes: Option<Vec<usize>>,
}

impl SizeArgs {
    fn spec(&self, n: usize) -> Result<Option<StructureSpec>> {
        Ok(match (self.k, &self.a_sizes, &self.b_sizes) {
            (Some(k), _, _) => Some(four_partite_spec(n, k)?),
            (None, Some(a), Some(b)) => Some(StructureSpec::new(n, a.clone(), b.clone())?),
            _ => None,
        })
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_parser = parse_mode)]
    mode: Mode,
    #[command(flatten)]
    sizes: SizeArgs,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
    /// Norm tolerance used when loading the state.
    #[arg(long, default_value_t = FILE_NORM_TOL)]
    norm_tol: f64,
    /// Largest number of subsets an AME check may examine.
    #[arg(long, default_value_t = DEFAULT_AME_BUDGET)]
    ame_budget: u128,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    file: PathBuf,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Extra structure family to report, given by its part sizes.
    #[arg(long, value_delimiter = ',', requires = "b_sizes")]
    a_sizes: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',', requires = "a_sizes")]
    b_sizes: Option<Vec<usize>>,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
    #[arg(long, default_value_t = FILE_NORM_TOL)]
    norm_tol: f64,
    #[arg(long, default_value_t = DEFAULT_AME_BUDGET)]
    ame_budget: u128,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    file: PathBuf,
}

#[derive(Args)]
struct StructuresArgs {
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    sizes: SizeArgs,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct ApplyArgs {
    #[arg(long)]
    pipeline: PathBuf,
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long, default_value_t = FILE_NORM_TOL)]
    norm_tol: f64,
}

#[derive(Args)]
struct PipelineArgs {
    /// e.g. `even_4k(2)`, `odd_4k1:1`, `five_qudit_tail_first`.
    #[arg(long, value_parser = parse_pipeline_name)]
    name: NamedPipeline,
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long)]
    seed: u64,
    #[arg(short, long)]
    output: PathBuf,
}

fn parse_mode(s: &str) -> std::result::Result<Mode, String> {
    s.parse().map_err(|e: pkme::Error| e.to_string())
}

fn parse_pipeline_name(s: &str) -> std::result::Result<NamedPipeline, String> {
    s.parse().map_err(|e: pkme::Error| e.to_string())
}

fn need<T>(value: Option<T>, flag: &str, family: &str) -> Result<T> {
    value.ok_or_else(|| anyhow!("family '{family}' needs {flag}"))
}

fn construct(args: &ConstructArgs) -> Result<PureState> {
    let name = Family::to_possible_value(&args.family)
        .map(|v| v.get_name().to_owned())
        .unwrap_or_default();
    let k = || need(args.k, "--k", &name);
    let d = || need(args.d, "--d", &name);
    let m = || need(args.m, "--m", &name);
    let n = || need(args.n, "--n", &name);
    let rng = || need(args.seed, "--seed", &name).map(RngState::from_seed);
    let family = |case: FamilyCase| -> Result<PureState> {
        let params = FamilyParams4Qubit::random(case, &mut rng()?)?;
        Ok(constructors::four_qubit_family(&params)?)
    };
    Ok(match args.family {
        Family::Pkme4k => constructors::pkme_4k(k()?, d()?)?,
        Family::Pkme6 => constructors::pkme_6qubit()?,
        Family::Pkme5 => constructors::pkme_5(d()?)?,
        Family::Pkme4k1 => constructors::pkme_4k1(k()?)?,
        Family::Pkme7 => constructors::pkme_7()?,
        Family::General2mk => constructors::general_2mk(m()?, k()?)?,
        Family::General2mk1 => constructors::general_2mk1(m()?, k()?)?,
        Family::Ghz => constructors::ghz(n()?, d()?)?,
        Family::Ame5 => constructors::ame5_fixture(),
        Family::FamilyPrime => family(FamilyCase::Prime)?,
        Family::FamilyDoublePrime => family(FamilyCase::DoublePrime)?,
        Family::FamilyZero => family(FamilyCase::Zero)?,
        Family::Random => PureState::random(n()?, d()?, &mut rng()?)?,
    })
}

fn load(path: &PathBuf, norm_tol: f64) -> Result<PureState> {
    read_state_with_tolerance(path, norm_tol).with_context(|| format!("cannot load state {}", path.display()))
}

fn print_json(value: serde_json::Value) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(&value)?);
    Ok(())
}

/// Returns whether the command's verdict passed.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Construct(args) => {
            let state = construct(&args)?;
            write_state(&state, &args.output)?;
            println!("wrote n={} d={} to {}", state.n(), state.d(), args.output.display());
            Ok(true)
        }
        Command::Verify(args) => {
            let state = load(&args.file, args.norm_tol)?;
            let report = match args.mode {
                Mode::Pkme => {
                    let spec = args
                        .sizes
                        .spec(state.n())?
                        .context("--mode pkme needs --k or --a-sizes/--b-sizes")?;
                    verify_pkme(&state, &spec, args.tol)?
                }
                Mode::Pme | Mode::Ame if args.sizes.k.is_some() || args.sizes.a_sizes.is_some() => {
                    bail!("--k, --a-sizes and --b-sizes only apply to --mode pkme")
                }
                Mode::Pme => verify_pme(&state, args.tol)?,
                Mode::Ame => verify_ame_with_budget(&state, args.tol, args.ame_budget)?,
            };
            match args.format {
                Format::Text => println!("{report}"),
                Format::Json => print_json(serde_json::to_value(&report)?)?,
            }
            Ok(report.verdict())
        }
        Command::Classify(args) => {
            let state = load(&args.file, args.norm_tol)?;
            let general = match (args.a_sizes, args.b_sizes) {
                (Some(a), Some(b)) => Some(StructureSpec::new(state.n(), a, b)?),
                _ => None,
            };
            let c = classify_with(&state, args.tol, general.as_ref(), args.ame_budget)?;
            match args.format {
                Format::Text => println!("{c}"),
                Format::Json => print_json(serde_json::to_value(&c)?)?,
            }
            Ok(true)
        }
        Command::Structures(args) => {
            let spec = args
                .sizes
                .spec(args.n)?
                .context("structures needs --k or --a-sizes/--b-sizes")?;
            let list = enumerate_structures(&spec);
            match args.format {
                Format::Text => list.iter().for_each(|s| println!("{s}")),
                Format::Json => {
                    let doc: Vec<_> = list
                        .iter()
                        .map(|s| serde_json::json!({ "a_parts": s.a_parts(), "b_parts": s.b_parts() }))
                        .collect();
                    print_json(serde_json::Value::Array(doc))?;
                }
            }
            Ok(true)
        }
        Command::Apply(args) => {
            let pipeline = read_pipeline(&args.pipeline)
                .with_context(|| format!("cannot load pipeline {}", args.pipeline.display()))?;
            let state = load(&args.input, args.norm_tol)?;
            let out = apply_pipeline(&state, &pipeline)?;
            write_state(&out, &args.output)?;
            println!("applied {} ops, wrote {}", pipeline.len(), args.output.display());
            Ok(true)
        }
        Command::Pipeline(args) => {
            let mut rng = RngState::from_seed(args.seed);
            let pipeline = args.name.build(args.name.random_branches(args.d, &mut rng)?)?;
            write_pipeline(&pipeline, &args.output)?;
            let sites: Vec<String> = pipeline.sites().iter().map(|(s, t)| format!("({s},{t})")).collect();
            println!("wrote {} applying {} to {}", args.name, sites.join(" "), args.output.display());
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_ERROR);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
