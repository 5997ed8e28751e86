//! The `zlab` command line.
//!
//! Exit codes: 0 success, 1 a check failed or another runtime error,
//! 2 bad arguments or malformed input, 3 a family could not be generated.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::bounds::{gammas, BoundReport};
use crate::experiments::{audit_decomposition, run_sweep, write_rows, SweepConfig, SweepError};
use crate::families::{extremal_incidence_counts, FamilySpec};
use crate::hypergraph::Instance;
use crate::regularity::{estimate_on_instance, refine_to_strong, restrict, EstimateConfig, Mode, RegularityWitness, WitnessError};

#[derive(Debug, Parser)]
#[command(name = "zlab", version, about = "Exact oracles, bound functions and regularity witnesses for k-partite relations")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Search an instance for K_{u,...,u}.
    Freeness {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        u: usize,
    },
    /// Evaluate bound functions
    #[command(subcommand)]
    Bounds(BoundsCommand),
    /// Check, refine, restrict or estimate regularity witnesses
    #[command(subcommand)]
    Witness(WitnessCommand),
    /// Generate named relation families
    #[command(subcommand)]
    Family(FamilyCommand),
    /// Run sweeps and decomposition audits
    #[command(subcommand)]
    Experiment(ExperimentCommand),
}

#[derive(Debug, Subcommand)]
enum BoundsCommand {
    /// Evaluate the bound functions at one size vector.
    Eval {
        #[arg(long, value_delimiter = ',', required = true)]
        c: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u64>,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 2)]
        u: usize,
        /// Instance whose exact edge count is reported alongside.
        #[arg(long)]
        instance: Option<PathBuf>,
    },
    /// Print the exponent vector γ.
    Gamma {
        #[arg(long, value_delimiter = ',', required = true)]
        c: Vec<f64>,
    },
}

#[derive(Debug, Args)]
struct WitnessInput {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    witness: PathBuf,
}

#[derive(Debug, Subcommand)]
enum WitnessCommand {
    /// Check a witness; exits 1 when it fails.
    Verify {
        #[command(flatten)]
        input: WitnessInput,
        #[arg(long, default_value = "weak")]
        mode: Mode,
    },
    /// Turn a weak witness into a strong one with exponents raised by one.
    Refine {
        #[command(flatten)]
        input: WitnessInput,
    },
    /// Restrict to the common fiber of class 0.
    Restrict {
        #[command(flatten)]
        input: WitnessInput,
    },
    /// Fit exponents from greedy partitions over a δ grid.
    Estimate {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = [0.25, 0.125, 0.0625, 0.03125])]
        delta_grid: Vec<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20_000)]
        budget: usize,
    },
}

#[derive(Debug, Subcommand)]
enum FamilyCommand {
    /// Emit the instance JSON of a family on its canonical classes.
    Gen(Box<GenArgs>),
    /// Point, line and incidence counts of projective planes.
    Incidence {
        #[arg(long, value_delimiter = ',', required = true)]
        q: Vec<u64>,
    },
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long)]
    name: String,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    m: Option<u64>,
    /// Modulus for grid_point_line, edge probability for random.
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    dim: Option<u64>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    modulus: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    residues: Option<Vec<u64>>,
    #[arg(long)]
    size: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<u64>>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum ExperimentCommand {
    /// Run a sweep; rows go to the configured output or stdout.
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
    /// Split the edges of an instance by the bad cells of a witness.
    Audit {
        #[command(flatten)]
        input: WitnessInput,
    },
}

#[derive(Debug)]
pub enum CliError {
    /// Exit code 1.
    Failed(String),
    /// Exit code 2.
    Config(String),
    /// Exit code 3.
    Generation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Config(_) => 2,
            CliError::Generation(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Failed(m) | CliError::Config(m) | CliError::Generation(m) => m,
        }
    }
}

impl From<WitnessError> for CliError {
    fn from(e: WitnessError) -> Self {
        CliError::Failed(e.to_string())
    }
}

impl From<SweepError> for CliError {
    fn from(e: SweepError) -> Self {
        match e {
            SweepError::Generation { .. } => CliError::Generation(e.to_string()),
            e if e.is_config() => CliError::Config(e.to_string()),
            e => CliError::Failed(e.to_string()),
        }
    }
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Failed(format!("{}: {e}", path.display()))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let file = File::open(path).map_err(|e| io_error(path, e))?;
    serde_json::from_reader(BufReader::new(file)).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn print_json(out: &mut dyn Write, value: &impl Serialize) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(|e| CliError::Failed(e.to_string()))?;
    writeln!(out).map_err(|e| CliError::Failed(e.to_string()))
}

fn config_err(e: impl std::fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

/// Sizes the global thread pool from `ZLAB_THREADS` when set.
pub fn init_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("ZLAB_THREADS") {
        let n: usize = v.parse().map_err(|_| CliError::Config(format!("ZLAB_THREADS={v:?} is not a number")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Failed(e.to_string()))?;
    }
    Ok(())
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => match e.kind() {
            clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                return write!(out, "{}", e.render()).map_err(|e| CliError::Failed(e.to_string()));
            }
            _ => return Err(CliError::Config(e.render().to_string())),
        },
    };
    execute(cli.command, out)
}

fn execute(command: Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Freeness { instance, u } => {
            let inst: Instance = read_json(&instance)?;
            match inst.find_complete(u) {
                Some(w) => {
                    writeln!(out, "contains").map_err(|e| CliError::Failed(e.to_string()))?;
                    print_json(out, &w)
                }
                None => writeln!(out, "free").map_err(|e| CliError::Failed(e.to_string())),
            }
        }
        Command::Bounds(BoundsCommand::Eval { c, n, eps, u, instance }) => {
            let exact = match instance {
                Some(path) => {
                    let inst: Instance = read_json(&path)?;
                    let sizes: Vec<u64> = inst.sizes().iter().map(|&s| s as u64).collect();
                    if sizes != n {
                        return Err(CliError::Config(format!("instance sizes {sizes:?} differ from --n {n:?}")));
                    }
                    Some(inst.edge_count() as u64)
                }
                None => None,
            };
            let report = BoundReport::evaluate(&c, &n, eps, u, exact).map_err(config_err)?;
            print_json(out, &report)
        }
        Command::Bounds(BoundsCommand::Gamma { c }) => print_json(out, &gammas(&c).map_err(config_err)?),
        Command::Witness(cmd) => witness(cmd, out),
        Command::Family(FamilyCommand::Gen(args)) => {
            let target = args.out.clone();
            let spec = family_spec(*args)?;
            let inst = spec.instance().map_err(|e| CliError::Generation(format!("{spec}: {e}")))?;
            match target {
                Some(path) => {
                    let file = File::create(&path).map_err(|e| io_error(&path, e))?;
                    let mut w = BufWriter::new(file);
                    serde_json::to_writer(&mut w, &inst).map_err(|e| CliError::Failed(e.to_string()))?;
                    w.flush().map_err(|e| io_error(&path, e))
                }
                None => print_json(out, &inst),
            }
        }
        Command::Family(FamilyCommand::Incidence { q }) => {
            let rows = extremal_incidence_counts(&q).map_err(|e| CliError::Generation(e.to_string()))?;
            print_json(out, &rows)
        }
        Command::Experiment(ExperimentCommand::Sweep { config }) => {
            let file = File::open(&config).map_err(|e| io_error(&config, e))?;
            let cfg = SweepConfig::from_reader(BufReader::new(file))?;
            let rows = run_sweep(&cfg)?;
            match &cfg.output {
                Some(path) => {
                    let file = File::create(path).map_err(|e| io_error(path, e))?;
                    write_rows(&rows, cfg.format, BufWriter::new(file))?;
                }
                None => write_rows(&rows, cfg.format, &mut *out)?,
            }
            Ok(())
        }
        Command::Experiment(ExperimentCommand::Audit { input }) => {
            let (inst, w) = load_pair(&input)?;
            print_json(out, &audit_decomposition(&inst, &w)?)
        }
    }
}

fn load_pair(input: &WitnessInput) -> Result<(Instance, RegularityWitness), CliError> {
    Ok((read_json(&input.instance)?, read_json(&input.witness)?))
}

fn witness(cmd: WitnessCommand, out: &mut dyn Write) -> Result<(), CliError> {
    match cmd {
        WitnessCommand::Verify { input, mode } => {
            let (inst, w) = load_pair(&input)?;
            let outcome = w.verify(&inst, mode)?;
            print_json(out, &outcome)?;
            if outcome.passed {
                Ok(())
            } else {
                Err(CliError::Failed("verification failed".into()))
            }
        }
        WitnessCommand::Refine { input } => {
            let (inst, w) = load_pair(&input)?;
            let r = refine_to_strong(&inst, &w)?;
            print_json(
                out,
                &json!({
                    "witness": r.witness,
                    "piece_size": r.piece_size,
                    "remainder_blocks": r.remainder_blocks,
                    "full_blocks": r.full_blocks,
                    "remainder_mass": r.remainder_mass,
                    "bad_mass": r.bad_mass as f64,
                    "claims": r.claims(),
                }),
            )
        }
        WitnessCommand::Restrict { input } => {
            let (inst, w) = load_pair(&input)?;
            let r = restrict(&inst, &w)?;
            print_json(out, &r)
        }
        WitnessCommand::Estimate {
            instance,
            delta_grid,
            seed,
            budget,
        } => {
            let inst: Instance = read_json(&instance)?;
            let config = EstimateConfig { delta_grid, budget, seed };
            let est = estimate_on_instance(&inst, &config).map_err(|e| match e {
                WitnessError::GridTooShort(_) | WitnessError::GridOrder => config_err(e),
                e => e.into(),
            })?;
            print_json(out, &est)
        }
    }
}

/// Builds the tagged family JSON from whichever flags were given.
fn family_spec(args: GenArgs) -> Result<FamilySpec, CliError> {
    let mut obj = Map::new();
    obj.insert("name".into(), Value::from(args.name));
    let mut put = |key: &str, v: Option<Value>| {
        if let Some(v) = v {
            obj.insert(key.into(), v);
        }
    };
    put("q", args.q.map(Value::from));
    put("m", args.m.map(Value::from));
    put("n", args.n.map(Value::from));
    put("dim", args.dim.map(Value::from));
    put("k", args.k.map(Value::from));
    put("modulus", args.modulus.map(Value::from));
    put("residues", args.residues.map(Value::from));
    put("size", args.size.map(Value::from));
    put("sizes", args.sizes.map(Value::from));
    put("seed", args.seed.map(Value::from));
    let p = match args.p {
        None => None,
        Some(s) => Some(match s.parse::<u64>() {
            Ok(i) => Value::from(i),
            Err(_) => Value::from(s.parse::<f64>().map_err(|_| CliError::Config(format!("--p {s:?} is not a number")))?),
        }),
    };
    put("p", p);
    serde_json::from_value(Value::Object(obj)).map_err(config_err)
}
