use std::fmt::Display;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use entropic_core::algebra::ExpressionJson;
use entropic_core::dist::{JointDistribution, LogBase};
use entropic_core::metrics::{metric_expression, MetricName};
use entropic_core::pid::{
    cmi_atom_set, enumerate_atoms, reference_pid, verify_theorem1_sets, Antichain, AtomJson,
};
use entropic_core::spin::{emit_results, run_experiment, SpinEnsembleConfig};
use entropic_core::subset::{full_mask, SubsetIndex};
use entropic_core::{classify, to_u_basis, EntropyExpression, Error};

#[derive(Parser)]
#[command(
    name = "entropic",
    version,
    about = "Entropy-expression algebra, metrics and PID tools"
)]
struct Cli {
    /// Logarithm base for numeric entropies.
    #[arg(long, global = true, value_enum, default_value = "2")]
    log_base: Base,
    /// Allowed deviation of a probability table's total mass from 1.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Base {
    #[value(name = "2")]
    Two,
    #[value(name = "e")]
    E,
}

impl From<Base> for LogBase {
    fn from(b: Base) -> Self {
        match b {
            Base::Two => LogBase::Two,
            Base::E => LogBase::E,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate named metrics and the u-profile of a distribution.
    Metrics {
        /// CSV with header x1..xn,p (or x1..xn with --samples).
        #[arg(long)]
        dist: PathBuf,
        /// Metrics to report; all of them when omitted.
        #[arg(long, value_delimiter = ',')]
        metric: Vec<MetricName>,
        /// Treat the file as raw observations and use empirical frequencies.
        #[arg(long)]
        samples: bool,
    },
    /// Print the conjugate of an expression given as JSON (`-` reads stdin).
    Conjugate { input: String },
    /// Print the u-basis coordinates of an expression.
    Basis { input: String },
    /// Print symmetric, skew-symmetric or neither.
    Classify { input: String },
    /// Redundancy-lattice tools.
    Pid {
        #[command(subcommand)]
        command: PidCommand,
    },
    /// Run the Ising ensemble experiment and write its outputs.
    Spinlab {
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long, default_value_t = 5.0)]
        mu: f64,
        #[arg(long, default_value_t = 2.0)]
        sigma2: f64,
        /// Systems per coupling regime.
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum PidCommand {
    /// List every atom for `n` sources.
    ListAtoms {
        #[arg(long)]
        n: usize,
    },
    /// Dual of an antichain such as "[[1,2],[1,3]]".
    Dual {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        antichain: String,
    },
    /// Atoms of I(X^a; Y | X^b); sets are JSON lists such as "[1,2]".
    CmiSet {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: String,
        #[arg(long, default_value = "[]")]
        b: String,
    },
    /// Check the dual-atom correspondence for one pair, or for every pair when `--a` is omitted.
    VerifyTheorem1 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: Option<String>,
        #[arg(long, default_value = "[]")]
        b: String,
    },
    /// Reference decomposition of a distribution whose last column is the target.
    Decompose {
        #[arg(long)]
        dist: PathBuf,
        #[arg(long)]
        samples: bool,
    },
}

/// A failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Display) -> Self {
        Failure {
            code: 2,
            message: message.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_domain_error() { 3 } else { 2 },
            message: e.to_string(),
        }
    }
}

type CliResult = std::result::Result<Value, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Value::String(s)) => {
            println!("{s}");
            ExitCode::SUCCESS
        }
        Ok(v) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&v).expect("JSON value serializes")
            );
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> CliResult {
    let base = LogBase::from(cli.log_base);
    match &cli.command {
        Command::Metrics {
            dist,
            metric,
            samples,
        } => {
            let d = load_distribution(dist, *samples, cli.tolerance)?;
            metrics(&d, metric, base)
        }
        Command::Conjugate { input } => {
            let e = read_expression(input)?;
            Ok(serde_json::to_value(e.conjugate().to_json()).expect("expression serializes"))
        }
        Command::Basis { input } => {
            let c = to_u_basis(&read_expression(input)?)?;
            Ok(Value::String(c.to_string()))
        }
        Command::Classify { input } => {
            let c = to_u_basis(&read_expression(input)?)?;
            Ok(Value::String(classify(&c).as_str().to_string()))
        }
        Command::Pid { command } => pid(command, cli.tolerance),
        Command::Spinlab {
            n,
            beta,
            mu,
            sigma2,
            count,
            seed,
            out,
        } => {
            let config = SpinEnsembleConfig {
                n: *n,
                beta: *beta,
                mu: *mu,
                sigma2: *sigma2,
                systems_per_condition: *count,
                seed: *seed,
                ..Default::default()
            };
            let output = run_experiment(&config)?;
            let files = emit_results(&output, out)?;
            Ok(json!({
                "files": files.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
                "explained_variance": output.pca.explained_variance,
                "pc1": output.pca.pc1(),
                "pc2": output.pca.pc2(),
            }))
        }
    }
}

fn load_distribution(
    path: &Path,
    samples: bool,
    tolerance: f64,
) -> Result<JointDistribution, Failure> {
    let loaded = if samples {
        JointDistribution::from_samples_path(path)
    } else {
        JointDistribution::from_csv_path(path, tolerance)
    };
    loaded.map_err(|e| match e {
        Error::Io { .. } => Failure::from(e),
        other => Failure::input(format!("{}: {other}", path.display())),
    })
}

fn metrics(d: &JointDistribution, requested: &[MetricName], base: LogBase) -> CliResult {
    let table = d.entropy_table(base);
    let names: Vec<MetricName> = if requested.is_empty() {
        MetricName::ALL.to_vec()
    } else {
        requested.to_vec()
    };
    let mut values = Map::new();
    for m in names {
        let v = table.evaluate(&metric_expression(m, d.n())?)?;
        values.insert(m.as_str().to_string(), json!(v));
    }
    let u = if d.n() >= 2 {
        json!(table.u_values()?.values)
    } else {
        json!([])
    };
    Ok(json!({
        "n": d.n(),
        "base": match base { LogBase::Two => "2", LogBase::E => "e" },
        "metrics": values,
        "u": u,
    }))
}

fn read_expression(input: &str) -> Result<EntropyExpression, Failure> {
    let (text, source) = if input == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::input(format!("stdin: {e}")))?;
        (s, "stdin".to_string())
    } else {
        let s =
            std::fs::read_to_string(input).map_err(|e| Failure::input(format!("{input}: {e}")))?;
        (s, input.to_string())
    };
    let json: ExpressionJson = serde_json::from_str(&text)
        .map_err(|e| Failure::input(format!("{source}: line {}: {e}", e.line())))?;
    EntropyExpression::from_json(&json).map_err(|e| Failure::input(format!("{source}: {e}")))
}

fn parse_set(text: &str, n: usize) -> Result<SubsetIndex, Failure> {
    let members: Vec<usize> =
        serde_json::from_str(text).map_err(|e| Failure::input(format!("bad set {text:?}: {e}")))?;
    Ok(SubsetIndex::from_members(&members, n)?)
}

fn pid(command: &PidCommand, tolerance: f64) -> CliResult {
    let atoms_json = |atoms: Vec<AtomJson>| serde_json::to_value(atoms).expect("atoms serialize");
    match command {
        PidCommand::ListAtoms { n } => {
            let atoms = enumerate_atoms(*n)?;
            Ok(atoms_json(
                atoms.iter().map(|f| AtomJson::new(f, None)).collect(),
            ))
        }
        PidCommand::Dual { n, antichain } => {
            let lists: Vec<Vec<usize>> = serde_json::from_str(antichain)
                .map_err(|e| Failure::input(format!("bad antichain {antichain:?}: {e}")))?;
            let f = Antichain::from_lists(&lists, *n)?.to_boolean_function(*n)?;
            Ok(serde_json::to_value(AtomJson::new(&f.dual(), None)).expect("atom serializes"))
        }
        PidCommand::CmiSet { n, a, b } => {
            let set = cmi_atom_set(parse_set(a, *n)?, parse_set(b, *n)?, *n)?;
            Ok(atoms_json(
                set.iter().map(|f| AtomJson::new(f, None)).collect(),
            ))
        }
        PidCommand::VerifyTheorem1 { n, a, b } => {
            let pairs: Vec<(SubsetIndex, SubsetIndex)> = match a {
                Some(a) => vec![(parse_set(a, *n)?, parse_set(b, *n)?)],
                None => (1..=full_mask(*n))
                    .flat_map(|a| {
                        (0..=full_mask(*n))
                            .filter(move |b| a & b == 0)
                            .map(move |b| (SubsetIndex::from_mask(a), SubsetIndex::from_mask(b)))
                    })
                    .collect(),
            };
            let mut failures = Vec::new();
            for &(a, b) in &pairs {
                if !verify_theorem1_sets(a, b, *n)? {
                    failures.push(json!({ "a": a.members(), "b": b.members() }));
                }
            }
            if !failures.is_empty() {
                return Err(Failure {
                    code: 1,
                    message: format!("correspondence fails for {}", Value::Array(failures)),
                });
            }
            Ok(json!({ "n": n, "pairs_checked": pairs.len(), "holds": true }))
        }
        PidCommand::Decompose { dist, samples } => {
            let d = load_distribution(dist, *samples, tolerance)?;
            let pid = reference_pid(&d)?;
            Ok(atoms_json(
                pid.iter().map(|(f, v)| AtomJson::new(f, Some(v))).collect(),
            ))
        }
    }
}
