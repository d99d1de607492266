use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use latticemed::finite::{corpus, corpus_to_json};
use latticemed::lattice::LatticeJson;
use latticemed::pointwise::Pointwise;
use latticemed::suites::{run_suite, SuiteConfig, SUITE_NAMES};
use latticemed::syntax::parse_term;
use latticemed::{
    m_k_pointwise, total_orderization_pointwise, Error, ExactTuple, FiniteLattice, Result,
};

/// Generalized medians and total-orderization invariance checks.
#[derive(Debug, Parser)]
#[command(name = "latticemed", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the poset and downset-lattice corpus as JSON.
    Gen {
        #[arg(long, default_value_t = 5)]
        max_poset: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate a lattice term in a finite lattice or on coordinate tuples.
    Eval(EvalArgs),
    /// Print the total orderization of tuples, or a single M_k.
    Orderize {
        #[arg(long)]
        vectors: PathBuf,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Run a named suite and optionally write its JSON report.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        max_poset: Option<usize>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// List suite names.
    Suites,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long)]
    expr: String,
    /// A lattice JSON object, or a corpus file together with --index.
    #[arg(long, conflicts_with = "vectors", requires = "bind")]
    lattice: Option<PathBuf>,
    #[arg(long)]
    index: Option<usize>,
    /// Comma-separated `name=element` pairs.
    #[arg(long)]
    bind: Option<String>,
    /// Named tuples: `{"a": [3, 1], ...}` or an array bound to a, b, c, ...
    #[arg(long, required_unless_present = "lattice")]
    vectors: Option<PathBuf>,
}

/// Exit statuses: success, counterexample found, usage or input error.
const EXIT_COUNTEREXAMPLE: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("LATTICEMED_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| Error::Argument(format!("LATTICEMED_THREADS must be a number, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::Argument(e.to_string()))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Gen { max_poset, out } => {
            let c = corpus(max_poset)?;
            write(&out, &corpus_to_json(&c))?;
            println!("wrote {} posets to {}", c.len(), out.display());
        }
        Command::Eval(args) => println!("{}", eval(&args)?),
        Command::Orderize { vectors, k } => {
            let (_, tuples) = load_vectors(&vectors)?;
            match k {
                Some(k) => println!("{}", m_k_pointwise(&tuples, k)?),
                None => {
                    for t in total_orderization_pointwise(&tuples)? {
                        println!("{t}");
                    }
                }
            }
        }
        Command::Verify {
            suite,
            seed,
            tol,
            max_poset,
            report,
        } => {
            let mut config = SuiteConfig::default();
            config.seed = seed.unwrap_or(config.seed);
            config.tol = tol.unwrap_or(config.tol);
            config.max_poset = max_poset.unwrap_or(config.max_poset);
            let r = run_suite(&suite, &config)?;
            for case in &r.cases {
                println!("{:<40} {:<30} checks={}", case.id, case.verdict.as_str(), case.checks);
            }
            let (pass, fail) = r.summary();
            println!("{}: {pass} ok, {fail} failed", r.suite);
            if let Some(path) = report {
                let mut text = serde_json::to_string_pretty(&r.to_json())?;
                text.push('\n');
                write(&path, &text)?;
            }
            if !r.passed() {
                return Ok(ExitCode::from(EXIT_COUNTEREXAMPLE));
            }
        }
        Command::Suites => {
            for name in SUITE_NAMES {
                println!("{name}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn load_lattice(path: &Path, index: Option<usize>) -> Result<FiniteLattice> {
    let v: Value = serde_json::from_str(&read(path)?)?;
    let entry = match (&v, index) {
        (Value::Array(entries), Some(i)) => entries
            .get(i)
            .and_then(|e| e.get("lattice"))
            .ok_or_else(|| Error::Argument(format!("corpus has no entry {i}")))?
            .clone(),
        (Value::Array(_), None) => {
            return Err(Error::Argument("a corpus file needs --index".into()));
        }
        (_, _) => v,
    };
    let j: LatticeJson = serde_json::from_value(entry)?;
    FiniteLattice::from_json(j)
}

/// Tuples from a JSON object (name → coordinates) or array (bound to
/// a, b, c, ... in order).
fn load_vectors(path: &Path) -> Result<(Vec<String>, Vec<ExactTuple>)> {
    let v: Value = serde_json::from_str(&read(path)?)?;
    let named: Vec<(String, &Value)> = match &v {
        Value::Object(map) => map.iter().map(|(k, x)| (k.clone(), x)).collect(),
        Value::Array(items) => items
            .iter()
            .enumerate()
            .map(|(i, x)| (latticemed::finite::var_name(i), x))
            .collect(),
        _ => return Err(Error::Format("vectors must be a JSON object or array".into())),
    };
    if named.is_empty() {
        return Err(Error::Format("no vectors given".into()));
    }
    let mut names = Vec::new();
    let mut tuples = Vec::new();
    for (name, x) in named {
        tuples.push(ExactTuple::from_json(x)?);
        names.push(name);
    }
    Ok((names, tuples))
}

fn eval(args: &EvalArgs) -> Result<String> {
    let parsed = parse_term(&args.expr)?;
    if let Some(path) = &args.lattice {
        let l = load_lattice(path, args.index)?;
        let mut binding = Vec::new();
        let pairs: Vec<(&str, &str)> = args
            .bind
            .as_deref()
            .unwrap_or("")
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|pair| {
                pair.split_once('=')
                    .map(|(a, b)| (a.trim(), b.trim()))
                    .ok_or_else(|| Error::Argument(format!("binding {pair:?} is not name=element")))
            })
            .collect::<Result<_>>()?;
        for var in &parsed.vars {
            let (_, elem) = pairs
                .iter()
                .find(|(name, _)| name == var)
                .ok_or_else(|| Error::Binding(var.clone()))?;
            binding.push(
                l.by_name(elem)
                    .ok_or_else(|| Error::Argument(format!("lattice has no element {elem:?}")))?,
            );
        }
        let value = parsed.term.eval(&l, &binding)?;
        return Ok(l.name(value).to_string());
    }
    let path = args.vectors.as_ref().expect("clap requires --vectors without --lattice");
    let (names, tuples) = load_vectors(path)?;
    let dim = latticemed::tuple::common_dim(&tuples)?;
    let binding = parsed
        .vars
        .iter()
        .map(|var| {
            names
                .iter()
                .position(|n| n == var)
                .map(|i| tuples[i].clone())
                .ok_or_else(|| Error::Binding(var.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(parsed.term.eval(&Pointwise::new(dim), &binding)?.to_string())
}
