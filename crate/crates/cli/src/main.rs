mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use urb_core::builder::{build, BuilderConfig, BuilderTranscript, Mode, VerifyPolicy};
use urb_core::intset::SumBudget;
use urb_core::sidon::{bose_construction, greedy_sidon, is_modular_sidon, is_sidon, max_sidon_exact};
use urb_core::split::{split_construction, verify_split};
use urb_core::verify::{growth_report, verify_transcript};
use urb_core::{Epsilon, Error, IntegerSet};

#[derive(Parser)]
#[command(name = "urb", version, about = "Unique representation bases: build, verify and inspect")]
struct Cli {
    /// Worker threads for parallel checks (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the construction and write its transcript.
    Build(BuildArgs),
    /// Replay a transcript and re-check every stage.
    Verify(VerifyArgs),
    /// Report the counting-function checkpoints of a transcript.
    Growth(GrowthArgs),
    #[command(subcommand)]
    Sidon(SidonCommand),
    /// Largest Sidon subset of {1, ..., n}.
    F2(F2Args),
}

#[derive(Args)]
struct BuildArgs {
    /// Epsilon as num/den.
    #[arg(long)]
    epsilon: Epsilon,
    #[arg(long, default_value_t = 1)]
    rounds: u64,
    #[arg(long, value_enum, default_value_t = ModeArg::Paper)]
    mode: ModeArg,
    /// Prime used for every injection in toy mode.
    #[arg(long = "force-p")]
    force_p: Option<u64>,
    /// Output file (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Gzip the transcript.
    #[arg(long)]
    gzip: bool,
    /// Seed for sampled unique-sums checks on sets over the pair budget.
    #[arg(long)]
    sample_seed: Option<u64>,
    /// Targets per sampled check.
    #[arg(long, default_value_t = 1_000_000)]
    sample: u64,
    /// Pair budget for exhaustive checks.
    #[arg(long, default_value_t = SumBudget::DEFAULT_MAX_PAIRS)]
    max_pairs: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Paper,
    Toy,
}

#[derive(Args)]
struct VerifyArgs {
    file: PathBuf,
    /// Check every set exhaustively, whatever its size.
    #[arg(long, conflicts_with = "sample")]
    exhaustive: bool,
    /// Targets per sampled check for sets over the pair budget.
    #[arg(long)]
    sample: Option<u64>,
    #[arg(long)]
    sample_seed: Option<u64>,
    #[arg(long, default_value_t = SumBudget::DEFAULT_MAX_PAIRS)]
    max_pairs: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct GrowthArgs {
    file: PathBuf,
    #[arg(long, conflicts_with = "json")]
    csv: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum SidonCommand {
    /// Bose's modular Sidon set for a prime p.
    Bose {
        #[arg(short = 'p')]
        p: u64,
        #[arg(long)]
        json: bool,
    },
    /// The two-block integer Sidon set derived from the Bose set.
    Lemma1 {
        #[arg(short = 'p')]
        p: u64,
        #[arg(long)]
        epsilon: Epsilon,
    },
    /// Check whether a set of integers is Sidon.
    Check {
        /// JSON array of decimal strings, or whitespace-separated integers.
        file: PathBuf,
        #[arg(long, default_value_t = SumBudget::DEFAULT_MAX_PAIRS)]
        max_pairs: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct F2Args {
    #[arg(long)]
    n: u64,
    #[arg(long, value_enum, default_value_t = Method::Exact)]
    method: Method,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Exact,
    Greedy,
}

/// Failures, split by exit code.
enum Failure {
    /// Bad input or configuration: exit 2.
    Usage(String),
    /// A check failed or the run broke: exit 1.
    Violation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvariantViolation { .. } | Error::ResourceLimit { .. } => Failure::Violation(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Violation(format!("{e:#}"))
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("urb: {e}");
            return ExitCode::from(2);
        }
    }
    let outcome = match cli.command {
        Command::Build(a) => run_build(a),
        Command::Verify(a) => run_verify(a),
        Command::Growth(a) => run_growth(a),
        Command::Sidon(c) => run_sidon(c),
        Command::F2(a) => run_f2(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("urb: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Violation(msg)) => {
            eprintln!("urb: {msg}");
            ExitCode::from(1)
        }
    }
}

fn json_line<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string(value).expect("output types serialize"));
}

fn run_build(a: BuildArgs) -> Outcome {
    let mode = match a.mode {
        ModeArg::Paper => Mode::Paper,
        ModeArg::Toy => Mode::Toy,
    };
    let config = BuilderConfig {
        epsilon: a.epsilon,
        rounds: a.rounds,
        mode,
        forced_p: a.force_p,
        verification: VerifyPolicy {
            budget: SumBudget::with_max_pairs(a.max_pairs),
            sample_targets: a.sample,
            sample_seed: a.sample_seed,
        },
    };
    config.validate()?;
    let t = build(&config)?;
    let json = t.to_json();
    match &a.out {
        Some(path) => io::write_output(path, json.as_bytes(), a.gzip)?,
        None if a.gzip => return Err(Failure::Usage("--gzip needs --out".into())),
        None => println!("{json}"),
    }
    if let Some(cp) = t.checkpoints.last() {
        eprintln!(
            "built {} round(s); final set has {} elements; A(-x, x) = {} at x = {} (ratio {})",
            t.stages.len(),
            t.final_set.len(),
            cp.count,
            cp.x,
            cp.ratio_decimal
        );
    }
    Ok(true)
}

fn read_transcript(path: &PathBuf) -> Result<BuilderTranscript, Failure> {
    let text = io::read_input(path)?;
    Ok(BuilderTranscript::from_json(&text)?)
}

fn run_verify(a: VerifyArgs) -> Outcome {
    if a.sample.is_some() && a.sample_seed.is_none() {
        return Err(Failure::Usage("--sample needs --sample-seed".into()));
    }
    let t = read_transcript(&a.file)?;
    let policy = VerifyPolicy {
        budget: if a.exhaustive {
            SumBudget::unlimited()
        } else {
            SumBudget::with_max_pairs(a.max_pairs)
        },
        sample_targets: a.sample.unwrap_or(VerifyPolicy::default().sample_targets),
        sample_seed: if a.exhaustive { None } else { a.sample_seed },
    };
    let report = verify_transcript(&t, &policy)?;
    if a.json {
        json_line(&report);
    } else {
        for c in &report.sum_checks {
            println!("stage {}: {} unique sums ({})", c.stage, c.set, serde_json::to_string(&c.mode).expect("serializes"));
        }
        for i in &report.issues {
            println!("{i}");
        }
        let verdict = if report.ok() { "ok" } else { "FAILED" };
        println!("{verdict}: {} stage(s), {} issue(s)", report.stages, report.issues.len());
    }
    Ok(report.ok())
}

fn run_growth(a: GrowthArgs) -> Outcome {
    let t = read_transcript(&a.file)?;
    let g = growth_report(&t);
    if a.csv {
        print!("{}", g.to_csv());
    } else if a.json {
        json_line(&g);
    } else {
        println!("epsilon = {}", g.epsilon);
        for c in &g.checkpoints {
            let claim = if c.bound_claimed { "" } else { " (bound not claimed)" };
            let verdict = if c.pass { "pass" } else { "below" };
            println!("h = {}: x = {}, A(-x, x) = {}, ratio = {} {verdict}{claim}", c.h, c.x, c.count, c.ratio_decimal);
        }
        if let Some(b) = g.best_checkpoint() {
            println!("best ratio {} at x = {}", b.ratio_decimal, b.x);
        }
    }
    Ok(true)
}

#[derive(Serialize)]
struct BoseOut {
    p: u64,
    modulus: u64,
    elements: IntegerSet,
    verified: bool,
}

#[derive(Serialize)]
struct Lemma1Out {
    p: u64,
    epsilon: Epsilon,
    l: usize,
    y: usize,
    elements: IntegerSet,
    size_bound_holds: bool,
}

#[derive(Serialize)]
struct CheckOut {
    size: usize,
    sidon: bool,
    collision: Option<urb_core::intset::Collision>,
}

fn run_sidon(c: SidonCommand) -> Outcome {
    match c {
        SidonCommand::Bose { p, json } => {
            let s = bose_construction(p)?;
            let verified = is_modular_sidon(&s.elements, s.modulus).is_sidon();
            let out = BoseOut {
                p,
                modulus: s.modulus,
                elements: s.to_integer_set(),
                verified,
            };
            if json {
                json_line(&out);
            } else {
                println!("p = {p}, modulus = {}: {}", out.modulus, out.elements);
            }
            Ok(verified)
        }
        SidonCommand::Lemma1 { p, epsilon } => {
            let r = split_construction(&bose_construction(p)?, epsilon);
            let v = verify_split(&r, &SumBudget::default());
            json_line(&Lemma1Out {
                p,
                epsilon,
                l: r.l_index,
                y: r.y_index,
                size_bound_holds: v.size_bound_holds,
                elements: r.script_s,
            });
            Ok(v.invariants_ok())
        }
        SidonCommand::Check { file, max_pairs, json } => {
            let set = io::parse_set(&io::read_input(&file)?)?;
            let v = is_sidon(&set, &SumBudget::with_max_pairs(max_pairs))?;
            let ok = v.is_unique();
            if json {
                json_line(&CheckOut {
                    size: set.len(),
                    sidon: ok,
                    collision: v.collision().cloned(),
                });
            } else {
                match v.collision() {
                    None => println!("sidon: {} elements", set.len()),
                    Some(c) => println!("not sidon: {c}"),
                }
            }
            Ok(ok)
        }
    }
}

#[derive(Serialize)]
struct F2Out {
    n: u64,
    size: usize,
    witness: IntegerSet,
}

fn run_f2(a: F2Args) -> Outcome {
    let (size, witness) = match a.method {
        Method::Exact => {
            let e = max_sidon_exact(a.n)?;
            (e.size, e.witness)
        }
        Method::Greedy => {
            let w = greedy_sidon(a.n);
            (w.len(), w)
        }
    };
    json_line(&F2Out { n: a.n, size, witness });
    Ok(true)
}
