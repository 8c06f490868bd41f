use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use trdmoea::bench::EnvId;
use trdmoea::harness::{
    emit_pof_snapshots, emit_report, load_config, load_records, read_record, run_batch, run_experiment,
    BatchSpec, ReportFormat, RunConfig,
};
use trdmoea::moea::{AlgorithmId, BaseAlgorithm};
use trdmoea::{Error, Result};

#[derive(Parser)]
#[command(
    name = "trdmoea",
    version,
    about = "Dynamic multiobjective optimization with transfer-seeded restarts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one problem/algorithm/configuration cell over a list of seeds.
    Run(RunArgs),
    /// Run a whole experiment matrix, skipping cells already completed.
    Batch(BatchArgs),
    /// Aggregate run records into MIGD, ROC, DMIGD and DMReact tables.
    Report(ReportArgs),
    /// Write per-change archive and true-front CSVs for one run record.
    Snapshots(SnapshotArgs),
}

#[derive(Args)]
struct Overrides {
    #[arg(long)]
    population: Option<usize>,
    #[arg(long)]
    generations: Option<usize>,
    /// Solve only the first this-many changes.
    #[arg(long)]
    changes: Option<usize>,
    /// Seeds as `a..b` (inclusive) or a comma list.
    #[arg(long, value_parser = parse_seeds)]
    seeds: Option<Seeds>,
    /// Per-seed wall-clock limit in seconds.
    #[arg(long)]
    timeout: Option<f64>,
}

impl Overrides {
    fn apply(&self, cfg: &mut RunConfig) {
        if let Some(v) = self.population {
            cfg.population = v;
        }
        if let Some(v) = self.generations {
            cfg.generations = v;
        }
        if self.changes.is_some() {
            cfg.changes = self.changes;
        }
        if let Some(v) = &self.seeds {
            cfg.seeds = v.0.clone();
        }
        if self.timeout.is_some() {
            cfg.timeout_secs = self.timeout;
        }
    }
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, required_unless_present = "config_file")]
    problem: Option<String>,
    #[arg(long, value_parser = parse_algo, required_unless_present = "config_file")]
    algo: Option<AlgorithmId>,
    #[arg(long, value_parser = parse_env, required_unless_present = "config_file")]
    config: Option<EnvId>,
    /// JSON run configuration; command line flags take precedence.
    #[arg(long)]
    config_file: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Clone, Copy, ValueEnum)]
enum Matrix {
    /// Every problem and configuration, each optimizer with and without transfer.
    Full,
}

#[derive(Args)]
struct BatchArgs {
    #[arg(long, value_enum, default_value = "full")]
    matrix: Matrix,
    /// Base optimizers to include.
    #[arg(long, value_delimiter = ',', default_value = "nsga2")]
    algos: Vec<String>,
    #[arg(long)]
    out: PathBuf,
    /// Rerun cells the manifest already lists.
    #[arg(long)]
    force: bool,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value = "csv", value_parser = parse_format)]
    format: ReportFormat,
    /// Defaults to the input directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SnapshotArgs {
    #[arg(long)]
    run: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone)]
struct Seeds(Vec<u64>);

fn parse_seeds(s: &str) -> std::result::Result<Seeds, String> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once("..") {
        let a: u64 = a
            .trim()
            .parse()
            .map_err(|e| format!("bad seed range start: {e}"))?;
        let b: u64 = b
            .trim()
            .trim_start_matches('=')
            .parse()
            .map_err(|e| format!("bad seed range end: {e}"))?;
        if a > b {
            return Err(format!("empty seed range {s}"));
        }
        return Ok(Seeds((a..=b).collect()));
    }
    s.split(',')
        .map(|p| p.trim().parse().map_err(|e| format!("bad seed `{p}`: {e}")))
        .collect::<std::result::Result<_, _>>()
        .map(Seeds)
}

fn parse_algo(s: &str) -> std::result::Result<AlgorithmId, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_env(s: &str) -> std::result::Result<EnvId, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_format(s: &str) -> std::result::Result<ReportFormat, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn run(args: RunArgs) -> Result<bool> {
    let mut cfg = match &args.config_file {
        Some(path) => load_config(path)?,
        None => RunConfig::new(
            args.problem.as_deref().expect("required by clap"),
            args.algo.expect("required by clap"),
            args.config.expect("required by clap"),
        ),
    };
    if let Some(p) = args.problem {
        cfg.problem = p;
    }
    if let Some(a) = args.algo {
        cfg.algorithm = a;
    }
    if let Some(c) = args.config {
        cfg.config = c;
    }
    if let Some(out) = args.out {
        cfg.output_dir = out;
    }
    args.overrides.apply(&mut cfg);
    let records = run_experiment(&cfg)?;
    let mut complete = true;
    for r in &records {
        let p = &r.payload;
        complete &= p.complete;
        println!(
            "{} seed {}: MIGD {} MReact {} ({} changes, {:.1} s){}",
            r.file_name(),
            p.seed,
            p.migd.map_or("-".into(), |v| format!("{v:.6}")),
            p.mreact.map_or("-".into(), |v| format!("{v:.4}")),
            p.changes.len(),
            r.timing.total_seconds,
            if p.complete { "" } else { " INCOMPLETE" }
        );
    }
    Ok(complete)
}

fn batch(args: BatchArgs) -> Result<bool> {
    let bases = args
        .algos
        .iter()
        .map(|a| {
            let id: AlgorithmId = a.parse()?;
            if id.transfer {
                return Err(Error::config(
                    "algos",
                    format!("list base optimizers only, got `{a}`"),
                ));
            }
            Ok(id.base)
        })
        .collect::<Result<Vec<BaseAlgorithm>>>()?;
    let mut template = RunConfig::new("FDA4", AlgorithmId::new(BaseAlgorithm::Nsga2, false), EnvId::C1);
    template.output_dir = args.out.clone();
    args.overrides.apply(&mut template);
    let mut spec = match args.matrix {
        Matrix::Full => BatchSpec::full(template, &bases),
    };
    spec.force = args.force;
    let outcome = run_batch(&spec, &args.out)?;
    println!(
        "completed {}, skipped {}, incomplete {}, failed {}",
        outcome.completed.len(),
        outcome.skipped.len(),
        outcome.incomplete.len(),
        outcome.failed.len()
    );
    for c in &outcome.incomplete {
        eprintln!("incomplete: {c}");
    }
    for (c, e) in &outcome.failed {
        eprintln!("failed: {c}: {e}");
    }
    Ok(outcome.all_complete())
}

fn report(args: ReportArgs) -> Result<bool> {
    let payloads: Vec<_> = load_records(&args.input)?
        .into_iter()
        .map(|r| r.payload)
        .collect();
    let out = args.out.unwrap_or_else(|| args.input.clone());
    let (report, files) = emit_report(&payloads, args.format, &out)?;
    for f in files {
        println!("{}", f.display());
    }
    for g in &report.gaps {
        eprintln!("gap: {g}");
    }
    Ok(true)
}

fn snapshots(args: SnapshotArgs) -> Result<bool> {
    let record = read_record(&args.run)?;
    let files = emit_pof_snapshots(&record, &args.out)?;
    println!("wrote {} snapshot files to {}", files.len(), args.out.display());
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => run(a),
        Command::Batch(a) => batch(a),
        Command::Report(a) => report(a),
        Command::Snapshots(a) => snapshots(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
