//! Experiment orchestration: configuration, seeded runs, persisted records, reports.

mod batch;
mod config;
mod record;
mod report;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

pub use batch::{read_manifest, run_batch, BatchOutcome, BatchSpec, CellKey, Manifest, MANIFEST};
pub use config::{load_config, IpgSettings, RunConfig, TcaSettings};
pub use record::{
    all_schedule_times, load_records, read_record, run_seed, write_atomic, write_record, ChangeRecord,
    References, RunPayload, RunRecord, RunTiming, VERSION,
};
pub use report::{
    build_report, emit_report, format_sci, MigdRow, Report, ReportFormat, RocRow, RunRow, SummaryRow,
};

use crate::bench::{Benchmark, DynamicProblem};
use crate::error::{Error, Result};

/// Environment variable capping the number of worker threads.
pub const WORKERS_ENV: &str = "TRDMOEA_WORKERS";

/// Runs `f` on a pool sized by [`WORKERS_ENV`], or on the global pool when unset.
pub fn with_workers<T: Send>(f: impl FnOnce() -> T + Send) -> Result<T> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => {
            let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
                Error::config(WORKERS_ENV, format!("expected a positive integer, got `{v}`"))
            })?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Internal(e.to_string()))?;
            Ok(pool.install(f))
        }
        Err(_) => Ok(f()),
    }
}

/// Runs every seed of `cfg` (concurrently) and writes one JSON record per seed into
/// `cfg.output_dir`. Records come back in seed order.
pub fn run_experiment(cfg: &RunConfig) -> Result<Vec<RunRecord>> {
    cfg.validate()?;
    let problem = Benchmark::new(cfg.problem_kind()?);
    let refs = References::build(&problem, cfg.config, cfg.front_size)?;
    let records: Vec<RunRecord> = with_workers(|| {
        cfg.seeds
            .par_iter()
            .map(|&seed| run_seed(cfg, seed, &refs))
            .collect::<Result<Vec<_>>>()
    })??;
    for r in &records {
        write_record(&cfg.output_dir, r)?;
    }
    Ok(records)
}

/// One CSV per change with the archive and the true front at that change, tagged in a
/// trailing `source` column.
pub fn emit_pof_snapshots(record: &RunRecord, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let p = &record.payload;
    let problem = Benchmark::new(p.config.problem_kind()?);
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let stem = record
        .file_name()
        .trim_end_matches(".json")
        .trim_start_matches("run_")
        .to_string();
    let mut paths = Vec::with_capacity(p.changes.len());
    for c in &p.changes {
        let truth = problem.true_pof(c.t, p.front_size)?;
        let mut body = Vec::new();
        let header: Vec<String> = (1..=p.objectives).map(|i| format!("f{i}")).collect();
        let io = |e| Error::io(out_dir, e);
        writeln!(body, "{},source", header.join(",")).map_err(io)?;
        for (tag, set) in [("archive", &c.archive), ("true", &truth)] {
            for v in set.iter() {
                let row: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                writeln!(body, "{},{tag}", row.join(",")).map_err(io)?;
            }
        }
        let path = out_dir.join(format!("{stem}_change{:02}.csv", c.k));
        write_atomic(&path, &body)?;
        paths.push(path);
    }
    Ok(paths)
}
