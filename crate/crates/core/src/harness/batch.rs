use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use super::record::{run_seed, write_atomic, write_record, References};
use super::with_workers;
use crate::bench::{Benchmark, EnvId, ProblemKind};
use crate::error::{Error, Result};
use crate::moea::{AlgorithmId, BaseAlgorithm};

/// One `(problem, algorithm, config, seed)` run.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellKey {
    pub problem: ProblemKind,
    pub algorithm: AlgorithmId,
    pub config: EnvId,
    pub seed: u64,
}

impl fmt::Display for CellKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{}/{}/{}",
            self.problem, self.algorithm, self.config, self.seed
        )
    }
}

#[derive(Debug, Clone)]
pub struct BatchSpec {
    pub problems: Vec<ProblemKind>,
    pub algorithms: Vec<AlgorithmId>,
    pub configs: Vec<EnvId>,
    /// Source of every other setting, seeds included.
    pub template: RunConfig,
    /// Rerun cells already listed in the manifest.
    pub force: bool,
}

impl BatchSpec {
    /// All problems and configurations, each optimizer with and without transfer.
    pub fn full(template: RunConfig, bases: &[BaseAlgorithm]) -> Self {
        Self {
            problems: ProblemKind::ALL.to_vec(),
            algorithms: bases
                .iter()
                .flat_map(|&b| [AlgorithmId::new(b, false), AlgorithmId::new(b, true)])
                .collect(),
            configs: EnvId::ALL.to_vec(),
            template,
            force: false,
        }
    }

    pub fn cells(&self) -> Vec<CellKey> {
        let mut out = Vec::new();
        for &problem in &self.problems {
            for &algorithm in &self.algorithms {
                for &config in &self.configs {
                    for &seed in &self.template.seeds {
                        out.push(CellKey {
                            problem,
                            algorithm,
                            config,
                            seed,
                        });
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub completed: BTreeSet<String>,
}

pub const MANIFEST: &str = "manifest.json";

pub fn read_manifest(dir: &Path) -> Result<Manifest> {
    let path = dir.join(MANIFEST);
    match std::fs::read_to_string(&path) {
        Ok(text) => Ok(serde_json::from_str(&text)?),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(Manifest::default()),
        Err(e) => Err(Error::io(path, e)),
    }
}

#[derive(Debug, Clone, Default)]
pub struct BatchOutcome {
    pub completed: Vec<CellKey>,
    pub skipped: Vec<CellKey>,
    /// Stopped by the timeout; the partial record is still written.
    pub incomplete: Vec<CellKey>,
    pub failed: Vec<(CellKey, String)>,
}

impl BatchOutcome {
    pub fn all_complete(&self) -> bool {
        self.incomplete.is_empty() && self.failed.is_empty()
    }
}

/// Runs every cell not yet in the manifest, concurrently up to the worker limit.
pub fn run_batch(spec: &BatchSpec, out_dir: &Path) -> Result<BatchOutcome> {
    let manifest = read_manifest(out_dir)?;
    let mut outcome = BatchOutcome::default();
    let mut todo = Vec::new();
    for cell in spec.cells() {
        if !spec.force && manifest.completed.contains(&cell.to_string()) {
            outcome.skipped.push(cell);
        } else {
            todo.push(cell);
        }
    }

    let mut refs: BTreeMap<(ProblemKind, EnvId), References> = BTreeMap::new();
    for cell in &todo {
        if let std::collections::btree_map::Entry::Vacant(slot) = refs.entry((cell.problem, cell.config)) {
            let problem = Benchmark::new(cell.problem);
            slot.insert(References::build(
                &problem,
                cell.config,
                spec.template.front_size,
            )?);
        }
    }

    let manifest = Mutex::new(manifest);
    let results: Vec<(CellKey, Result<bool>)> = with_workers(|| {
        todo.par_iter()
            .map(|cell| {
                let run = || -> Result<bool> {
                    let mut cfg = spec.template.clone();
                    cfg.problem = cell.problem.name().to_string();
                    cfg.algorithm = cell.algorithm;
                    cfg.config = cell.config;
                    cfg.seeds = vec![cell.seed];
                    let record = run_seed(&cfg, cell.seed, &refs[&(cell.problem, cell.config)])?;
                    write_record(out_dir, &record)?;
                    if record.payload.complete {
                        let mut m = manifest.lock().expect("manifest lock");
                        m.completed.insert(cell.to_string());
                        write_atomic(&out_dir.join(MANIFEST), &serde_json::to_vec_pretty(&*m)?)?;
                    }
                    Ok(record.payload.complete)
                };
                (cell.clone(), run())
            })
            .collect()
    })?;
    for (cell, r) in results {
        match r {
            Ok(true) => outcome.completed.push(cell),
            Ok(false) => outcome.incomplete.push(cell),
            Err(e) => outcome.failed.push((cell, e.to_string())),
        }
    }
    Ok(outcome)
}
