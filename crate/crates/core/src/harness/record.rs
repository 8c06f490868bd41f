use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use crate::bench::{default_front_size, Benchmark, DynamicProblem, EnvId, ObjectiveVector};
use crate::error::{Error, Result};
use crate::metrics::{accuracy, hv_reference, hypervolume, igd, migd, mreact, react_series, ReactValue};
use crate::moea::{trdmoea_run_with, TransferSummary};

pub const VERSION: &str = concat!("trdmoea ", env!("CARGO_PKG_VERSION"));

/// True fronts along one schedule plus the problem's fixed hypervolume reference.
#[derive(Debug, Clone)]
pub struct References {
    pub front_size: usize,
    pub times: Vec<f64>,
    pub fronts: Vec<Vec<ObjectiveVector>>,
    pub hv_reference: ObjectiveVector,
}

/// Every change time of every environment configuration, ascending.
pub fn all_schedule_times() -> Vec<f64> {
    let mut set = BTreeSet::new();
    for id in EnvId::ALL {
        for t in id.config().time_model.schedule() {
            set.insert(t.to_bits());
        }
    }
    let mut times: Vec<f64> = set.into_iter().map(f64::from_bits).collect();
    times.sort_by(f64::total_cmp);
    times
}

impl References {
    /// The hypervolume reference covers the true fronts at all scheduled times of all
    /// configurations, so it is the same for every run on `problem`.
    pub fn build(problem: &dyn DynamicProblem, env: EnvId, front_size: Option<usize>) -> Result<Self> {
        let front_size = front_size.unwrap_or_else(|| default_front_size(problem.objectives()));
        let times = env.config().time_model.schedule();
        let fronts = times
            .iter()
            .map(|&t| problem.true_pof(t, front_size))
            .collect::<Result<_>>()?;
        let hv_reference = hv_reference(problem, &all_schedule_times(), front_size)?;
        Ok(Self {
            front_size,
            times,
            fronts,
            hv_reference,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChangeRecord {
    pub k: usize,
    pub t: f64,
    pub archive: Vec<ObjectiveVector>,
    pub igd: f64,
    pub hv: f64,
    pub evaluations: usize,
    pub source_evaluations: usize,
    pub transfer: Option<TransferSummary>,
}

/// The deterministic part of a run record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunPayload {
    pub version: String,
    /// The effective configuration with `seeds` narrowed to this run's seed.
    pub config: RunConfig,
    pub seed: u64,
    pub objectives: usize,
    pub front_size: usize,
    pub hv_reference: ObjectiveVector,
    pub epsilon: f64,
    /// False when the run stopped early on its timeout.
    pub complete: bool,
    pub changes: Vec<ChangeRecord>,
    pub migd: Option<f64>,
    pub accuracy: Vec<f64>,
    pub react: Vec<ReactValue>,
    pub mreact: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunTiming {
    pub started_unix_secs: f64,
    pub change_seconds: Vec<f64>,
    pub total_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub payload: RunPayload,
    pub timing: RunTiming,
}

impl RunRecord {
    pub fn payload_bytes(&self) -> Result<Vec<u8>> {
        Ok(serde_json::to_vec(&self.payload)?)
    }

    pub fn file_name(&self) -> String {
        let c = &self.payload.config;
        format!(
            "run_{}_{}_{}_s{}.json",
            c.problem, c.algorithm, c.config, self.payload.seed
        )
    }
}

impl RunPayload {
    /// Recomputes every derived number from the stored archives.
    pub fn rescored(&self) -> Result<RunPayload> {
        let problem = Benchmark::new(self.config.problem_kind()?);
        let mut out = self.clone();
        for c in out.changes.iter_mut() {
            let front = problem.true_pof(c.t, self.front_size)?;
            c.igd = igd(&front, &c.archive)?;
            c.hv = hypervolume(&c.archive, &self.hv_reference)?;
        }
        fill_summary(&mut out)?;
        Ok(out)
    }
}

fn fill_summary(p: &mut RunPayload) -> Result<()> {
    let igds: Vec<f64> = p.changes.iter().map(|c| c.igd).collect();
    let hvs: Vec<f64> = p.changes.iter().map(|c| c.hv).collect();
    p.migd = if igds.is_empty() { None } else { Some(migd(&igds)?) };
    p.accuracy = accuracy(&hvs).unwrap_or_default();
    p.react = if p.accuracy.len() >= 2 {
        react_series(&p.accuracy, p.epsilon)?
    } else {
        Vec::new()
    };
    p.mreact = if p.react.is_empty() {
        None
    } else {
        Some(mreact(&p.react)?)
    };
    Ok(())
}

/// Runs one seed of `cfg` against precomputed references.
pub fn run_seed(cfg: &RunConfig, seed: u64, refs: &References) -> Result<RunRecord> {
    cfg.validate()?;
    let problem = Benchmark::new(cfg.problem_kind()?);
    let time = cfg.config.config().time_model;
    let dynamic = cfg.dynamic_config();
    let started_unix_secs = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0);
    let clock = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut timed_out = false;
    let outcomes = trdmoea_run_with(&problem, cfg.algorithm, &time, &dynamic, &mut rng, |_| {
        timed_out = cfg
            .timeout_secs
            .is_some_and(|limit| clock.elapsed().as_secs_f64() > limit);
        !timed_out
    })?;
    let expected = cfg.changes.unwrap_or(time.changes());
    let complete = outcomes.len() == expected;

    let mut changes = Vec::with_capacity(outcomes.len());
    let mut change_seconds = Vec::with_capacity(outcomes.len());
    for o in outcomes {
        let archive = o.archive.objectives();
        let front = &refs.fronts[o.k];
        changes.push(ChangeRecord {
            k: o.k,
            t: o.t,
            igd: igd(front, &archive)?,
            hv: hypervolume(&archive, &refs.hv_reference)?,
            archive,
            evaluations: o.evaluations,
            source_evaluations: o.source_evaluations,
            transfer: o.transfer,
        });
        change_seconds.push(o.wall_seconds);
    }
    let mut config = cfg.clone();
    config.seeds = vec![seed];
    let mut payload = RunPayload {
        version: VERSION.to_string(),
        config,
        seed,
        objectives: problem.objectives(),
        front_size: refs.front_size,
        hv_reference: refs.hv_reference.clone(),
        epsilon: cfg.epsilon,
        complete,
        changes,
        migd: None,
        accuracy: Vec::new(),
        react: Vec::new(),
        mreact: None,
    };
    fill_summary(&mut payload)?;
    Ok(RunRecord {
        payload,
        timing: RunTiming {
            started_unix_secs,
            change_seconds,
            total_seconds: clock.elapsed().as_secs_f64(),
        },
    })
}

/// Writes through a temporary file and a rename so readers never see partial JSON.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

pub fn write_record(dir: &Path, record: &RunRecord) -> Result<PathBuf> {
    let path = dir.join(record.file_name());
    write_atomic(&path, &serde_json::to_vec_pretty(record)?)?;
    Ok(path)
}

pub fn read_record(path: &Path) -> Result<RunRecord> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

/// Loads every `run_*.json` under `dir`, sorted by file name.
pub fn load_records(dir: &Path) -> Result<Vec<RunRecord>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.file_name()
                .and_then(|n| n.to_str())
                .is_some_and(|n| n.starts_with("run_") && n.ends_with(".json"))
        })
        .collect();
    paths.sort();
    paths.iter().map(|p| read_record(p)).collect()
}
