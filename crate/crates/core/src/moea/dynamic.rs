use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::operators::evaluate_all;
use super::{mopso_run, nsga2_run, rmmeda_run, MopsoParams, Nsga2Params, ParetoArchive, RmmedaParams};
use crate::bench::{sample_decision_space, CountingProblem, DynamicProblem, TimeModel};
use crate::error::{Error, Result};
use crate::ipg::{tr_ipg, IpgConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaseAlgorithm {
    Nsga2,
    Mopso,
    Rmmeda,
}

impl BaseAlgorithm {
    pub fn name(self) -> &'static str {
        match self {
            BaseAlgorithm::Nsga2 => "nsga2",
            BaseAlgorithm::Mopso => "mopso",
            BaseAlgorithm::Rmmeda => "rmmeda",
        }
    }
}

/// An optimizer, optionally seeded by the transfer generator after each change.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgorithmId {
    pub base: BaseAlgorithm,
    pub transfer: bool,
}

impl AlgorithmId {
    pub const ALL: [AlgorithmId; 6] = [
        AlgorithmId::new(BaseAlgorithm::Nsga2, false),
        AlgorithmId::new(BaseAlgorithm::Nsga2, true),
        AlgorithmId::new(BaseAlgorithm::Mopso, false),
        AlgorithmId::new(BaseAlgorithm::Mopso, true),
        AlgorithmId::new(BaseAlgorithm::Rmmeda, false),
        AlgorithmId::new(BaseAlgorithm::Rmmeda, true),
    ];

    pub const fn new(base: BaseAlgorithm, transfer: bool) -> Self {
        Self { base, transfer }
    }

    /// The same optimizer with the transfer step switched off.
    pub fn baseline(self) -> Self {
        Self::new(self.base, false)
    }
}

impl fmt::Display for AlgorithmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.transfer {
            f.write_str("tr-")?;
        }
        f.write_str(self.base.name())
    }
}

impl FromStr for AlgorithmId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let (transfer, rest) = match lower.strip_prefix("tr-") {
            Some(rest) => (true, rest),
            None => (false, lower.as_str()),
        };
        let base =
            match rest {
                "nsga2" | "nsga-ii" => BaseAlgorithm::Nsga2,
                "mopso" => BaseAlgorithm::Mopso,
                "rmmeda" | "rm-meda" => BaseAlgorithm::Rmmeda,
                _ => return Err(Error::config(
                    "algorithm",
                    format!(
                        "unknown algorithm '{s}' (expected nsga2, mopso, rmmeda, optionally tr- prefixed)"
                    ),
                )),
            };
        Ok(Self { base, transfer })
    }
}

impl Serialize for AlgorithmId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for AlgorithmId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DynamicConfig {
    pub population: usize,
    pub generations: usize,
    /// Solve only the first this-many changes of the schedule.
    pub changes: Option<usize>,
    /// `target_pop_size` is overwritten with `population`.
    pub ipg: IpgConfig,
    pub nsga2: Nsga2Params,
    pub mopso: MopsoParams,
    pub rmmeda: RmmedaParams,
}

impl Default for DynamicConfig {
    fn default() -> Self {
        Self {
            population: 200,
            generations: 50,
            changes: None,
            ipg: IpgConfig::default(),
            nsga2: Nsga2Params::default(),
            mopso: MopsoParams::default(),
            rmmeda: RmmedaParams::default(),
        }
    }
}

/// Transfer diagnostics of one change.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferSummary {
    pub transferred: usize,
    pub random_fill: usize,
    pub mean_final_g: f64,
}

#[derive(Debug, Clone)]
pub struct ChangeOutcome {
    pub k: usize,
    pub t: f64,
    pub archive: ParetoArchive,
    /// Objective evaluations at this change's `t`.
    pub evaluations: usize,
    /// Evaluations at the previous `t` spent on transfer source samples.
    pub source_evaluations: usize,
    pub transfer: Option<TransferSummary>,
    pub wall_seconds: f64,
}

/// Solves each scheduled environment in turn. Change 0 and, without transfer, every
/// later change start from a uniform random population.
pub fn trdmoea_run<R: Rng + ?Sized>(
    problem: &dyn DynamicProblem,
    algo: AlgorithmId,
    time: &TimeModel,
    cfg: &DynamicConfig,
    rng: &mut R,
) -> Result<Vec<ChangeOutcome>> {
    trdmoea_run_with(problem, algo, time, cfg, rng, |_| true)
}

/// As [`trdmoea_run`], calling `proceed` after every change; returning `false` stops
/// the run early with the changes solved so far.
pub fn trdmoea_run_with<R, F>(
    problem: &dyn DynamicProblem,
    algo: AlgorithmId,
    time: &TimeModel,
    cfg: &DynamicConfig,
    rng: &mut R,
    mut proceed: F,
) -> Result<Vec<ChangeOutcome>>
where
    R: Rng + ?Sized,
    F: FnMut(&ChangeOutcome) -> bool,
{
    time.validate()?;
    if cfg.population < 2 {
        return Err(Error::config("population", "must be at least 2"));
    }
    let mut schedule = time.schedule();
    if let Some(c) = cfg.changes {
        if c == 0 || c > schedule.len() {
            return Err(Error::config(
                "changes",
                format!("must lie in 1..={}, got {c}", schedule.len()),
            ));
        }
        schedule.truncate(c);
    }
    let ipg_cfg = IpgConfig {
        target_pop_size: cfg.population,
        ..cfg.ipg.clone()
    };
    if algo.transfer {
        ipg_cfg.validate()?;
    }
    let counter = CountingProblem::new(problem, &schedule);
    let bounds = problem.bounds();

    let mut out: Vec<ChangeOutcome> = Vec::with_capacity(schedule.len());
    for (k, &t) in schedule.iter().enumerate() {
        let started = Instant::now();
        let prev_count = if k > 0 { counter.count_at(k - 1) } else { 0 };
        let mut transfer = None;
        let init = match out.last() {
            Some(prev) if algo.transfer => {
                let front = prev.archive.objectives();
                let seeded = tr_ipg(&counter, prev.t, t, &front, &ipg_cfg, rng)?;
                let r = &seeded.report;
                transfer = Some(TransferSummary {
                    transferred: r.transferred,
                    random_fill: r.random_fill,
                    mean_final_g: r.final_g.iter().sum::<f64>() / r.final_g.len() as f64,
                });
                seeded.population
            }
            _ => evaluate_all(&counter, t, sample_decision_space(bounds, cfg.population, rng))?,
        };
        let g = cfg.generations;
        let archive = match algo.base {
            BaseAlgorithm::Nsga2 => nsga2_run(&counter, t, init, g, &cfg.nsga2, rng)?,
            BaseAlgorithm::Mopso => mopso_run(&counter, t, init, g, &cfg.mopso, rng)?,
            BaseAlgorithm::Rmmeda => rmmeda_run(&counter, t, init, g, &cfg.rmmeda, rng)?,
        };
        let source_evaluations = if k > 0 {
            counter.count_at(k - 1) - prev_count
        } else {
            0
        };
        out.push(ChangeOutcome {
            k,
            t,
            archive,
            evaluations: counter.count_at(k),
            source_evaluations,
            transfer,
            wall_seconds: started.elapsed().as_secs_f64(),
        });
        if !proceed(out.last().expect("just pushed")) {
            break;
        }
    }
    Ok(out)
}
