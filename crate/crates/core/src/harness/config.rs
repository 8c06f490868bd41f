use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bench::{EnvId, ProblemKind};
use crate::error::{Error, Result};
use crate::ipg::{IpgConfig, KernelChoice};
use crate::moea::{AlgorithmId, DynamicConfig, MopsoParams, Nsga2Params, RmmedaParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TcaSettings {
    pub d: usize,
    pub mu: f64,
    pub kernel: KernelChoice,
}

impl Default for TcaSettings {
    fn default() -> Self {
        Self {
            d: 20,
            mu: 0.5,
            kernel: KernelChoice::GaussianMedian,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IpgSettings {
    pub n_s: usize,
    pub n_t_samples: usize,
    pub inner_budget: usize,
    pub max_front: usize,
    pub probes: usize,
    pub initial_step: f64,
}

impl Default for IpgSettings {
    fn default() -> Self {
        let d = IpgConfig::default();
        Self {
            n_s: d.n_s,
            n_t_samples: d.n_t_samples,
            inner_budget: d.inner_budget,
            max_front: d.max_front,
            probes: d.probes,
            initial_step: d.initial_step,
        }
    }
}

fn default_population() -> usize {
    200
}

fn default_generations() -> usize {
    50
}

fn default_seeds() -> Vec<u64> {
    (1..=5).collect()
}

fn default_epsilon() -> f64 {
    0.1
}

fn default_output() -> PathBuf {
    PathBuf::from("runs")
}

/// Everything needed to reproduce one experiment cell over a list of seeds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: String,
    pub algorithm: AlgorithmId,
    pub config: EnvId,
    #[serde(default = "default_population")]
    pub population: usize,
    #[serde(default = "default_generations")]
    pub generations: usize,
    /// Solve only the first this-many changes; all of them when absent.
    #[serde(default)]
    pub changes: Option<usize>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub tca: TcaSettings,
    #[serde(default)]
    pub ipg: IpgSettings,
    #[serde(default)]
    pub nsga2: Nsga2Params,
    #[serde(default)]
    pub mopso: MopsoParams,
    #[serde(default)]
    pub rmmeda: RmmedaParams,
    /// Recovery tolerance for React.
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    /// Points sampled from each true front; by objective count when absent.
    #[serde(default)]
    pub front_size: Option<usize>,
    #[serde(default = "default_output")]
    pub output_dir: PathBuf,
    /// Wall-clock limit per seed; an exceeded run is recorded as incomplete.
    #[serde(default)]
    pub timeout_secs: Option<f64>,
}

impl RunConfig {
    pub fn new(problem: &str, algorithm: AlgorithmId, config: EnvId) -> Self {
        Self {
            problem: problem.to_string(),
            algorithm,
            config,
            population: default_population(),
            generations: default_generations(),
            changes: None,
            seeds: default_seeds(),
            tca: TcaSettings::default(),
            ipg: IpgSettings::default(),
            nsga2: Nsga2Params::default(),
            mopso: MopsoParams::default(),
            rmmeda: RmmedaParams::default(),
            epsilon: default_epsilon(),
            front_size: None,
            output_dir: default_output(),
            timeout_secs: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let field = if path == "." { "<root>".to_string() } else { path };
            Error::config(field, e.into_inner().to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn problem_kind(&self) -> Result<ProblemKind> {
        self.problem.parse()
    }

    pub fn validate(&self) -> Result<()> {
        self.problem_kind()?;
        if self.population < 2 {
            return Err(Error::config("population", "must be at least 2"));
        }
        if self.generations == 0 {
            return Err(Error::config("generations", "must be at least 1"));
        }
        let available = self.config.config().time_model.changes();
        if let Some(c) = self.changes {
            if c == 0 || c > available {
                return Err(Error::config(
                    "changes",
                    format!("must lie in 1..={available}, got {c}"),
                ));
            }
        }
        if self.seeds.is_empty() {
            return Err(Error::config("seeds", "at least one seed is required"));
        }
        let mut sorted = self.seeds.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != self.seeds.len() {
            return Err(Error::config("seeds", "seeds must be distinct"));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::config("epsilon", "must lie in (0, 1)"));
        }
        if self.front_size.is_some_and(|k| k < 2) {
            return Err(Error::config("front_size", "must be at least 2"));
        }
        if self.timeout_secs.is_some_and(|s| s.is_nan() || s <= 0.0) {
            return Err(Error::config("timeout_secs", "must be positive"));
        }
        if self.algorithm.transfer {
            self.dynamic_config().ipg.validate()?;
        }
        Ok(())
    }

    pub fn dynamic_config(&self) -> DynamicConfig {
        DynamicConfig {
            population: self.population,
            generations: self.generations,
            changes: self.changes,
            ipg: IpgConfig {
                n_s: self.ipg.n_s,
                n_t_samples: self.ipg.n_t_samples,
                d: self.tca.d,
                mu: self.tca.mu,
                kernel: self.tca.kernel,
                inner_budget: self.ipg.inner_budget,
                target_pop_size: self.population,
                max_front: self.ipg.max_front,
                probes: self.ipg.probes,
                initial_step: self.ipg.initial_step,
            },
            nsga2: self.nsga2.clone(),
            mopso: self.mopso.clone(),
            rmmeda: self.rmmeda.clone(),
        }
    }
}

/// Reads and validates a JSON run configuration; unspecified fields take defaults.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    RunConfig::from_json(&text)
}
