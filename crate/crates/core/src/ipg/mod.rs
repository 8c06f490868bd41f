//! Transfer-learning initial population generator.
//!
//! Objective vectors sampled before and after a change are embedded with TCA. Each
//! member of the previous front is mapped into the latent space and a decision vector
//! whose new objectives land closest to that latent point is searched for.

mod search;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use search::{pattern_search, SearchResult};

use crate::bench::{
    sample_decision_space, sample_point, Bounds, DecisionVector, DynamicProblem, ObjectiveVector,
};
use crate::error::{Error, Result};
use crate::moea::Individual;
use crate::tca::{median_bandwidth, tca_fit, KernelSpec, TcaModel};

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KernelChoice {
    /// Gaussian with the median pairwise distance of the sample bank as bandwidth.
    #[default]
    GaussianMedian,
    Gaussian {
        sigma: f64,
    },
    Linear,
}

impl KernelChoice {
    pub fn resolve(&self, bank: &[ObjectiveVector]) -> Result<KernelSpec> {
        match *self {
            KernelChoice::GaussianMedian => KernelSpec::gaussian(median_bandwidth(bank)?),
            KernelChoice::Gaussian { sigma } => KernelSpec::gaussian(sigma),
            KernelChoice::Linear => Ok(KernelSpec::Linear),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IpgConfig {
    pub n_s: usize,
    pub n_t_samples: usize,
    pub d: usize,
    pub mu: f64,
    pub kernel: KernelChoice,
    pub inner_budget: usize,
    pub target_pop_size: usize,
    /// Larger previous fronts are subsampled to this many points.
    pub max_front: usize,
    /// Uniform probes evaluated to pick the inner search start.
    pub probes: usize,
    /// Initial pattern step as a fraction of each box width.
    pub initial_step: f64,
}

impl Default for IpgConfig {
    fn default() -> Self {
        Self {
            n_s: 100,
            n_t_samples: 100,
            d: 20,
            mu: 0.5,
            kernel: KernelChoice::GaussianMedian,
            inner_budget: 500,
            target_pop_size: 200,
            max_front: 500,
            probes: 8,
            initial_step: 0.25,
        }
    }
}

impl IpgConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_s < 2 || self.n_t_samples < 2 {
            return Err(Error::config("ipg.n_s", "sample counts must be at least 2"));
        }
        if self.d == 0 || self.d > self.n_s + self.n_t_samples {
            return Err(Error::config(
                "ipg.d",
                format!(
                    "latent dimension {} not in 1..={}",
                    self.d,
                    self.n_s + self.n_t_samples
                ),
            ));
        }
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return Err(Error::config("ipg.mu", "must be positive"));
        }
        if self.inner_budget == 0 {
            return Err(Error::config("ipg.inner_budget", "must be at least 1"));
        }
        if self.target_pop_size == 0 {
            return Err(Error::config("ipg.target_pop_size", "must be at least 1"));
        }
        if self.max_front == 0 {
            return Err(Error::config("ipg.max_front", "must be at least 1"));
        }
        if !(self.initial_step > 0.0 && self.initial_step <= 1.0) {
            return Err(Error::config("ipg.initial_step", "must lie in (0, 1]"));
        }
        Ok(())
    }
}

/// One latent point per previous-front member, in the same order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatentTargetSet {
    pub targets: Vec<Vec<f64>>,
}

impl LatentTargetSet {
    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }
}

pub fn build_latent_targets(model: &TcaModel, pof: &[ObjectiveVector]) -> Result<LatentTargetSet> {
    let targets = pof.iter().map(|p| model.map(p)).collect::<Result<_>>()?;
    Ok(LatentTargetSet { targets })
}

#[derive(Debug, Clone)]
pub struct InnerResult {
    pub x: DecisionVector,
    pub f: ObjectiveVector,
    /// Squared latent distance at `x`.
    pub g: f64,
    pub evaluations: usize,
    pub history: Vec<f64>,
}

/// Minimizes `|phi(F(x, t)) - l|^2` over the box with at most `budget` evaluations.
/// Starts from `start` when given, otherwise from the best of `probes` uniform points.
#[allow(clippy::too_many_arguments)]
pub fn inner_minimize<R: Rng + ?Sized>(
    problem: &dyn DynamicProblem,
    t: f64,
    model: &TcaModel,
    l: &[f64],
    budget: usize,
    probes: usize,
    initial_step: f64,
    start: Option<&DecisionVector>,
    rng: &mut R,
) -> Result<InnerResult> {
    if budget == 0 {
        return Err(Error::arg("inner budget must be at least 1"));
    }
    if l.len() != model.latent_dim() {
        return Err(Error::arg(format!(
            "latent target has length {}, model has d = {}",
            l.len(),
            model.latent_dim()
        )));
    }
    if problem.objectives() != model.input_dim() {
        return Err(Error::arg(
            "model was fitted on objective vectors of another length",
        ));
    }
    let bounds: &Bounds = problem.bounds();
    let mut mapper = model.mapper();
    let mut g = |x: &[f64]| -> Result<(f64, ObjectiveVector)> {
        let f = problem.evaluate(&DecisionVector(x.to_vec()), t)?;
        let z = mapper.map(&f);
        let v = z.iter().zip(l).map(|(a, b)| (a - b) * (a - b)).sum();
        Ok((v, f))
    };

    let mut history = Vec::new();
    let mut best: Option<(Vec<f64>, f64, ObjectiveVector)> = None;
    let candidates: Vec<DecisionVector> = match start {
        Some(x0) => vec![x0.clone()],
        None => sample_decision_space(bounds, probes.clamp(1, budget), rng),
    };
    for x in candidates {
        let (v, f) = g(&x)?;
        if best.as_ref().is_none_or(|b| v < b.1) {
            best = Some((x.into_inner(), v, f));
        }
        history.push(best.as_ref().expect("set above").1);
    }
    let used = history.len();
    let (x0, v0, f0) = best.expect("at least one candidate");
    let r = pattern_search(&mut g, (x0, v0, f0), bounds, budget - used + 1, initial_step)?;
    history.extend_from_slice(&r.history[1..]);
    Ok(InnerResult {
        x: DecisionVector(r.x),
        f: r.payload,
        g: r.value,
        evaluations: used + r.evaluations - 1,
        history,
    })
}

/// Per-call diagnostics, serializable as a debug dump.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IpgReport {
    pub model: TcaModel,
    pub latent_targets: LatentTargetSet,
    pub final_g: Vec<f64>,
    pub transferred: usize,
    pub random_fill: usize,
    pub source_evaluations: usize,
    pub target_evaluations: usize,
}

#[derive(Debug, Clone)]
pub struct IpgOutput {
    /// Evaluated at the new time; transferred individuals first.
    pub population: Vec<Individual>,
    pub report: IpgReport,
}

/// Builds an initial population for time `t_next` from the front found at `t_prev`.
///
/// Evaluations at `t_prev`: exactly `n_s`. Evaluations at `t_next`: at most
/// `n_t_samples + min(|pof|, max_front) * inner_budget` plus one per random fill member.
pub fn tr_ipg<R: Rng + ?Sized>(
    problem: &dyn DynamicProblem,
    t_prev: f64,
    t_next: f64,
    pof_prev: &[ObjectiveVector],
    cfg: &IpgConfig,
    rng: &mut R,
) -> Result<IpgOutput> {
    cfg.validate()?;
    if pof_prev.is_empty() {
        return Err(Error::arg("previous front is empty"));
    }
    let m = problem.objectives();
    if pof_prev.iter().any(|p| p.len() != m) {
        return Err(Error::arg(
            "previous front has objective vectors of the wrong length",
        ));
    }
    let bounds = problem.bounds();

    let source: Vec<ObjectiveVector> = sample_decision_space(bounds, cfg.n_s, rng)
        .iter()
        .map(|x| problem.evaluate(x, t_prev))
        .collect::<Result<_>>()?;
    let target: Vec<ObjectiveVector> = sample_decision_space(bounds, cfg.n_t_samples, rng)
        .iter()
        .map(|x| problem.evaluate(x, t_next))
        .collect::<Result<_>>()?;
    let bank: Vec<ObjectiveVector> = source.iter().chain(&target).cloned().collect();
    let kernel = cfg.kernel.resolve(&bank)?;
    let model = tca_fit(&source, &target, kernel, cfg.d, cfg.mu)?;

    let front: Vec<ObjectiveVector> = if pof_prev.len() > cfg.max_front {
        let mut keep = sample(rng, pof_prev.len(), cfg.max_front).into_vec();
        keep.sort_unstable();
        keep.into_iter().map(|i| pof_prev[i].clone()).collect()
    } else {
        pof_prev.to_vec()
    };
    let latent = build_latent_targets(&model, &front)?;

    let stream_seed: [u8; 32] = rng.random();
    let results: Vec<InnerResult> = latent
        .targets
        .par_iter()
        .enumerate()
        .map(|(i, l)| {
            let mut local = ChaCha8Rng::from_seed(stream_seed);
            local.set_stream(i as u64);
            inner_minimize(
                problem,
                t_next,
                &model,
                l,
                cfg.inner_budget,
                cfg.probes,
                cfg.initial_step,
                None,
                &mut local,
            )
        })
        .collect::<Result<_>>()?;
    let final_g: Vec<f64> = results.iter().map(|r| r.g).collect();
    let inner_evals: usize = results.iter().map(|r| r.evaluations).sum();

    let n = cfg.target_pop_size;
    let mut ranked: Vec<(usize, InnerResult)> = results.into_iter().enumerate().collect();
    if ranked.len() > n {
        ranked.sort_by(|a, b| a.1.g.total_cmp(&b.1.g).then(a.0.cmp(&b.0)));
        ranked.truncate(n);
        ranked.sort_by_key(|r| r.0);
    }
    let transferred = ranked.len();
    let mut population: Vec<Individual> = ranked
        .into_iter()
        .map(|(_, r)| Individual::new(r.x, r.f))
        .collect();
    let random_fill = n - transferred;
    for _ in 0..random_fill {
        let x = sample_point(bounds, rng);
        let f = problem.evaluate(&x, t_next)?;
        population.push(Individual::new(x, f));
    }

    Ok(IpgOutput {
        population,
        report: IpgReport {
            model,
            latent_targets: latent,
            final_g,
            transferred,
            random_fill,
            source_evaluations: cfg.n_s,
            target_evaluations: cfg.n_t_samples + inner_evals + random_fill,
        },
    })
}
