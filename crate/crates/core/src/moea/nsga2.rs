use rand::Rng;
use serde::{Deserialize, Serialize};

use super::operators::{
    assign_rank_and_crowding, environmental_selection, evaluate_all, polynomial_mutation, sbx, tournament,
};
use super::{Individual, ParetoArchive};
use crate::bench::{DecisionVector, DynamicProblem};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Nsga2Params {
    pub crossover_prob: f64,
    pub crossover_eta: f64,
    pub mutation_eta: f64,
    /// Per-variable mutation probability; `None` means `1/n`.
    pub mutation_prob: Option<f64>,
}

impl Default for Nsga2Params {
    fn default() -> Self {
        Self {
            crossover_prob: 0.9,
            crossover_eta: 15.0,
            mutation_eta: 20.0,
            mutation_prob: None,
        }
    }
}

/// Runs NSGA-II for `generations` generations from an evaluated population and
/// returns its final nondominated set. Uses exactly `init.len() * generations`
/// objective evaluations.
pub fn nsga2_run<R: Rng + ?Sized>(
    problem: &dyn DynamicProblem,
    t: f64,
    init: Vec<Individual>,
    generations: usize,
    params: &Nsga2Params,
    rng: &mut R,
) -> Result<ParetoArchive> {
    if init.is_empty() {
        return Err(Error::arg("nsga2 needs a nonempty initial population"));
    }
    let n = init.len();
    let bounds = problem.bounds();
    let pm = params.mutation_prob.unwrap_or(1.0 / problem.dimension() as f64);
    let mut pop = init;
    assign_rank_and_crowding(&mut pop);
    for _ in 0..generations {
        let mut children = Vec::with_capacity(n);
        while children.len() < n {
            let a = tournament(&pop, rng);
            let b = tournament(&pop, rng);
            let (mut c1, mut c2) = if rng.random::<f64>() < params.crossover_prob {
                sbx(&a.x, &b.x, bounds, params.crossover_eta, rng)
            } else {
                (a.x.to_vec(), b.x.to_vec())
            };
            polynomial_mutation(&mut c1, bounds, params.mutation_eta, pm, rng);
            polynomial_mutation(&mut c2, bounds, params.mutation_eta, pm, rng);
            children.push(DecisionVector(c1));
            if children.len() < n {
                children.push(DecisionVector(c2));
            }
        }
        let mut combined = pop;
        combined.extend(evaluate_all(problem, t, children)?);
        pop = environmental_selection(combined, n);
    }
    Ok(ParetoArchive::from_population(t, pop))
}
