//! Population-based multiobjective optimizers and the dynamic outer loop.

mod dominance;
mod dynamic;
mod mopso;
mod nsga2;
pub mod operators;
mod rmmeda;

use serde::{Deserialize, Serialize};

pub use dominance::{crowding_distance, dominates, fast_nondominated_sort, nondominated_indices, Objectives};

pub use dynamic::{
    trdmoea_run, trdmoea_run_with, AlgorithmId, BaseAlgorithm, ChangeOutcome, DynamicConfig, TransferSummary,
};
pub use mopso::{mopso_run, update_particle, MopsoParams};
pub use nsga2::{nsga2_run, Nsga2Params};
pub use rmmeda::{rmmeda_run, RmmedaParams};

pub(crate) use dominance::dominates_slices;

use crate::bench::{DecisionVector, ObjectiveVector};

/// A decision vector with its objective values at the current environment time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Individual {
    pub x: DecisionVector,
    pub f: ObjectiveVector,
    pub rank: usize,
    pub crowding: f64,
}

impl Individual {
    pub fn new(x: DecisionVector, f: ObjectiveVector) -> Self {
        Self {
            x,
            f,
            rank: 0,
            crowding: 0.0,
        }
    }
}

/// Mutually nondominated individuals evaluated at time `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParetoArchive {
    pub t: f64,
    pub members: Vec<Individual>,
}

impl ParetoArchive {
    /// Keeps the nondominated members of `pop`, dropping exact objective duplicates.
    pub fn from_population(t: f64, pop: Vec<Individual>) -> Self {
        let keep = nondominated_indices(&pop);
        let mut members: Vec<Individual> = Vec::with_capacity(keep.len());
        let mut pop: Vec<Option<Individual>> = pop.into_iter().map(Some).collect();
        for i in keep {
            let ind = pop[i].take().expect("index visited once");
            if !members.iter().any(|m| m.f == ind.f) {
                members.push(ind);
            }
        }
        Self { t, members }
    }

    pub fn objectives(&self) -> Vec<ObjectiveVector> {
        self.members.iter().map(|m| m.f.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}
