//! Dynamic benchmark problems, the discrete time model and true-front sampling.

mod counting;
mod front;
mod problems;
mod time;
pub mod transform;
mod vector;

use std::io::Write;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use counting::CountingProblem;
pub use front::default_front_size;
pub use problems::{Benchmark, ProblemKind};
pub use time::{EnvId, EnvironmentConfig, TimeModel};
pub use vector::{Bounds, DecisionVector, ObjectiveVector};

use crate::error::{Error, Result};

/// Which part of the problem moves over time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DmopType {
    /// The Pareto set moves, the front stays.
    TypeI,
    /// Both move.
    TypeII,
    /// The front moves, the set stays.
    TypeIII,
}

/// A minimization problem `F(x, t)` over a box.
///
/// `evaluate` must be a pure function of `(x, t)`.
pub trait DynamicProblem: Send + Sync {
    fn name(&self) -> &str;
    fn dimension(&self) -> usize;
    fn objectives(&self) -> usize;
    fn bounds(&self) -> &Bounds;
    fn dmop_type(&self) -> DmopType;
    fn evaluate(&self, x: &DecisionVector, t: f64) -> Result<ObjectiveVector>;

    /// `k` points of the analytic Pareto front at `t`.
    fn true_pof(&self, t: f64, k: usize) -> Result<Vec<ObjectiveVector>> {
        let _ = (t, k);
        Err(Error::Unsupported(format!(
            "{} has no closed-form Pareto front",
            self.name()
        )))
    }
}

/// Looks up a benchmark by its registry name (`FDA4`, `DMOP2_iso`, ...).
pub fn problem(name: &str) -> Result<Benchmark> {
    Ok(Benchmark::new(name.parse()?))
}

pub fn problem_names() -> impl Iterator<Item = &'static str> {
    ProblemKind::ALL.iter().map(|k| k.name())
}

/// `count` points drawn uniformly from the box.
pub fn sample_decision_space<R: Rng + ?Sized>(
    bounds: &Bounds,
    count: usize,
    rng: &mut R,
) -> Vec<DecisionVector> {
    (0..count).map(|_| sample_point(bounds, rng)).collect()
}

pub fn sample_point<R: Rng + ?Sized>(bounds: &Bounds, rng: &mut R) -> DecisionVector {
    DecisionVector(
        bounds
            .lower()
            .iter()
            .zip(bounds.upper())
            .map(|(l, u)| l + (u - l) * rng.random::<f64>())
            .collect(),
    )
}

/// Writes one objective vector per row under a `f1,...,fM` header.
pub fn write_front_csv<W: Write>(mut out: W, front: &[ObjectiveVector]) -> std::io::Result<()> {
    let m = front.first().map_or(0, |p| p.len());
    let header: Vec<String> = (1..=m).map(|i| format!("f{i}")).collect();
    writeln!(out, "{}", header.join(","))?;
    for p in front {
        let row: Vec<String> = p.iter().map(|v| v.to_string()).collect();
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}
