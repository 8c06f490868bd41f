use std::sync::atomic::{AtomicUsize, Ordering};

use super::vector::{Bounds, DecisionVector, ObjectiveVector};
use super::{DmopType, DynamicProblem};
use crate::error::Result;

/// Wraps a problem and tallies objective evaluations per environment time.
///
/// Times are matched against a fixed schedule; evaluations at any other `t` land in
/// a separate bucket.
pub struct CountingProblem<'a> {
    inner: &'a dyn DynamicProblem,
    schedule: Vec<f64>,
    counts: Vec<AtomicUsize>,
    other: AtomicUsize,
}

impl<'a> CountingProblem<'a> {
    pub fn new(inner: &'a dyn DynamicProblem, schedule: &[f64]) -> Self {
        Self {
            inner,
            schedule: schedule.to_vec(),
            counts: schedule.iter().map(|_| AtomicUsize::new(0)).collect(),
            other: AtomicUsize::new(0),
        }
    }

    fn slot(&self, t: f64) -> Option<usize> {
        self.schedule.iter().position(|s| s.to_bits() == t.to_bits())
    }

    /// Evaluations performed at the `k`-th scheduled time.
    pub fn count_at(&self, k: usize) -> usize {
        self.counts[k].load(Ordering::Relaxed)
    }

    pub fn count_unscheduled(&self) -> usize {
        self.other.load(Ordering::Relaxed)
    }

    pub fn total(&self) -> usize {
        self.counts
            .iter()
            .map(|c| c.load(Ordering::Relaxed))
            .sum::<usize>()
            + self.count_unscheduled()
    }
}

impl DynamicProblem for CountingProblem<'_> {
    fn name(&self) -> &str {
        self.inner.name()
    }

    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    fn objectives(&self) -> usize {
        self.inner.objectives()
    }

    fn bounds(&self) -> &Bounds {
        self.inner.bounds()
    }

    fn dmop_type(&self) -> DmopType {
        self.inner.dmop_type()
    }

    fn evaluate(&self, x: &DecisionVector, t: f64) -> Result<ObjectiveVector> {
        match self.slot(t) {
            Some(k) => self.counts[k].fetch_add(1, Ordering::Relaxed),
            None => self.other.fetch_add(1, Ordering::Relaxed),
        };
        self.inner.evaluate(x, t)
    }

    fn true_pof(&self, t: f64, k: usize) -> Result<Vec<ObjectiveVector>> {
        self.inner.true_pof(t, k)
    }
}
