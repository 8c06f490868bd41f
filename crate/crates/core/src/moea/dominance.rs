use crate::bench::ObjectiveVector;
use crate::error::{Error, Result};

use super::Individual;

/// Anything carrying an objective vector.
pub trait Objectives {
    fn objectives(&self) -> &[f64];
}

impl Objectives for ObjectiveVector {
    fn objectives(&self) -> &[f64] {
        self
    }
}

impl Objectives for Vec<f64> {
    fn objectives(&self) -> &[f64] {
        self
    }
}

impl Objectives for Individual {
    fn objectives(&self) -> &[f64] {
        &self.f
    }
}

impl<T: Objectives + ?Sized> Objectives for &T {
    fn objectives(&self) -> &[f64] {
        (**self).objectives()
    }
}

/// Pareto dominance for minimization: no worse everywhere, strictly better somewhere.
pub fn dominates<T: Objectives + ?Sized>(a: &T, b: &T) -> Result<bool> {
    let (fa, fb) = (a.objectives(), b.objectives());
    if fa.len() != fb.len() {
        return Err(Error::arg(format!(
            "objective counts differ ({} vs {})",
            fa.len(),
            fb.len()
        )));
    }
    Ok(dominates_slices(fa, fb))
}

#[inline]
pub(crate) fn dominates_slices(a: &[f64], b: &[f64]) -> bool {
    let mut strict = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strict = true;
        }
    }
    strict
}

/// Fronts of indices into `pop`, best front first. Every member of front `k` is
/// nondominated within fronts `k, k+1, ...`.
pub fn fast_nondominated_sort<T: Objectives>(pop: &[T]) -> Vec<Vec<usize>> {
    let n = pop.len();
    let mut dominated_by: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut counts = vec![0usize; n];
    let mut current = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (pop[i].objectives(), pop[j].objectives());
            if dominates_slices(a, b) {
                dominated_by[i].push(j);
                counts[j] += 1;
            } else if dominates_slices(b, a) {
                dominated_by[j].push(i);
                counts[i] += 1;
            }
        }
    }
    for (i, c) in counts.iter().enumerate() {
        if *c == 0 {
            current.push(i);
        }
    }
    let mut fronts = Vec::new();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominated_by[i] {
                counts[j] -= 1;
                if counts[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(std::mem::replace(&mut current, next));
    }
    fronts
}

/// Indices of the nondominated members, in input order.
pub fn nondominated_indices<T: Objectives>(pop: &[T]) -> Vec<usize> {
    (0..pop.len())
        .filter(|&i| {
            !pop.iter()
                .any(|q| dominates_slices(q.objectives(), pop[i].objectives()))
        })
        .collect()
}

/// NSGA-II crowding distance. Extreme members of each objective get `+inf`; a zero
/// objective range contributes nothing.
pub fn crowding_distance<T: Objectives>(front: &[T]) -> Vec<f64> {
    let n = front.len();
    if n == 0 {
        return Vec::new();
    }
    let mut dist = vec![0.0; n];
    if n <= 2 {
        dist.fill(f64::INFINITY);
        return dist;
    }
    let m = front[0].objectives().len();
    let mut order: Vec<usize> = (0..n).collect();
    for k in 0..m {
        order.sort_by(|&a, &b| {
            front[a].objectives()[k]
                .total_cmp(&front[b].objectives()[k])
                .then(a.cmp(&b))
        });
        let lo = front[order[0]].objectives()[k];
        let hi = front[order[n - 1]].objectives()[k];
        dist[order[0]] = f64::INFINITY;
        dist[order[n - 1]] = f64::INFINITY;
        let range = hi - lo;
        if range <= 0.0 {
            continue;
        }
        for w in 1..n - 1 {
            let i = order[w];
            if dist[i].is_finite() {
                let gap = front[order[w + 1]].objectives()[k] - front[order[w - 1]].objectives()[k];
                dist[i] += gap / range;
            }
        }
    }
    dist
}
