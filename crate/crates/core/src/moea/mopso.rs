use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::operators::evaluate_all;
use super::{dominates_slices, Individual, ParetoArchive};
use crate::bench::{Bounds, DecisionVector, DynamicProblem};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MopsoParams {
    pub inertia: f64,
    pub cognitive: f64,
    pub social: f64,
    pub grid_divisions: usize,
    /// Initial mutation rate; the mutated fraction decays to zero over the run.
    pub mutation_rate: f64,
}

impl Default for MopsoParams {
    fn default() -> Self {
        Self {
            inertia: 0.4,
            cognitive: 1.0,
            social: 1.0,
            grid_divisions: 30,
            mutation_rate: 0.5,
        }
    }
}

/// One velocity and position step. Positions leaving the box are clamped and the
/// offending velocity component reversed.
#[allow(clippy::too_many_arguments)]
pub fn update_particle<R: Rng + ?Sized>(
    x: &mut [f64],
    v: &mut [f64],
    personal_best: &[f64],
    leader: &[f64],
    params: &MopsoParams,
    bounds: &Bounds,
    rng: &mut R,
) {
    for i in 0..x.len() {
        let r1: f64 = rng.random();
        let r2: f64 = rng.random();
        v[i] = params.inertia * v[i]
            + params.cognitive * r1 * (personal_best[i] - x[i])
            + params.social * r2 * (leader[i] - x[i]);
        x[i] += v[i];
        let clamped = bounds.clamp(i, x[i]);
        if clamped != x[i] {
            x[i] = clamped;
            v[i] = -v[i];
        }
    }
}

struct Repository {
    members: Vec<Individual>,
    capacity: usize,
    divisions: usize,
}

impl Repository {
    fn insert(&mut self, cand: &Individual) -> bool {
        if self
            .members
            .iter()
            .any(|m| m.f == cand.f || dominates_slices(&m.f, &cand.f))
        {
            return false;
        }
        self.members.retain(|m| !dominates_slices(&cand.f, &m.f));
        self.members.push(cand.clone());
        true
    }

    fn cells(&self) -> Vec<Vec<usize>> {
        let m = self.members[0].f.len();
        let mut lo = vec![f64::INFINITY; m];
        let mut hi = vec![f64::NEG_INFINITY; m];
        for ind in &self.members {
            for j in 0..m {
                lo[j] = lo[j].min(ind.f[j]);
                hi[j] = hi[j].max(ind.f[j]);
            }
        }
        let div = self.divisions.max(1);
        self.members
            .iter()
            .map(|ind| {
                (0..m)
                    .map(|j| {
                        let range = hi[j] - lo[j];
                        if range <= 0.0 {
                            0
                        } else {
                            (((ind.f[j] - lo[j]) / range * div as f64) as usize).min(div - 1)
                        }
                    })
                    .collect()
            })
            .collect()
    }

    fn grid(&self) -> BTreeMap<Vec<usize>, Vec<usize>> {
        let mut grid: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (i, c) in self.cells().into_iter().enumerate() {
            grid.entry(c).or_default().push(i);
        }
        grid
    }

    fn truncate<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        while self.members.len() > self.capacity {
            let grid = self.grid();
            let crowded = grid
                .values()
                .max_by(|a, b| a.len().cmp(&b.len()).then(b.cmp(a)))
                .expect("repository nonempty");
            let victim = crowded[rng.random_range(0..crowded.len())];
            self.members.swap_remove(victim);
        }
    }

    /// Roulette over occupied hypercubes with fitness 10 / occupancy.
    fn leader<R: Rng + ?Sized>(&self, grid: &[(f64, &Vec<usize>)], total: f64, rng: &mut R) -> &[f64] {
        let mut pick = rng.random::<f64>() * total;
        let mut chosen = grid.last().expect("repository nonempty").1;
        for (w, cell) in grid {
            if pick < *w {
                chosen = cell;
                break;
            }
            pick -= w;
        }
        &self.members[chosen[rng.random_range(0..chosen.len())]].x
    }
}

/// Multiobjective particle swarm with an external grid-managed repository capped at
/// `init.len()`. Uses exactly `init.len() * generations` objective evaluations.
pub fn mopso_run<R: Rng + ?Sized>(
    problem: &dyn DynamicProblem,
    t: f64,
    init: Vec<Individual>,
    generations: usize,
    params: &MopsoParams,
    rng: &mut R,
) -> Result<ParetoArchive> {
    if init.is_empty() {
        return Err(Error::arg("mopso needs a nonempty initial population"));
    }
    let n = init.len();
    let dim = problem.dimension();
    let bounds = problem.bounds();
    let mut repo = Repository {
        members: Vec::new(),
        capacity: n,
        divisions: params.grid_divisions,
    };
    for ind in &init {
        repo.insert(ind);
    }
    repo.truncate(rng);

    let mut swarm = init;
    let mut best = swarm.clone();
    let mut velocity = vec![vec![0.0; dim]; n];

    for gen in 0..generations {
        let grid = repo.grid();
        let weighted: Vec<(f64, &Vec<usize>)> = grid.values().map(|c| (10.0 / c.len() as f64, c)).collect();
        let total: f64 = weighted.iter().map(|w| w.0).sum();

        let mut moved = Vec::with_capacity(n);
        for i in 0..n {
            let leader = repo.leader(&weighted, total, rng).to_vec();
            let mut x = swarm[i].x.to_vec();
            update_particle(&mut x, &mut velocity[i], &best[i].x, &leader, params, bounds, rng);
            mutate(&mut x, bounds, gen, generations, params.mutation_rate, rng);
            moved.push(DecisionVector(x));
        }
        swarm = evaluate_all(problem, t, moved)?;

        for (i, p) in swarm.iter().enumerate() {
            if dominates_slices(&p.f, &best[i].f)
                || (!dominates_slices(&best[i].f, &p.f) && rng.random::<bool>())
            {
                best[i] = p.clone();
            }
            repo.insert(p);
        }
        repo.truncate(rng);
    }
    Ok(ParetoArchive::from_population(t, repo.members))
}

// Perturbs one coordinate of a decaying fraction of particles within a shrinking window.
fn mutate<R: Rng + ?Sized>(
    x: &mut [f64],
    bounds: &Bounds,
    gen: usize,
    generations: usize,
    rate: f64,
    rng: &mut R,
) {
    if rate <= 0.0 {
        return;
    }
    let p = (1.0 - gen as f64 / generations as f64).powf(1.0 / rate);
    if rng.random::<f64>() >= p {
        return;
    }
    let j = rng.random_range(0..x.len());
    let half = 0.5 * bounds.width(j) * p;
    let lo = (x[j] - half).max(bounds.lower()[j]);
    let hi = (x[j] + half).min(bounds.upper()[j]);
    x[j] = lo + (hi - lo) * rng.random::<f64>();
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn zero_coefficients_leave_position() {
        let bounds = Bounds::new(vec![0.0; 3], vec![1.0; 3]).unwrap();
        let params = MopsoParams {
            inertia: 0.0,
            cognitive: 0.0,
            social: 0.0,
            ..MopsoParams::default()
        };
        let mut x = vec![0.1, 0.5, 0.9];
        let mut v = vec![0.0; 3];
        update_particle(
            &mut x,
            &mut v,
            &[1.0; 3],
            &[0.0; 3],
            &params,
            &bounds,
            &mut ChaCha8Rng::seed_from_u64(0),
        );
        assert_eq!(x, vec![0.1, 0.5, 0.9]);
    }

    #[test]
    fn position_clamped_and_velocity_reversed() {
        let bounds = Bounds::new(vec![0.0; 2], vec![1.0; 2]).unwrap();
        let params = MopsoParams {
            inertia: 1.0,
            ..MopsoParams::default()
        };
        let mut x = vec![0.9, 0.1];
        let mut v = vec![5.0, -5.0];
        let anchor = x.clone();
        update_particle(
            &mut x,
            &mut v,
            &anchor,
            &anchor,
            &params,
            &bounds,
            &mut ChaCha8Rng::seed_from_u64(0),
        );
        assert_eq!(x, vec![1.0, 0.0]);
        assert_eq!(v, vec![-5.0, 5.0]);
    }
}
