#![allow(dead_code)]

use rand::Rng;
use trdmoea::bench::{Bounds, DecisionVector, DmopType, DynamicProblem, ObjectiveVector};
use trdmoea::Result;

pub fn dominates_oracle(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y) && a.iter().zip(b).any(|(x, y)| x < y)
}

/// Peels nondominated layers by checking every pair against the remaining set.
pub fn brute_force_fronts(points: &[Vec<f64>]) -> Vec<Vec<usize>> {
    let mut remaining: Vec<usize> = (0..points.len()).collect();
    let mut fronts = Vec::new();
    while !remaining.is_empty() {
        let front: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|&i| {
                !remaining
                    .iter()
                    .any(|&j| dominates_oracle(&points[j], &points[i]))
            })
            .collect();
        remaining.retain(|i| !front.contains(i));
        fronts.push(front);
    }
    fronts
}

pub fn random_objectives<R: Rng>(rng: &mut R, count: usize, m: usize, grid: bool) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| {
            (0..m)
                .map(|_| {
                    if grid {
                        rng.random_range(0..5) as f64
                    } else {
                        rng.random::<f64>()
                    }
                })
                .collect()
        })
        .collect()
}

pub fn to_objectives(points: &[Vec<f64>]) -> Vec<ObjectiveVector> {
    points.iter().map(|p| ObjectiveVector(p.clone())).collect()
}

pub fn igd_oracle(p_star: &[Vec<f64>], p: &[Vec<f64>]) -> f64 {
    let mut total = 0.0;
    for r in p_star {
        let mut best = f64::INFINITY;
        for q in p {
            let d = r
                .iter()
                .zip(q)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            if d < best {
                best = d;
            }
        }
        total += best;
    }
    total / p_star.len() as f64
}

/// Inclusion-exclusion over all nonempty subsets of boxes `[p, ref]`.
pub fn hv_oracle(points: &[Vec<f64>], reference: &[f64]) -> f64 {
    let kept: Vec<&Vec<f64>> = points
        .iter()
        .filter(|p| p.iter().zip(reference).all(|(a, r)| a <= r))
        .collect();
    let n = kept.len();
    let mut total = 0.0;
    for mask in 1u32..(1 << n) {
        let mut corner = vec![f64::NEG_INFINITY; reference.len()];
        for (i, p) in kept.iter().enumerate() {
            if mask & (1 << i) != 0 {
                for j in 0..corner.len() {
                    corner[j] = corner[j].max(p[j]);
                }
            }
        }
        let vol: f64 = corner.iter().zip(reference).map(|(c, r)| r - c).product();
        let sign = if mask.count_ones() % 2 == 1 { 1.0 } else { -1.0 };
        total += sign * vol;
    }
    total
}

/// Static bi-objective problem `f1 = |x|^2 / n`, `f2 = |x - 1|^2 / n` on `[-1, 2]^n`.
/// The front is `{(s^2, (1 - s)^2) : s in [0, 1]}`.
pub struct TwoSpheres {
    bounds: Bounds,
}

impl TwoSpheres {
    pub fn new(n: usize) -> Self {
        Self {
            bounds: Bounds::new(vec![-1.0; n], vec![2.0; n]).unwrap(),
        }
    }

    pub fn front(k: usize) -> Vec<ObjectiveVector> {
        (0..k)
            .map(|i| {
                let s = i as f64 / (k - 1) as f64;
                ObjectiveVector(vec![s * s, (1.0 - s) * (1.0 - s)])
            })
            .collect()
    }
}

impl DynamicProblem for TwoSpheres {
    fn name(&self) -> &str {
        "two-spheres"
    }

    fn dimension(&self) -> usize {
        self.bounds.dim()
    }

    fn objectives(&self) -> usize {
        2
    }

    fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    fn dmop_type(&self) -> DmopType {
        DmopType::TypeI
    }

    fn evaluate(&self, x: &DecisionVector, _t: f64) -> Result<ObjectiveVector> {
        let n = x.len() as f64;
        let f1 = x.iter().map(|v| v * v).sum::<f64>() / n;
        let f2 = x.iter().map(|v| (v - 1.0) * (v - 1.0)).sum::<f64>() / n;
        Ok(ObjectiveVector(vec![f1, f2]))
    }

    fn true_pof(&self, _t: f64, k: usize) -> Result<Vec<ObjectiveVector>> {
        Ok(Self::front(k))
    }
}
