use nalgebra::{DMatrix, DVector};
use rand::seq::index::sample;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::operators::{assign_rank_and_crowding, environmental_selection, evaluate_all};
use super::{Individual, ParetoArchive};
use crate::bench::{Bounds, DecisionVector, DynamicProblem};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RmmedaParams {
    pub clusters: usize,
    /// Fraction of each latent range added on both sides before sampling.
    pub extension: f64,
    pub pca_iterations: usize,
}

impl Default for RmmedaParams {
    fn default() -> Self {
        Self {
            clusters: 5,
            extension: 0.25,
            pca_iterations: 50,
        }
    }
}

struct LocalModel {
    mean: DVector<f64>,
    axes: DMatrix<f64>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    sigma: f64,
    volume: f64,
}

fn principal(points: &[&DVector<f64>], latent: usize) -> (DVector<f64>, DMatrix<f64>, Vec<f64>) {
    let dim = points[0].len();
    let mut mean = DVector::zeros(dim);
    for p in points {
        mean += *p;
    }
    mean /= points.len() as f64;
    let mut cov = DMatrix::zeros(dim, dim);
    for p in points {
        let d = *p - &mean;
        cov += &d * d.transpose();
    }
    cov /= points.len() as f64;
    let eig = cov.symmetric_eigen();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let q = latent.min(dim);
    let axes = DMatrix::from_fn(dim, q, |r, c| eig.eigenvectors[(r, order[c])]);
    let rest: Vec<f64> = order[q..].iter().map(|&i| eig.eigenvalues[i].max(0.0)).collect();
    (mean, axes, rest)
}

fn residual(p: &DVector<f64>, mean: &DVector<f64>, axes: &DMatrix<f64>) -> f64 {
    let d = p - mean;
    let proj = axes * (axes.transpose() * &d);
    (d - proj).norm_squared()
}

fn local_pca<R: Rng + ?Sized>(
    xs: &[DVector<f64>],
    latent: usize,
    params: &RmmedaParams,
    rng: &mut R,
) -> Vec<LocalModel> {
    let n = xs.len();
    let k = params.clusters.clamp(1, n);
    let seeds = sample(rng, n, k).into_vec();
    let mut centres: Vec<(DVector<f64>, DMatrix<f64>)> = seeds
        .iter()
        .map(|&i| (xs[i].clone(), DMatrix::zeros(xs[i].len(), 0)))
        .collect();
    let mut assign = vec![usize::MAX; n];
    for _ in 0..params.pca_iterations.max(1) {
        let mut changed = false;
        for (i, p) in xs.iter().enumerate() {
            let best = (0..centres.len())
                .min_by(|&a, &b| {
                    residual(p, &centres[a].0, &centres[a].1).total_cmp(&residual(
                        p,
                        &centres[b].0,
                        &centres[b].1,
                    ))
                })
                .expect("at least one cluster");
            if assign[i] != best {
                assign[i] = best;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        for (c, centre) in centres.iter_mut().enumerate() {
            let members: Vec<&DVector<f64>> = xs
                .iter()
                .zip(&assign)
                .filter(|(_, &a)| a == c)
                .map(|(p, _)| p)
                .collect();
            if members.len() >= 2 {
                let (mean, axes, _) = principal(&members, latent);
                *centre = (mean, axes);
            }
        }
    }

    let mut models = Vec::new();
    for c in 0..centres.len() {
        let members: Vec<&DVector<f64>> = xs
            .iter()
            .zip(&assign)
            .filter(|(_, &a)| a == c)
            .map(|(p, _)| p)
            .collect();
        if members.len() < 2 {
            continue;
        }
        let (mean, axes, rest) = principal(&members, latent);
        let q = axes.ncols();
        let mut lo = vec![f64::INFINITY; q];
        let mut hi = vec![f64::NEG_INFINITY; q];
        for p in &members {
            let z = axes.transpose() * (*p - &mean);
            for j in 0..q {
                lo[j] = lo[j].min(z[j]);
                hi[j] = hi[j].max(z[j]);
            }
        }
        let mut volume = 1.0;
        for j in 0..q {
            let ext = params.extension * (hi[j] - lo[j]);
            lo[j] -= ext;
            hi[j] += ext;
            volume *= (hi[j] - lo[j]).max(1e-12);
        }
        let sigma = if rest.is_empty() {
            0.0
        } else {
            (rest.iter().sum::<f64>() / rest.len() as f64).sqrt()
        };
        models.push(LocalModel {
            mean,
            axes,
            lo,
            hi,
            sigma,
            volume,
        });
    }
    models
}

fn sample_model<R: Rng + ?Sized>(model: &LocalModel, bounds: &Bounds, rng: &mut R) -> DecisionVector {
    let mut x = model.mean.clone();
    for j in 0..model.axes.ncols() {
        let z = model.lo[j] + (model.hi[j] - model.lo[j]) * rng.random::<f64>();
        x += model.axes.column(j) * z;
    }
    let mut out: Vec<f64> = x
        .iter()
        .map(|v| v + model.sigma * rng.sample::<f64, _>(StandardNormal))
        .collect();
    bounds.clamp_in_place(&mut out);
    DecisionVector(out)
}

/// Regularity-model EDA: local PCA over the population, sampling from the extended
/// (M-1)-dimensional piecewise model plus isotropic noise, NSGA-II style selection.
pub fn rmmeda_run<R: Rng + ?Sized>(
    problem: &dyn DynamicProblem,
    t: f64,
    init: Vec<Individual>,
    generations: usize,
    params: &RmmedaParams,
    rng: &mut R,
) -> Result<ParetoArchive> {
    if init.is_empty() {
        return Err(Error::arg("rmmeda needs a nonempty initial population"));
    }
    let n = init.len();
    let latent = problem.objectives().saturating_sub(1).max(1);
    let bounds = problem.bounds();
    let mut pop = init;
    assign_rank_and_crowding(&mut pop);
    for _ in 0..generations {
        let xs: Vec<DVector<f64>> = pop.iter().map(|i| DVector::from_column_slice(&i.x)).collect();
        let models = local_pca(&xs, latent, params, rng);
        let children: Vec<DecisionVector> = if models.is_empty() {
            crate::bench::sample_decision_space(bounds, n, rng)
        } else {
            let total: f64 = models.iter().map(|m| m.volume).sum();
            (0..n)
                .map(|_| {
                    let mut pick = rng.random::<f64>() * total;
                    let mut chosen = models.last().expect("nonempty");
                    for m in &models {
                        if pick < m.volume {
                            chosen = m;
                            break;
                        }
                        pick -= m.volume;
                    }
                    sample_model(chosen, bounds, rng)
                })
                .collect()
        };
        let mut combined = pop;
        combined.extend(evaluate_all(problem, t, children)?);
        pop = environmental_selection(combined, n);
    }
    Ok(ParetoArchive::from_population(t, pop))
}
