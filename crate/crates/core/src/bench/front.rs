//! Analytic Pareto fronts of the benchmark problems.

use std::f64::consts::PI;

use super::problems::{dmop_h, fda_g, sphere3, ProblemKind};
use super::vector::ObjectiveVector;
use crate::error::{Error, Result};

/// Default reference-front size: 500 points for two objectives, a 33x33 grid for three.
pub fn default_front_size(objectives: usize) -> usize {
    if objectives >= 3 {
        33 * 33
    } else {
        500
    }
}

pub(crate) fn true_front(kind: ProblemKind, t: f64, k: usize) -> Result<Vec<ObjectiveVector>> {
    if k < 2 {
        return Err(Error::arg("true front needs at least two points"));
    }
    use ProblemKind::*;
    let front = match kind {
        Fda4 => sphere_grid(1.0, k),
        Fda5 | Fda5Iso | Fda5Dec => sphere_grid(1.0 + fda_g(t), k),
        Dimp2 | Dmop3 => curve(k, |f1| 1.0 - f1.sqrt()),
        Dmop2 | Dmop2Iso | Dmop2Dec => {
            let h = dmop_h(t);
            curve(k, |f1| 1.0 - f1.powf(h))
        }
        He2 => {
            let h = dmop_h(t);
            let dense = curve((40 * k).max(20_000), |f1| {
                1.0 - f1.powf(0.5 * h) - f1.powf(h) * (10.0 * PI * f1).sin()
            });
            spread(&nondominated_2d(dense), k)
        }
        He7 => {
            let h = dmop_h(t);
            curve(k, |f1| {
                let g = 2.0 - f1.sqrt();
                g * (1.0 - (f1 / g).powf(h))
            })
        }
        He9 => {
            let h = dmop_h(t);
            curve(k, |f1| {
                let g = 2.0 - f1 * f1;
                g * (1.0 - (f1 / g).powf(h))
            })
        }
    };
    Ok(front)
}

fn curve(k: usize, f2: impl Fn(f64) -> f64) -> Vec<ObjectiveVector> {
    (0..k)
        .map(|i| {
            let f1 = i as f64 / (k - 1) as f64;
            ObjectiveVector(vec![f1, f2(f1)])
        })
        .collect()
}

/// `k` points of an `s x s` angle grid on the positive octant of a sphere of radius `r`,
/// `s = ceil(sqrt(k))`, picked at evenly spaced grid indices.
fn sphere_grid(r: f64, k: usize) -> Vec<ObjectiveVector> {
    let s = (k as f64).sqrt().ceil() as usize;
    let grid: Vec<ObjectiveVector> = (0..s)
        .flat_map(|i| (0..s).map(move |j| (i, j)))
        .map(|(i, j)| {
            let u = i as f64 / (s - 1) as f64;
            let v = j as f64 / (s - 1) as f64;
            ObjectiveVector(sphere3(r, u, v))
        })
        .collect();
    spread(&grid, k)
}

fn spread(points: &[ObjectiveVector], k: usize) -> Vec<ObjectiveVector> {
    if points.len() == k {
        return points.to_vec();
    }
    let last = points.len() - 1;
    (0..k)
        .map(|i| points[((i as f64) * last as f64 / (k - 1) as f64).round() as usize].clone())
        .collect()
}

/// Nondominated subset of points already sorted by ascending `f1`.
fn nondominated_2d(points: Vec<ObjectiveVector>) -> Vec<ObjectiveVector> {
    let mut best = f64::INFINITY;
    points
        .into_iter()
        .filter(|p| {
            if p[1] < best {
                best = p[1];
                true
            } else {
                false
            }
        })
        .collect()
}
