use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::bench::ObjectiveVector;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum KernelSpec {
    /// `exp(-|x - y|^2 / (2 sigma^2))`
    Gaussian { sigma: f64 },
    /// `<x, y>`
    Linear,
}

impl KernelSpec {
    pub fn gaussian(sigma: f64) -> Result<Self> {
        let k = KernelSpec::Gaussian { sigma };
        k.validate()?;
        Ok(k)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            KernelSpec::Gaussian { sigma } if !(sigma > 0.0 && sigma.is_finite()) => Err(Error::arg(
                format!("gaussian bandwidth must be positive, got {sigma}"),
            )),
            _ => Ok(()),
        }
    }

    /// Kernel value without the length check.
    #[inline]
    pub(crate) fn apply(&self, x: &[f64], y: &[f64]) -> f64 {
        match *self {
            KernelSpec::Gaussian { sigma } => {
                let d2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
                (-d2 / (2.0 * sigma * sigma)).exp()
            }
            KernelSpec::Linear => x.iter().zip(y).map(|(a, b)| a * b).sum(),
        }
    }
}

pub fn kernel_eval(k: &KernelSpec, x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::arg(format!(
            "kernel arguments differ in length ({} vs {})",
            x.len(),
            y.len()
        )));
    }
    Ok(k.apply(x, y))
}

/// Median of all pairwise Euclidean distances; `1.0` when that median is zero.
/// For an even number of pairs the two middle values are averaged.
pub fn median_bandwidth(points: &[ObjectiveVector]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::arg("median bandwidth needs at least two points"));
    }
    let mut dists = Vec::with_capacity(points.len() * (points.len() - 1) / 2);
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            dists.push(
                p.iter()
                    .zip(q.iter())
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt(),
            );
        }
    }
    dists.sort_by(f64::total_cmp);
    let mid = dists.len() / 2;
    let median = if dists.len() % 2 == 1 {
        dists[mid]
    } else {
        0.5 * (dists[mid - 1] + dists[mid])
    };
    Ok(if median > 0.0 { median } else { 1.0 })
}

pub fn gram_matrix(points: &[ObjectiveVector], k: &KernelSpec) -> Result<DMatrix<f64>> {
    if points.is_empty() {
        return Err(Error::arg("gram matrix needs at least one point"));
    }
    let dim = points[0].len();
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::arg("gram matrix points differ in length"));
    }
    let n = points.len();
    let mut g = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = k.apply(&points[i], &points[j]);
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    Ok(g)
}
